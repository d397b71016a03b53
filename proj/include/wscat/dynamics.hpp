#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "wscat/potential.hpp"
#include "wscat/scattering.hpp"
#include "wscat/weyl.hpp"

namespace wscat {

// Gaussian packet incident from the left on the periodic box [-L, L).
struct PacketSpec {
    double x0 = -60.0;
    double k0 = 1.0;
    double sigma_x = 8.0;
    double L = 200.0;
    std::size_t N = 8192;
    double dt = 0.005;
    double t_max = 400.0;
};

// Throws InvalidPacketSpec if the packet does not start in the tail region,
// is not narrow-band, or is under-resolved by the grid.
void check_packet_spec(const PacketSpec& spec, double support);

// Samples psi_j at x_j = x_min + j dx.
struct WaveFunction {
    double x_min = 0.0;
    double dx = 0.0;
    std::vector<std::complex<double>> psi;

    double x(std::size_t j) const noexcept { return x_min + static_cast<double>(j) * dx; }
    double norm() const noexcept;
    // Mass on x < c; a node exactly at c contributes half its weight.
    double mass_left_of(double c) const noexcept;
    double mass_between(double a, double b) const noexcept;
};

WaveFunction initial_packet(const PacketSpec& spec);

// Norm-preserving Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2)
// with the kinetic factor applied exactly in Fourier space.
class SplitStepPropagator {
public:
    SplitStepPropagator(const Potential& p, const PacketSpec& spec);
    ~SplitStepPropagator();
    SplitStepPropagator(const SplitStepPropagator&) = delete;
    SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

    void advance(WaveFunction& wf, std::size_t steps);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct MomentumDensity {
    double dk = 0.0;
    std::vector<double> k;        // ascending
    std::vector<double> density;  // sum(density) * dk == 1
};

MomentumDensity momentum_density(const PacketSpec& spec);

struct TraceRow {
    double t = 0.0;
    double left_mass = 0.0;
    double right_mass = 0.0;
    double interaction_mass = 0.0;
};

struct EvolveOptions {
    SolverOptions solver;
    double s_threshold = kDefaultSupportThreshold;
    std::size_t check_stride = 10;
    std::size_t trace_stride = 0;  // 0 disables the trace
    std::function<void(const TraceRow&)> trace;
    unsigned threads = 0;
};

struct PacketResult {
    double left_mass = 0.0;
    double right_mass = 0.0;
    double norm_drift = 0.0;
    double predicted_reflect = 0.0;
    double t_stop = 0.0;
    double interaction_mass = 0.0;
    double interaction_radius = 0.0;
    std::size_t steps = 0;
    WaveFunction final_state;
};

// Stopping rule: the earliest check time after the packet centre could
// classically reach the interaction region |x| <= R at which the mass there is
// below 1e-6; R = max(effective_support, 1).
PacketResult evolve_packet(const Potential& p, const PacketSpec& spec,
                           const EvolveOptions& opts = {});

// Packet-averaged reflection, sum over k > 0 of |R(k^2)|^2 |phi(k)|^2 dk.
double predicted_reflection(const Potential& p, const MomentumDensity& density,
                            const EvolveOptions& opts = {});

}  // namespace wscat
