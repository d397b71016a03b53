#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "wscat/potential.hpp"
#include "wscat/weyl.hpp"

namespace wscat {

inline constexpr double kDefaultSupportThreshold = 1e-8;
inline constexpr double kResonanceFloor = 1e-14;

// 2x2 scattering matrix of the pair (H, H_inf) on the space where each
// channel is weighted by the indicator of its essential support.
struct ScatteringMatrix2 {
    double lambda = 0.0;
    cplx s_ll, s_lr, s_rl, s_rr;

    // max_{ij} |(s s^*)_{ij} - delta_ij|
    double unitarity_residual() const noexcept;
};

struct ReflectionRecord {
    double lambda = 0.0;
    cplx g00;
    cplx r_spectral;
    double reflect_prob = 1.0;
    double transmit_prob = 0.0;
    bool in_S_l = false;
    bool in_S_r = false;
    double support_threshold = kDefaultSupportThreshold;
    double err_estimate = 0.0;
};

// G_00 = -1 / (m_l + m_r). Throws ResonantDenominator when |m_l + m_r| < 1e-14.
cplx green00(cplx m_l, cplx m_r);

// s_ab = delta_ab + 2i G_00 sqrt(Im m_a Im m_b), with Im m clamped at 0.
ScatteringMatrix2 scattering_matrix(double lambda, const MValue& m_l, const MValue& m_r);

// r = (m_r + conj m_l) / (m_r + m_l) on S_l, r = 1 off S_l.
ReflectionRecord spectral_reflection(double lambda, const MValue& m_l, const MValue& m_r,
                                     double s_threshold = kDefaultSupportThreshold);

struct BoundaryPair {
    MValue left;
    MValue right;
};

BoundaryPair boundary_pair(const Potential& p, double lambda, const SolverOptions& opts = {});

ReflectionRecord reflection_at(const Potential& p, double lambda, const SolverOptions& opts = {},
                               double s_threshold = kDefaultSupportThreshold);

struct ReflectionlessWindow {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t first = 0;  // grid indices, inclusive
    std::size_t last = 0;
    double max_reflect_prob = 0.0;
};

// Maximal runs of consecutive grid nodes with reflect_prob <= zero_tol.
// No claim is made between nodes.
std::vector<ReflectionlessWindow> reflectionless_windows(std::span<const double> grid,
                                                         std::span<const ReflectionRecord> records,
                                                         double zero_tol);

std::vector<ReflectionlessWindow> reflectionless_scan(const Potential& p,
                                                      std::span<const double> grid,
                                                      const SolverOptions& opts = {},
                                                      double s_threshold = kDefaultSupportThreshold,
                                                      double zero_tol = 1e-6);

// reflection_at over a grid, evaluated in parallel and returned in grid order.
std::vector<ReflectionRecord> reflection_sweep(const Potential& p, std::span<const double> grid,
                                               const SolverOptions& opts = {},
                                               double s_threshold = kDefaultSupportThreshold,
                                               unsigned threads = 0);

}  // namespace wscat
