#include "wscat/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include "wscat/errors.hpp"
#include "wscat/parallel.hpp"

namespace wscat {
namespace {

using cplx = std::complex<double>;

constexpr double kInteractionThreshold = 1e-6;
constexpr double kLeakThreshold = 1e-4;
constexpr int kCellSubsamples = 8;

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double wave_number(std::size_t j, std::size_t n, double length) {
    const auto sj = static_cast<double>(j);
    const auto sn = static_cast<double>(n);
    const double idx = j < n / 2 ? sj : sj - sn;
    return 2.0 * std::numbers::pi * idx / length;
}

// Cell average of V over [x - dx/2, x + dx/2] by midpoint sub-sampling; a
// jump at a cell centre is split evenly.
double cell_average(const Potential& p, double x, double dx) {
    double sum = 0.0;
    for (int s = 0; s < kCellSubsamples; ++s) {
        const double off = (static_cast<double>(s) + 0.5) / kCellSubsamples - 0.5;
        sum += p(x + off * dx);
    }
    return sum / kCellSubsamples;
}

}  // namespace

double WaveFunction::norm() const noexcept {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s * dx;
}

double WaveFunction::mass_left_of(double c) const noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double xj = x(j);
        if (xj < c) s += std::norm(psi[j]);
        else if (xj == c) s += 0.5 * std::norm(psi[j]);
    }
    return s * dx;
}

double WaveFunction::mass_between(double a, double b) const noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double xj = x(j);
        if (xj >= a && xj <= b) s += std::norm(psi[j]);
    }
    return s * dx;
}

void check_packet_spec(const PacketSpec& s, double support) {
    const char* op = "dynamics::check_packet_spec";
    if (!(s.k0 > 0.0) || !(s.sigma_x > 0.0) || !(s.L > 0.0) || !(s.dt > 0.0) || !(s.t_max > 0.0))
        throw InvalidPacketSpec(op, "k0, sigma_x, L, dt and t_max must be positive");
    if (!is_power_of_two(s.N)) throw InvalidPacketSpec(op, "N must be a power of two");
    if (!(s.x0 + 4.0 * s.sigma_x < -support))
        throw InvalidPacketSpec(op, "packet overlaps the potential support (x0 + 4 sigma_x >= -X)");
    if (!(s.x0 - 4.0 * s.sigma_x > -s.L))
        throw InvalidPacketSpec(op, "packet overlaps the left edge of the box");
    if (!(s.k0 * s.sigma_x >= 4.0))
        throw InvalidPacketSpec(op, "packet not narrow-band (k0 * sigma_x < 4)");
    const double needed = 2.0 * s.L * (s.k0 + 4.0 / s.sigma_x) / std::numbers::pi;
    if (!(static_cast<double>(s.N) >= needed))
        throw InvalidPacketSpec(op, "grid does not resolve the packet momenta");
}

WaveFunction initial_packet(const PacketSpec& spec) {
    WaveFunction wf;
    wf.x_min = -spec.L;
    wf.dx = 2.0 * spec.L / static_cast<double>(spec.N);
    wf.psi.resize(spec.N);
    const double amp = std::pow(2.0 * std::numbers::pi * spec.sigma_x * spec.sigma_x, -0.25);
    for (std::size_t j = 0; j < spec.N; ++j) {
        const double x = wf.x(j);
        const double d = x - spec.x0;
        wf.psi[j] = amp * std::exp(cplx{-d * d / (4.0 * spec.sigma_x * spec.sigma_x), spec.k0 * x});
    }
    const double scale = 1.0 / std::sqrt(wf.norm());
    for (auto& v : wf.psi) v *= scale;
    return wf;
}

struct SplitStepPropagator::Impl {
    std::size_t n = 0;
    fftw_complex* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<cplx> kinetic;        // exp(-i k^2 dt) / N
    std::vector<cplx> half_potential; // exp(-i V dt / 2)
    std::vector<cplx> full_potential; // exp(-i V dt)

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (buffer) fftw_free(buffer);
    }

    cplx* data() { return reinterpret_cast<cplx*>(buffer); }
};

SplitStepPropagator::SplitStepPropagator(const Potential& p, const PacketSpec& spec)
    : impl_(std::make_unique<Impl>()) {
    auto& im = *impl_;
    im.n = spec.N;
    {
        std::lock_guard lock(planner_mutex());
        im.buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * im.n));
        const int n = static_cast<int>(im.n);
        im.forward = fftw_plan_dft_1d(n, im.buffer, im.buffer, FFTW_FORWARD, FFTW_ESTIMATE);
        im.backward = fftw_plan_dft_1d(n, im.buffer, im.buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    const double length = 2.0 * spec.L;
    const double dx = length / static_cast<double>(im.n);
    im.kinetic.resize(im.n);
    im.half_potential.resize(im.n);
    im.full_potential.resize(im.n);
    for (std::size_t j = 0; j < im.n; ++j) {
        const double k = wave_number(j, im.n, length);
        im.kinetic[j] = std::exp(cplx{0.0, -k * k * spec.dt}) / static_cast<double>(im.n);
        const double v = cell_average(p, -spec.L + static_cast<double>(j) * dx, dx);
        im.half_potential[j] = std::exp(cplx{0.0, -0.5 * v * spec.dt});
        im.full_potential[j] = std::exp(cplx{0.0, -v * spec.dt});
    }
}

SplitStepPropagator::~SplitStepPropagator() = default;

void SplitStepPropagator::advance(WaveFunction& wf, std::size_t steps) {
    auto& im = *impl_;
    if (steps == 0) return;
    if (wf.psi.size() != im.n)
        throw InvalidArgument("dynamics::SplitStepPropagator", "wave function size mismatch");
    cplx* buf = im.data();
    for (std::size_t j = 0; j < im.n; ++j) buf[j] = wf.psi[j] * im.half_potential[j];
    for (std::size_t s = 0; s < steps; ++s) {
        fftw_execute(im.forward);
        for (std::size_t j = 0; j < im.n; ++j) buf[j] *= im.kinetic[j];
        fftw_execute(im.backward);
        const auto& pot = s + 1 < steps ? im.full_potential : im.half_potential;
        for (std::size_t j = 0; j < im.n; ++j) buf[j] *= pot[j];
    }
    std::copy(buf, buf + im.n, wf.psi.begin());
}

MomentumDensity momentum_density(const PacketSpec& spec) {
    const WaveFunction wf = initial_packet(spec);
    const std::size_t n = spec.N;
    std::vector<cplx> spectrum(n);
    {
        std::lock_guard lock(planner_mutex());
        auto* in = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(wf.psi.data()));
        auto* out = reinterpret_cast<fftw_complex*>(spectrum.data());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD,
                                          FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    const double length = 2.0 * spec.L;
    MomentumDensity md;
    md.dk = 2.0 * std::numbers::pi / length;
    md.k.resize(n);
    md.density.resize(n);
    const double scale = wf.dx * wf.dx / (2.0 * std::numbers::pi);
    // fftshift: index n/2 .. n-1 are the negative wave numbers.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + n / 2) % n;
        md.k[i] = wave_number(j, n, length);
        md.density[i] = std::norm(spectrum[j]) * scale;
    }
    const double total = std::accumulate(md.density.begin(), md.density.end(), 0.0) * md.dk;
    for (auto& d : md.density) d /= total;
    return md;
}

double predicted_reflection(const Potential& p, const MomentumDensity& md,
                            const EvolveOptions& opts) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < md.k.size(); ++i)
        if (md.k[i] > 0.0 && md.density[i] * md.dk > 1e-16) idx.push_back(i);
    std::vector<double> weighted(idx.size());
    parallel_for(
        idx.size(),
        [&](std::size_t n) {
            const std::size_t i = idx[n];
            const double lambda = md.k[i] * md.k[i];
            const ReflectionRecord rec = reflection_at(p, lambda, opts.solver, opts.s_threshold);
            weighted[n] = rec.reflect_prob * md.density[i] * md.dk;
        },
        opts.threads);
    return std::accumulate(weighted.begin(), weighted.end(), 0.0);
}

PacketResult evolve_packet(const Potential& p, const PacketSpec& spec, const EvolveOptions& opts) {
    const char* op = "dynamics::evolve_packet";
    const double support = effective_support(p, opts.solver.truncation_tol);
    check_packet_spec(spec, support);
    const double tail_tol = opts.solver.truncation_tol;
    if (std::abs(p(-spec.L)) > tail_tol || std::abs(p(spec.L)) > tail_tol)
        throw InvalidArgument(op, "potential tails must vanish at the box edges");
    if (opts.check_stride == 0) throw InvalidArgument(op, "check_stride must be positive");

    const double radius = std::max(support, 1.0);
    const double t_arrival = std::max(0.0, (-radius - spec.x0) / (2.0 * spec.k0));
    const std::size_t chunk = opts.trace_stride > 0 ? std::gcd(opts.check_stride, opts.trace_stride)
                                                    : opts.check_stride;

    SplitStepPropagator prop(p, spec);
    PacketResult res;
    res.interaction_radius = radius;
    res.final_state = initial_packet(spec);
    WaveFunction& wf = res.final_state;

    const double edge_left = -spec.L + 4.0 * spec.sigma_x;
    const double edge_right = spec.L - 4.0 * spec.sigma_x;
    auto emit = [&](double t) {
        if (!opts.trace) return;
        const double left = wf.mass_left_of(0.0);
        opts.trace({t, left, wf.norm() - left, wf.mass_between(-radius, radius)});
    };
    if (opts.trace_stride > 0) emit(0.0);

    std::size_t steps = 0;
    while (true) {
        prop.advance(wf, chunk);
        steps += chunk;
        const double t = static_cast<double>(steps) * spec.dt;
        if (opts.trace_stride > 0 && steps % opts.trace_stride == 0) emit(t);
        if (steps % opts.check_stride != 0) continue;

        const double leak = wf.mass_left_of(edge_left) + (wf.norm() - wf.mass_left_of(edge_right));
        if (leak > kLeakThreshold)
            throw BoundaryLeak(op, "mass near the box edge exceeds 1e-4; enlarge L");
        const double inside = wf.mass_between(-radius, radius);
        if (t >= t_arrival && inside < kInteractionThreshold) {
            res.t_stop = t;
            res.interaction_mass = inside;
            break;
        }
        if (t >= spec.t_max)
            throw NotConverged(op, "interaction region still populated at t_max");
    }

    res.steps = steps;
    res.left_mass = wf.mass_left_of(0.0);
    const double norm = wf.norm();
    res.right_mass = norm - res.left_mass;
    res.norm_drift = std::abs(norm - 1.0);
    res.predicted_reflect = predicted_reflection(p, momentum_density(spec), opts);
    return res;
}

}  // namespace wscat
