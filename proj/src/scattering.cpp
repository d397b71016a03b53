#include "wscat/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "wscat/errors.hpp"
#include "wscat/parallel.hpp"

namespace wscat {
namespace {

constexpr cplx I{0.0, 1.0};

cplx clamp_im(cplx m) { return {m.real(), std::max(m.imag(), 0.0)}; }

void require_same_lambda(const char* op, double lambda, const MValue& m_l, const MValue& m_r) {
    if (m_l.side != Side::Left || m_r.side != Side::Right)
        throw InvalidArgument(op, "expected (left, right) m-values");
    if (m_l.z.re != lambda || m_r.z.re != lambda || m_l.z.im != 0.0 || m_r.z.im != 0.0)
        throw InvalidArgument(op, "m-values must be boundary values at the same lambda");
}

}  // namespace

double ScatteringMatrix2::unitarity_residual() const noexcept {
    // (s s^*)_{ij} = sum_k s_ik conj(s_jk)
    const cplx a = s_ll * std::conj(s_ll) + s_lr * std::conj(s_lr) - 1.0;
    const cplx b = s_ll * std::conj(s_rl) + s_lr * std::conj(s_rr);
    const cplx c = s_rl * std::conj(s_ll) + s_rr * std::conj(s_lr);
    const cplx d = s_rl * std::conj(s_rl) + s_rr * std::conj(s_rr) - 1.0;
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

cplx green00(cplx m_l, cplx m_r) {
    const cplx denom = m_l + m_r;
    if (!(std::abs(denom) >= kResonanceFloor))
        throw ResonantDenominator("scattering::green00",
                                  "|m_l + m_r| below 1e-14 (pole of G_00)");
    return -1.0 / denom;
}

ScatteringMatrix2 scattering_matrix(double lambda, const MValue& m_l, const MValue& m_r) {
    require_same_lambda("scattering::scattering_matrix", lambda, m_l, m_r);
    const cplx ml = clamp_im(m_l.m);
    const cplx mr = clamp_im(m_r.m);
    const cplx g = green00(ml, mr);
    const double wl = std::sqrt(ml.imag());
    const double wr = std::sqrt(mr.imag());
    const cplx scale = 2.0 * I * g;

    ScatteringMatrix2 s;
    s.lambda = lambda;
    s.s_ll = 1.0 + scale * (wl * wl);
    s.s_lr = scale * (wl * wr);
    s.s_rl = s.s_lr;
    s.s_rr = 1.0 + scale * (wr * wr);
    return s;
}

ReflectionRecord spectral_reflection(double lambda, const MValue& m_l, const MValue& m_r,
                                     double s_threshold) {
    require_same_lambda("scattering::spectral_reflection", lambda, m_l, m_r);
    if (!(s_threshold > 0.0))
        throw InvalidArgument("scattering::spectral_reflection", "s_threshold must be positive");
    const cplx ml = clamp_im(m_l.m);
    const cplx mr = clamp_im(m_r.m);

    ReflectionRecord rec;
    rec.lambda = lambda;
    rec.support_threshold = s_threshold;
    rec.g00 = green00(ml, mr);
    rec.in_S_l = ml.imag() > s_threshold;
    rec.in_S_r = mr.imag() > s_threshold;

    const double denom = std::abs(ml + mr);
    if (rec.in_S_l) {
        rec.r_spectral = (mr + std::conj(ml)) / (mr + ml);
        rec.reflect_prob = std::min(1.0, std::norm(rec.r_spectral));
        rec.transmit_prob = 1.0 - rec.reflect_prob;
        // First-order propagation of the m-value errors through r.
        const double dr = (m_l.err_estimate + m_r.err_estimate) * (1.0 + std::abs(rec.r_spectral)) / denom;
        rec.err_estimate = 2.0 * std::abs(rec.r_spectral) * dr + dr * dr;
    } else {
        rec.r_spectral = 1.0;
        rec.reflect_prob = 1.0;
        rec.transmit_prob = 0.0;
        rec.err_estimate = 0.0;
    }
    return rec;
}

BoundaryPair boundary_pair(const Potential& p, double lambda, const SolverOptions& opts) {
    return {boundary_m(Side::Left, p, lambda, opts), boundary_m(Side::Right, p, lambda, opts)};
}

ReflectionRecord reflection_at(const Potential& p, double lambda, const SolverOptions& opts,
                               double s_threshold) {
    const BoundaryPair mp = boundary_pair(p, lambda, opts);
    return spectral_reflection(lambda, mp.left, mp.right, s_threshold);
}

std::vector<ReflectionRecord> reflection_sweep(const Potential& p, std::span<const double> grid,
                                               const SolverOptions& opts, double s_threshold,
                                               unsigned threads) {
    std::vector<ReflectionRecord> out(grid.size());
    parallel_for(
        grid.size(), [&](std::size_t i) { out[i] = reflection_at(p, grid[i], opts, s_threshold); },
        threads);
    return out;
}

std::vector<ReflectionlessWindow> reflectionless_windows(std::span<const double> grid,
                                                         std::span<const ReflectionRecord> records,
                                                         double zero_tol) {
    if (grid.size() != records.size())
        throw InvalidArgument("scattering::reflectionless_windows", "grid/records size mismatch");
    std::vector<ReflectionlessWindow> windows;
    bool open = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = records[i].reflect_prob;
        if (r <= zero_tol) {
            if (!open) {
                windows.push_back({grid[i], grid[i], i, i, r});
                open = true;
            } else {
                auto& w = windows.back();
                w.hi = grid[i];
                w.last = i;
                w.max_reflect_prob = std::max(w.max_reflect_prob, r);
            }
        } else {
            open = false;
        }
    }
    return windows;
}

std::vector<ReflectionlessWindow> reflectionless_scan(const Potential& p,
                                                      std::span<const double> grid,
                                                      const SolverOptions& opts, double s_threshold,
                                                      double zero_tol) {
    const char* op = "scattering::reflectionless_scan";
    if (grid.empty()) throw InvalidArgument(op, "grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidArgument(op, "grid must be strictly increasing");
    if (!(zero_tol > 0.0)) throw InvalidArgument(op, "zero_tol must be positive");
    const auto records = reflection_sweep(p, grid, opts, s_threshold);
    return reflectionless_windows(grid, records, zero_tol);
}

}  // namespace wscat
