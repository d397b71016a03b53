#include "wscat/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wscat/errors.hpp"
#include "wscat/ode.hpp"

namespace wscat {
namespace {

constexpr double kRoundingFloor = 1e-13;

// Logarithmic derivative at the origin of the tail-decaying (or outgoing)
// solution, converted to the Herglotz sign convention of `side`.
cplx half_line_m(Side side, const Potential& p, cplx z, const SolverOptions& opts,
                 double rel_tol) {
    const double x_tail = effective_support(p, opts.truncation_tol) + kTailMargin;
    const double x_start = side == Side::Right ? x_tail : -x_tail;

    cplx k = std::sqrt(z - p(x_start));
    if (k.imag() < 0.0) k = -k;
    const cplx i{0.0, 1.0};
    const ode::State init{cplx{1.0, 0.0}, side == Side::Right ? i * k : -i * k};

    ode::Settings settings;
    settings.rel_tol = rel_tol;
    settings.abs_tol = opts.abs_ode_tol;
    settings.renorm_interval = opts.renorm_interval;
    const double spread = std::abs(z - p.lower_bound());
    settings.max_step = spread > 0.0 ? std::min(0.1, 0.5 / std::sqrt(spread)) : 0.1;

    const ode::State end = ode::integrate_schrodinger(p, z, x_start, 0.0, init, settings);
    if (std::abs(end[0]) <= 1e-14 * std::abs(end[1]) || end[0] == cplx{})
        throw NodeAtOrigin(side == Side::Right ? "weyl::interior_m(right)" : "weyl::interior_m(left)",
                           "Weyl solution vanishes at the origin");
    const cplx ratio = end[1] / end[0];
    return side == Side::Right ? ratio : -ratio;
}

// Value at rel_tol / 2 with the change against rel_tol as error bound.
std::pair<cplx, double> refined_m(Side side, const Potential& p, cplx z, const SolverOptions& opts) {
    const cplx coarse = half_line_m(side, p, z, opts, opts.rel_ode_tol);
    const cplx fine = half_line_m(side, p, z, opts, 0.5 * opts.rel_ode_tol);
    const double err = std::abs(fine - coarse) + kRoundingFloor * std::max(1.0, std::abs(fine));
    return {fine, err};
}

double side_tail(Side side, const Potential& p) {
    return side == Side::Right ? p.tail_right() : p.tail_left();
}

}  // namespace

const char* side_name(Side side) noexcept { return side == Side::Right ? "right" : "left"; }

void SolverOptions::check() const {
    const char* op = "weyl::SolverOptions";
    if (!(truncation_tol > 0.0)) throw InvalidArgument(op, "truncation_tol must be positive");
    if (!(rel_ode_tol > 0.0)) throw InvalidArgument(op, "rel_ode_tol must be positive");
    if (!(abs_ode_tol > 0.0)) throw InvalidArgument(op, "abs_ode_tol must be positive");
    if (renorm_interval < 1) throw InvalidArgument(op, "renorm_interval must be positive");
    if (eps_ladder.size() < 2) throw InvalidArgument(op, "eps_ladder needs at least two entries");
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        if (!(eps_ladder[i] > 0.0)) throw InvalidArgument(op, "eps_ladder entries must be positive");
        if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))
            throw InvalidArgument(op, "eps_ladder must be strictly decreasing");
    }
}

MValue interior_m(Side side, const Potential& p, ComplexEnergy z, const SolverOptions& opts) {
    opts.check();
    if (!(z.im > 0.0) || !std::isfinite(z.re) || !std::isfinite(z.im))
        throw InvalidArgument("weyl::interior_m", "requires finite z with Im z > 0");
    const auto [m, err] = refined_m(side, p, z.value(), opts);
    return {side, z, m, err};
}

Extrapolation extrapolate_to_zero(std::span<const double> eps, std::span<const cplx> values) {
    const char* op = "weyl::extrapolate_to_zero";
    if (eps.size() != values.size() || eps.empty())
        throw InvalidArgument(op, "need matching, non-empty node and value lists");

    const std::size_t n = eps.size();
    Extrapolation out;
    std::vector<cplx> tableau(values.begin(), values.end());
    out.extrapolants.push_back(tableau[0]);
    // Column j of Neville's scheme: tableau[i] holds P_{i-j..i}(0).
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = n - 1; i >= j; --i) {
            const double xa = eps[i - j];
            const double xb = eps[i];
            tableau[i] = (xa * tableau[i] - xb * tableau[i - 1]) / (xa - xb);
            if (i == j) break;
        }
        out.extrapolants.push_back(tableau[j]);
    }

    for (std::size_t k = 2; k < out.extrapolants.size(); ++k) {
        const double prev = std::abs(out.extrapolants[k - 1] - out.extrapolants[k - 2]);
        const double cur = std::abs(out.extrapolants[k] - out.extrapolants[k - 1]);
        const double floor = 1e-8 * (1.0 + std::abs(out.extrapolants[k]));
        if (cur > 10.0 * prev && cur > floor)
            throw ExtrapolationDivergence(op, "successive extrapolants grow by more than 10x at step " +
                                                  std::to_string(k));
    }

    out.value = out.extrapolants.back();
    out.err = n > 1 ? std::abs(out.extrapolants[n - 1] - out.extrapolants[n - 2]) : 0.0;

    double wsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double w = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) w *= eps[i] / (eps[i] - eps[j]);
        wsum += std::abs(w);
    }
    out.weight_sum = wsum;
    return out;
}

MValue boundary_m(Side side, const Potential& p, double lambda, const SolverOptions& opts) {
    opts.check();
    if (!std::isfinite(lambda)) throw InvalidArgument("weyl::boundary_m", "lambda must be finite");
    const ComplexEnergy z{lambda, 0.0};

    if (p.has_compact_support() && lambda >= side_tail(side, p)) {
        const auto [m, err] = refined_m(side, p, z.value(), opts);
        return {side, z, m, err};
    }

    std::vector<cplx> samples;
    double ode_err = 0.0;
    samples.reserve(opts.eps_ladder.size());
    for (double eps : opts.eps_ladder) {
        const auto [m, err] = refined_m(side, p, cplx{lambda, eps}, opts);
        samples.push_back(m);
        ode_err = std::max(ode_err, err);
    }
    const Extrapolation ex = extrapolate_to_zero(opts.eps_ladder, samples);
    return {side, z, ex.value, ex.err + ex.weight_sum * ode_err};
}

double ac_density(Side side, const Potential& p, double lambda, const SolverOptions& opts) {
    return std::max(boundary_m(side, p, lambda, opts).m.imag(), 0.0);
}

}  // namespace wscat
