#include "wscat/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wscat/errors.hpp"

namespace wscat {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double raw_value(const PotentialKind& kind, double x) {
    return std::visit(
        overloaded{
            [](const ZeroPotential&) { return 0.0; },
            [x](const SquareBarrier& b) {
                return std::abs(x - b.center) <= b.half_width ? b.height : 0.0;
            },
            [x](const PoschlTeller& pt) {
                const double s = 1.0 / std::cosh(x);
                return -static_cast<double>(pt.nu) * (pt.nu + 1) * s * s;
            },
            [x](const GaussianBump& g) {
                const double d = (x - g.center) / g.sigma;
                return g.amplitude * std::exp(-0.5 * d * d);
            },
            [x](const StepPotential& s) { return x < 0.0 ? s.left_value : s.right_value; },
            [x](const SampledPotential& s) {
                if (x < s.xs.front()) return s.tail_left;
                if (x > s.xs.back()) return s.tail_right;
                const auto it = std::upper_bound(s.xs.begin(), s.xs.end(), x);
                if (it == s.xs.end()) return s.vs.back();
                const auto hi = static_cast<std::size_t>(it - s.xs.begin());
                const std::size_t lo = hi - 1;
                const double w = (x - s.xs[lo]) / (s.xs[hi] - s.xs[lo]);
                return (1.0 - w) * s.vs[lo] + w * s.vs[hi];
            },
        },
        kind);
}

double kind_tail_left(const PotentialKind& kind) {
    if (const auto* s = std::get_if<StepPotential>(&kind)) return s->left_value;
    if (const auto* s = std::get_if<SampledPotential>(&kind)) return s->tail_left;
    return 0.0;
}

double kind_tail_right(const PotentialKind& kind) {
    if (const auto* s = std::get_if<StepPotential>(&kind)) return s->right_value;
    if (const auto* s = std::get_if<SampledPotential>(&kind)) return s->tail_right;
    return 0.0;
}

double kind_support(const PotentialKind& kind) {
    return std::visit(
        overloaded{
            [](const ZeroPotential&) { return 0.0; },
            [](const SquareBarrier& b) {
                return b.height == 0.0 ? 0.0 : std::abs(b.center) + b.half_width;
            },
            [](const PoschlTeller&) { return kInfiniteSupport; },
            [](const GaussianBump& g) { return g.amplitude == 0.0 ? 0.0 : kInfiniteSupport; },
            [](const StepPotential&) { return 0.0; },
            [](const SampledPotential& s) {
                return std::max(std::abs(s.xs.front()), std::abs(s.xs.back()));
            },
        },
        kind);
}

double kind_effective_support(const PotentialKind& kind, double tol) {
    return std::visit(
        overloaded{
            [](const ZeroPotential&) { return 0.0; },
            [&](const SquareBarrier&) { return kind_support(kind); },
            [tol](const PoschlTeller& pt) {
                // nu(nu+1) sech^2(X) = tol, tail monotone in |x|.
                const double depth = static_cast<double>(pt.nu) * (pt.nu + 1);
                if (depth <= tol) return 0.0;
                return std::acosh(std::sqrt(depth / tol));
            },
            [tol](const GaussianBump& g) {
                const double a = std::abs(g.amplitude);
                if (a <= tol) return 0.0;
                return std::abs(g.center) + g.sigma * std::sqrt(2.0 * std::log(a / tol));
            },
            [](const StepPotential&) { return 0.0; },
            [&](const SampledPotential&) { return kind_support(kind); },
        },
        kind);
}

double kind_lower_bound(const PotentialKind& kind) {
    return std::visit(
        overloaded{
            [](const ZeroPotential&) { return 0.0; },
            [](const SquareBarrier& b) { return std::min(0.0, b.height); },
            [](const PoschlTeller& pt) { return -static_cast<double>(pt.nu) * (pt.nu + 1); },
            [](const GaussianBump& g) { return std::min(0.0, g.amplitude); },
            [](const StepPotential& s) { return std::min(s.left_value, s.right_value); },
            [](const SampledPotential& s) {
                double lo = std::min(s.tail_left, s.tail_right);
                for (double v : s.vs) lo = std::min(lo, v);
                return lo;
            },
        },
        kind);
}

void check_finite(std::vector<std::string>& out, const char* what, double v) {
    if (!std::isfinite(v)) out.push_back(std::string(what) + " is not finite");
}

}  // namespace

ValidationReport inspect(const PotentialKind& kind) {
    ValidationReport report;
    auto& bad = report.violations;
    std::visit(
        overloaded{
            [](const ZeroPotential&) {},
            [&](const SquareBarrier& b) {
                check_finite(bad, "square_barrier.height", b.height);
                check_finite(bad, "square_barrier.half_width", b.half_width);
                check_finite(bad, "square_barrier.center", b.center);
                if (b.half_width < 0.0) bad.emplace_back("square_barrier.half_width is negative");
            },
            [&](const PoschlTeller& pt) {
                if (pt.nu < 1) bad.emplace_back("poschl_teller.nu must be a positive integer");
                report.tails = TailClass::Decaying;
            },
            [&](const GaussianBump& g) {
                check_finite(bad, "gaussian.amplitude", g.amplitude);
                check_finite(bad, "gaussian.center", g.center);
                if (!(g.sigma > 0.0) || !std::isfinite(g.sigma))
                    bad.emplace_back("gaussian.sigma must be positive");
                if (g.amplitude != 0.0) report.tails = TailClass::Decaying;
            },
            [&](const StepPotential& s) {
                check_finite(bad, "step.left_value", s.left_value);
                check_finite(bad, "step.right_value", s.right_value);
            },
            [&](const SampledPotential& s) {
                if (s.xs.size() != s.vs.size())
                    bad.emplace_back("sampled: xs and vs have different lengths");
                if (s.xs.size() < 2) bad.emplace_back("sampled: fewer than two nodes");
                for (std::size_t i = 1; i < s.xs.size(); ++i) {
                    if (!(s.xs[i] > s.xs[i - 1])) {
                        std::ostringstream msg;
                        msg << "sampled: xs not strictly increasing at index " << i << " ("
                            << s.xs[i - 1] << " >= " << s.xs[i] << ")";
                        bad.push_back(msg.str());
                    }
                }
                for (double x : s.xs) check_finite(bad, "sampled.xs entry", x);
                for (double v : s.vs) check_finite(bad, "sampled.vs entry", v);
                check_finite(bad, "sampled.tail_left", s.tail_left);
                check_finite(bad, "sampled.tail_right", s.tail_right);
            },
        },
        kind);
    report.valid = bad.empty();
    if (report.valid) report.lower_bound = kind_lower_bound(kind);
    return report;
}

ValidationReport validate(const PotentialKind& kind) {
    ValidationReport report = inspect(kind);
    if (!report.valid) throw InvalidPotential("potential::validate", report.violations.front());
    return report;
}

Potential::Potential() : Potential(ZeroPotential{}) {}

Potential::Potential(PotentialKind kind) : kind_(std::move(kind)) {
    lower_bound_ = validate(kind_).lower_bound;
}

double Potential::operator()(double x) const {
    if (cutoff_) {
        if (x < -*cutoff_) return kind_tail_left(kind_);
        if (x > *cutoff_) return kind_tail_right(kind_);
    }
    return raw_value(kind_, x);
}

double Potential::tail_left() const noexcept { return kind_tail_left(kind_); }
double Potential::tail_right() const noexcept { return kind_tail_right(kind_); }

double Potential::support_radius() const noexcept {
    const double natural = kind_support(kind_);
    return cutoff_ ? std::min(*cutoff_, natural) : natural;
}

std::vector<double> Potential::breakpoints() const {
    std::vector<double> pts;
    if (const auto* b = std::get_if<SquareBarrier>(&kind_)) {
        if (b->height != 0.0 && b->half_width > 0.0) {
            pts.push_back(b->center - b->half_width);
            pts.push_back(b->center + b->half_width);
        }
    } else if (std::holds_alternative<StepPotential>(kind_)) {
        pts.push_back(0.0);
    } else if (const auto* s = std::get_if<SampledPotential>(&kind_)) {
        pts = s->xs;
    }
    if (cutoff_ && *cutoff_ < kind_support(kind_)) {
        std::erase_if(pts, [c = *cutoff_](double x) { return std::abs(x) > c; });
        pts.push_back(-*cutoff_);
        pts.push_back(*cutoff_);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Potential Potential::truncated(double tol) const {
    Potential out = *this;
    out.cutoff_ = effective_support(*this, tol);
    return out;
}

std::string Potential::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const ZeroPotential&) { os << "zero"; },
                   [&](const SquareBarrier& b) {
                       os << "square_barrier(height=" << b.height << ", half_width=" << b.half_width
                          << ", center=" << b.center << ")";
                   },
                   [&](const PoschlTeller& pt) { os << "poschl_teller(nu=" << pt.nu << ")"; },
                   [&](const GaussianBump& g) {
                       os << "gaussian(amplitude=" << g.amplitude << ", sigma=" << g.sigma
                          << ", center=" << g.center << ")";
                   },
                   [&](const StepPotential& s) {
                       os << "step(left=" << s.left_value << ", right=" << s.right_value << ")";
                   },
                   [&](const SampledPotential& s) { os << "sampled(" << s.xs.size() << " nodes)"; },
               },
               kind_);
    if (cutoff_) os << " truncated at |x|=" << *cutoff_;
    return os.str();
}

double evaluate(const Potential& p, double x) { return p(x); }

double effective_support(const Potential& p, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("potential::effective_support", "tol must be positive");
    double x = kind_effective_support(p.kind(), tol);
    if (p.cutoff()) x = std::min(x, *p.cutoff());
    if (!std::isfinite(x))
        throw UnboundedTail("potential::effective_support", "no finite support radius for tol");
    return x;
}

ValidationReport validate(const Potential& p) {
    ValidationReport report = validate(p.kind());
    report.lower_bound = p.lower_bound();
    if (p.cutoff()) report.tails = TailClass::Constant;
    return report;
}

}  // namespace wscat
