#include "wscat/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wscat/errors.hpp"

namespace wscat::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [coef, k] : terms) {
        if (coef == 0.0) continue;
        out[0] += h * coef * (*k)[0];
        out[1] += h * coef * (*k)[1];
    }
    return out;
}

// Right-hand side on one segment; V is evaluated strictly inside [lo, hi] so
// a jump at a segment end is seen from the correct side.
class SegmentRhs {
public:
    SegmentRhs(const Potential& p, cplx z, double lo, double hi) : p_(p), z_(z), lo_(lo), hi_(hi) {}

    State operator()(double x, const State& y) const {
        const double v = p_(inside(x));
        return {y[1], (v - z_) * y[0]};
    }

private:
    double inside(double x) const {
        if (x <= lo_) return std::nextafter(lo_, hi_);
        if (x >= hi_) return std::nextafter(hi_, lo_);
        return x;
    }

    const Potential& p_;
    cplx z_;
    double lo_, hi_;
};

void rescale(State& y, State& k) {
    const double s = std::max(std::abs(y[0]), std::abs(y[1]));
    if (!(s > 0.0) || !std::isfinite(s)) return;
    y[0] /= s;
    y[1] /= s;
    k[0] /= s;
    k[1] /= s;
}

}  // namespace

State integrate_schrodinger(const Potential& p, cplx z, double x_from, double x_to, State init,
                            const Settings& settings, Stats* stats) {
    const char* op = "ode::integrate_schrodinger";
    if (!(settings.rel_tol > 0.0) || !(settings.abs_tol > 0.0) || !(settings.max_step > 0.0))
        throw InvalidArgument(op, "tolerances and max_step must be positive");
    if (settings.renorm_interval < 1) throw InvalidArgument(op, "renorm_interval must be >= 1");

    const double dir = x_to >= x_from ? 1.0 : -1.0;
    std::vector<double> nodes{x_from};
    for (double b : p.breakpoints()) {
        if ((b - x_from) * dir > 0.0 && (x_to - b) * dir > 0.0) nodes.push_back(b);
    }
    std::sort(nodes.begin() + 1, nodes.end(),
              [dir](double a, double b) { return a * dir < b * dir; });
    nodes.push_back(x_to);

    Stats local;
    State y = init;
    double h = settings.max_step;
    int since_renorm = 0;

    for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
        const double xa = nodes[seg];
        const double xb = nodes[seg + 1];
        if (xa == xb) continue;
        const SegmentRhs f(p, z, std::min(xa, xb), std::max(xa, xb));
        double x = xa;
        State k1 = f(x, y);

        while ((xb - x) * dir > 0.0) {
            if (local.accepted + local.rejected > settings.max_steps)
                throw OdeStepFailure(op, "step budget exhausted");
            const double remaining = std::abs(xb - x);
            bool last = false;
            double hs = std::min(h, settings.max_step);
            if (hs >= remaining) {
                hs = remaining;
                last = true;
            }
            const double min_step = 64.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(1.0, std::abs(x));
            if (hs < min_step && !last) throw OdeStepFailure(op, "step size underflow");

            const double hh = dir * hs;
            const State k2 = f(x + c2 * hh, axpy(y, hh, {{a21, &k1}}));
            const State k3 = f(x + c3 * hh, axpy(y, hh, {{a31, &k1}, {a32, &k2}}));
            const State k4 = f(x + c4 * hh, axpy(y, hh, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            const State k5 =
                f(x + c5 * hh, axpy(y, hh, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            const State k6 = f(x + hh, axpy(y, hh,
                                            {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                                             {a65, &k5}}));
            const State y_new =
                axpy(y, hh, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            const double x_new = last ? xb : x + hh;
            const State k7 = f(x_new, y_new);

            double err = 0.0;
            for (int i = 0; i < 2; ++i) {
                const cplx e = hh * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                     e6 * k6[i] + e7 * k7[i]);
                const double scale =
                    settings.abs_tol +
                    settings.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
                err = std::max(err, std::abs(e) / scale);
            }
            if (!std::isfinite(err)) throw OdeStepFailure(op, "non-finite error estimate");

            if (err <= 1.0) {
                x = x_new;
                y = y_new;
                k1 = k7;
                ++local.accepted;
                const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
                if (!last) h = hs * std::max(1.0, grow);
                if (++since_renorm >= settings.renorm_interval) {
                    rescale(y, k1);
                    since_renorm = 0;
                    ++local.renormalizations;
                }
            } else {
                ++local.rejected;
                h = hs * std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
        }
    }
    if (!std::isfinite(std::abs(y[0])) || !std::isfinite(std::abs(y[1])))
        throw OdeStepFailure(op, "solution overflowed");
    if (stats) *stats = local;
    return y;
}

}  // namespace wscat::ode
