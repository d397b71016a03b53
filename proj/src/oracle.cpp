#include "wscat/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "wscat/errors.hpp"

namespace wscat {
namespace {

using cplx = std::complex<double>;
using Mat2 = std::array<double, 4>;  // row major, acts on (u, u')

constexpr double kOverflowLimit = 1e300;

Mat2 slab_matrix(double q2, double d) {
    double c = 1.0;
    double s = d;
    double qs = 0.0;  // -q^2 * S
    if (q2 > 0.0) {
        const double q = std::sqrt(q2);
        c = std::cos(q * d);
        s = std::sin(q * d) / q;
        qs = -q * std::sin(q * d);
    } else if (q2 < 0.0) {
        const double kappa = std::sqrt(-q2);
        c = std::cosh(kappa * d);
        s = std::sinh(kappa * d) / kappa;
        qs = kappa * std::sinh(kappa * d);
    }
    return {c, s, qs, c};
}

Mat2 multiply(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

TransferResult transfer_reflection(const Potential& p, double k, double slab_width,
                                   double half_width) {
    const char* op = "oracle::transfer_reflection";
    if (!(slab_width > 0.0) || !std::isfinite(slab_width))
        throw InvalidSlabWidth(op, "slab_width must be positive");
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument(op, "k must be positive");
    if (!p.has_compact_support()) throw InvalidArgument(op, "potential must have compact support");
    if (!p.has_zero_tails()) throw InvalidArgument(op, "potential must have zero tails");

    double x_half = half_width > 0.0 ? half_width : p.support_radius();
    if (x_half < p.support_radius())
        throw InvalidArgument(op, "half_width smaller than the support radius");
    if (x_half == 0.0) x_half = 0.5 * slab_width;

    std::vector<double> nodes{-x_half};
    for (double b : p.breakpoints())
        if (b > -x_half && b < x_half) nodes.push_back(b);
    nodes.push_back(x_half);

    const double lambda = k * k;
    Mat2 total{1.0, 0.0, 0.0, 1.0};
    std::size_t slabs = 0;
    for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
        const double a = nodes[seg];
        const double b = nodes[seg + 1];
        const auto n = static_cast<std::size_t>(std::ceil((b - a) / slab_width));
        const double d = (b - a) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double mid = a + (static_cast<double>(j) + 0.5) * d;
            total = multiply(slab_matrix(lambda - p(mid), d), total);
            ++slabs;
            const double big = std::max({std::abs(total[0]), std::abs(total[1]),
                                         std::abs(total[2]), std::abs(total[3])});
            if (!(big < kOverflowLimit))
                throw EvanescentOverflow(op, "transfer matrix growth exceeds 1e300");
        }
    }

    // Pull the outgoing wave e^{ikx} at +X back to -X and split it into
    // incident and reflected parts there.
    const cplx i{0.0, 1.0};
    const cplx ik = i * k;
    const double det = total[0] * total[3] - total[1] * total[2];
    const cplx out_u = std::exp(ik * x_half);
    const cplx out_du = ik * out_u;
    const cplx u = (total[3] * out_u - total[1] * out_du) / det;
    const cplx du = (-total[2] * out_u + total[0] * out_du) / det;
    const cplx a_in = 0.5 * (u + du / ik) * std::exp(ik * x_half);
    const cplx b_ref = 0.5 * (u - du / ik) * std::exp(-ik * x_half);

    TransferResult res;
    res.k = k;
    res.t_amp = 1.0 / a_in;
    res.r_amp = b_ref / a_in;
    res.slab_count = slabs;
    return res;
}

BarrierProbabilities closed_form_barrier(double e, double v0, double a) {
    const char* op = "oracle::closed_form_barrier";
    if (!(e > 0.0) || !(v0 > 0.0) || !(a > 0.0))
        throw InvalidArgument(op, "energy, height and width must be positive");
    if (e == v0) throw DegenerateEnergy(op, "E equals the barrier height");

    double denom_term = 0.0;
    if (e < v0) {
        const double s = std::sinh(std::sqrt(v0 - e) * a);
        denom_term = v0 * v0 * s * s / (4.0 * e * (v0 - e));
    } else {
        const double s = std::sin(std::sqrt(e - v0) * a);
        denom_term = v0 * v0 * s * s / (4.0 * e * (e - v0));
    }
    return {denom_term / (1.0 + denom_term), 1.0 / (1.0 + denom_term)};
}

}  // namespace wscat
