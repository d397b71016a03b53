#include "wscat/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "wscat/errors.hpp"
#include "wscat/scattering.hpp"

namespace wscat {
namespace {

using Matrix = Eigen::MatrixXcd;

constexpr double kConditionLimit = 1e12;

Matrix shifted_operator(const LatticeModel& m) {
    const auto n = static_cast<Eigen::Index>(m.samples.size());
    const double off = -1.0 / (m.h * m.h);
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a(j, j) = 2.0 / (m.h * m.h) + m.samples[static_cast<std::size_t>(j)] - m.z;
        if (j + 1 < n) {
            a(j, j + 1) = off;
            a(j + 1, j) = off;
        }
    }
    return a;
}

Matrix checked_inverse(const Matrix& a, const char* what) {
    const Eigen::PartialPivLU<Matrix> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond * kConditionLimit >= 1.0))
        throw SingularResolvent("lattice::resolvent_difference_check",
                                std::string(what) + " is ill-conditioned beyond 1e12");
    return lu.inverse();
}

// BDCSVD in Eigen 3.4 occasionally returns a wrong spectrum without flagging
// it; reject any result whose squared sum misses the Frobenius norm.
Eigen::VectorXd singular_values(const Matrix& d) {
    const double frob2 = d.squaredNorm();
    const Eigen::BDCSVD<Matrix> fast(d);
    if (fast.info() == Eigen::Success && std::abs(fast.singularValues().squaredNorm() - frob2) <= 1e-12 * frob2)
        return fast.singularValues();
    const Eigen::JacobiSVD<Matrix> slow(d);
    return slow.singularValues();
}

}  // namespace

LatticeModel LatticeModel::from_potential(const Potential& p, std::size_t n_min, double h, cplx z,
                                          double truncation_tol) {
    if (!(h > 0.0)) throw InvalidArgument("lattice::from_potential", "h must be positive");
    const double needed = effective_support(p, truncation_tol) + kTailMargin;
    const auto n_needed = static_cast<std::size_t>(std::ceil(needed / h));
    LatticeModel m;
    m.N = std::max(n_min, n_needed);
    m.h = h;
    m.z = z;
    m.samples.resize(2 * m.N + 1);
    for (std::size_t j = 0; j < m.samples.size(); ++j) {
        const double x = (static_cast<double>(j) - static_cast<double>(m.N)) * h;
        m.samples[j] = p(x);
    }
    return m;
}

void LatticeModel::check() const {
    const char* op = "lattice::LatticeModel";
    if (N == 0) throw InvalidArgument(op, "N must be positive");
    if (!(h > 0.0)) throw InvalidArgument(op, "h must be positive");
    if (samples.size() != 2 * N + 1) throw InvalidArgument(op, "expected 2N+1 potential samples");
    if (!(z.imag() > 0.0) && !(z.imag() == 0.0 && z.real() == -1.0))
        throw InvalidArgument(op, "z must satisfy Im z > 0 or equal -1");
    for (double v : samples)
        if (!std::isfinite(v)) throw InvalidArgument(op, "potential samples must be finite");
}

cplx lattice_g00(const LatticeModel& m) {
    m.check();
    // Solve (H - z) g = e_0 by the Thomas algorithm; only g at the origin is needed.
    const std::size_t n = m.samples.size();
    const double off = -1.0 / (m.h * m.h);
    std::vector<cplx> c_prime(n), d_prime(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx diag = 2.0 / (m.h * m.h) + m.samples[j] - m.z;
        const cplx rhs = j == m.N ? 1.0 : 0.0;
        if (j == 0) {
            c_prime[j] = off / diag;
            d_prime[j] = rhs / diag;
        } else {
            const cplx denom = diag - off * c_prime[j - 1];
            c_prime[j] = off / denom;
            d_prime[j] = (rhs - off * d_prime[j - 1]) / denom;
        }
    }
    cplx g = d_prime[n - 1];
    for (std::size_t j = n - 1; j-- > m.N;) g = d_prime[j] - c_prime[j] * g;
    return g / m.h;
}

cplx continuum_g00(const Potential& p, cplx z, const SolverOptions& opts) {
    if (z.imag() > 0.0) {
        const ComplexEnergy e{z.real(), z.imag()};
        return green00(interior_m(Side::Left, p, e, opts).m, interior_m(Side::Right, p, e, opts).m);
    }
    const BoundaryPair mp = boundary_pair(p, z.real(), opts);
    return green00(mp.left.m, mp.right.m);
}

RankOneReport resolvent_difference_check(const LatticeModel& model, const Potential* continuum,
                                         const SolverOptions& opts) {
    model.check();
    const auto n = static_cast<Eigen::Index>(model.samples.size());
    const auto origin = static_cast<Eigen::Index>(model.N);
    const Matrix a = shifted_operator(model);
    const Matrix resolvent = checked_inverse(a, "H - z");

    // H_inf - z: A with the origin row and column removed.
    const Eigen::Index half = origin;
    Matrix c(n - 1, n - 1);
    c.topLeftCorner(half, half) = a.topLeftCorner(half, half);
    c.bottomRightCorner(half, half) = a.bottomRightCorner(half, half);
    c.topRightCorner(half, half).setZero();
    c.bottomLeftCorner(half, half).setZero();
    const Matrix decoupled = checked_inverse(c, "H_inf - z");

    RankOneReport rep;
    rep.decoupled_cross_block = std::max(decoupled.topRightCorner(half, half).cwiseAbs().maxCoeff(),
                                         decoupled.bottomLeftCorner(half, half).cwiseAbs().maxCoeff());

    Matrix d = resolvent;
    d.topLeftCorner(half, half) -= decoupled.topLeftCorner(half, half);
    d.topRightCorner(half, half) -= decoupled.topRightCorner(half, half);
    d.bottomLeftCorner(half, half) -= decoupled.bottomLeftCorner(half, half);
    d.bottomRightCorner(half, half) -= decoupled.bottomRightCorner(half, half);

    const Eigen::VectorXd sv = singular_values(d);
    rep.sigma1 = sv(0);
    rep.sigma2 = sv.size() > 1 ? sv(1) : 0.0;
    rep.sv_ratio = rep.sigma1 > 0.0 ? rep.sigma2 / rep.sigma1 : 0.0;

    // delta_0 = e_origin / sqrt(h), so G00 = R_00 / h and g = R e_origin / sqrt(h).
    const double h = model.h;
    const Eigen::VectorXcd g = resolvent.col(origin) / std::sqrt(h);
    rep.g00 = resolvent(origin, origin) / h;
    rep.g00_inverse = 1.0 / rep.g00;
    const Matrix outer = g * g.transpose();
    rep.coefficient = (outer.conjugate().cwiseProduct(d)).sum() / outer.squaredNorm();
    rep.coefficient_residual = std::abs(rep.coefficient - rep.g00_inverse);
    const cplx d00_expected = rep.g00_inverse * g(origin) * g(origin);
    rep.entry_residual = std::abs(d(origin, origin) - d00_expected) / std::abs(d(origin, origin));
    rep.delta_convention = "delta_0 = e_0 / sqrt(h); G00 = [(H-z)^-1]_00 / h";

    if (continuum) {
        rep.g00_continuum = continuum_g00(*continuum, model.z, opts);
        rep.continuum_residual = std::abs(rep.g00 - *rep.g00_continuum);
    }
    return rep;
}

}  // namespace wscat
