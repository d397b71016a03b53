#pragma once

#include <complex>
#include <span>
#include <vector>

#include "wscat/potential.hpp"

namespace wscat {

using cplx = std::complex<double>;

enum class Side { Left, Right };

const char* side_name(Side side) noexcept;

// A spectral parameter in the closed upper half-plane; im == 0 requests a
// boundary value lambda + i0.
struct ComplexEnergy {
    double re = 0.0;
    double im = 0.0;

    cplx value() const noexcept { return {re, im}; }
};

// Half-line Weyl m-function value. Both sides are normalized to be Herglotz:
//   m_r(z) =  u_r'(0) / u_r(0),   m_l(z) = -u_l'(0) / u_l(0),
// where u_{l/r} is the solution square integrable at -inf / +inf.
struct MValue {
    Side side = Side::Right;
    ComplexEnergy z;
    cplx m;
    double err_estimate = 0.0;
};

struct SolverOptions {
    double truncation_tol = 1e-12;
    double rel_ode_tol = 1e-10;
    double abs_ode_tol = 1e-12;
    std::vector<double> eps_ladder{1e-2, 1e-3, 1e-4, 1e-5};
    int renorm_interval = 16;

    // Throws InvalidArgument on non-positive tolerances or a ladder that is
    // not strictly decreasing.
    void check() const;
};

// Distance beyond the effective support at which the asymptotic tail solution
// is imposed.
inline constexpr double kTailMargin = 2.0;

MValue interior_m(Side side, const Potential& p, ComplexEnergy z, const SolverOptions& opts = {});

// m(lambda + i0). Compactly supported potentials with lambda at or above the
// tail value are integrated directly on the real axis with outgoing data;
// everything else is extrapolated from the eps ladder.
MValue boundary_m(Side side, const Potential& p, double lambda, const SolverOptions& opts = {});

// Density of the absolutely continuous half-line spectral measure.
double ac_density(Side side, const Potential& p, double lambda, const SolverOptions& opts = {});

struct Extrapolation {
    cplx value;
    double err = 0.0;                  // |T_n - T_{n-1}|
    double weight_sum = 1.0;           // sum of |Lagrange weights| at 0
    std::vector<cplx> extrapolants;    // T_0 .. T_n
};

// Polynomial (Neville) extrapolation of samples f(eps_i) to eps = 0.
// Throws ExtrapolationDivergence when successive corrections grow by more
// than 10x above the rounding floor.
Extrapolation extrapolate_to_zero(std::span<const double> eps, std::span<const cplx> values);

}  // namespace wscat
