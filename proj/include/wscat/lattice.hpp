#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wscat/potential.hpp"
#include "wscat/weyl.hpp"

namespace wscat {

// Second-difference discretization on x_j = j h, j = -N..N, with Dirichlet
// walls beyond +-N h. The decoupled operator removes the origin node, which
// imposes a Dirichlet condition at 0 on both half-lines.
struct LatticeModel {
    std::size_t N = 200;
    double h = 0.05;
    std::vector<double> samples;  // V(x_j), length 2N + 1, samples[N] is the origin
    cplx z{-1.0, 0.0};

    // N is raised if needed so that N h >= effective_support + kTailMargin.
    static LatticeModel from_potential(const Potential& p, std::size_t n_min, double h, cplx z,
                                       double truncation_tol = 1e-12);

    void check() const;
};

struct RankOneReport {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sv_ratio = 0.0;               // sigma2 / sigma1 of D = (H-z)^-1 - (H_inf-z)^-1
    cplx coefficient;                    // least-squares c in D = c g g^T
    cplx g00;                            // <delta_0, (H-z)^-1 delta_0>
    cplx g00_inverse;
    double coefficient_residual = 0.0;   // |c - 1/G00|
    double entry_residual = 0.0;         // |D_00 - g_0^2 / G00| / |D_00|
    double decoupled_cross_block = 0.0;  // max |(H_inf - z)^-1| between half-lines
    std::optional<cplx> g00_continuum;   // -1/(m_l + m_r) at the same z
    double continuum_residual = 0.0;
    std::string delta_convention;
};

// Dense check of the rank-one resolvent formula. Pass a continuum potential
// to also compare against the Weyl-function Green's function.
RankOneReport resolvent_difference_check(const LatticeModel& model,
                                         const Potential* continuum = nullptr,
                                         const SolverOptions& opts = {});

// (H - z)^-1_{00} / h via a tridiagonal solve, independent of the dense route.
cplx lattice_g00(const LatticeModel& model);

// -1/(m_l(z) + m_r(z)); z real below the spectrum uses boundary values.
cplx continuum_g00(const Potential& p, cplx z, const SolverOptions& opts = {});

}  // namespace wscat
