#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include "wscat/potential.hpp"

namespace wscat::ode {

using cplx = std::complex<double>;

// (u, u') for the linear Schrodinger system u'' = (V(x) - z) u.
using State = std::array<cplx, 2>;

struct Settings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    int renorm_interval = 16;
    std::size_t max_steps = 20'000'000;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t renormalizations = 0;
};

// Dormand-Prince 5(4) with step-size control, integrated piecewise between the
// potential's breakpoints. The state is rescaled by 1/max(|u|,|u'|) every
// renorm_interval accepted steps, so only ratios of the result are meaningful.
State integrate_schrodinger(const Potential& p, cplx z, double x_from, double x_to, State init,
                            const Settings& settings, Stats* stats = nullptr);

}  // namespace wscat::ode
