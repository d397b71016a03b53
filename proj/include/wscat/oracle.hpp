#pragma once

#include <complex>
#include <cstddef>

#include "wscat/potential.hpp"

namespace wscat {

// Plane-wave amplitudes for a wave e^{ikx} incident from the left:
//   u = e^{ikx} + r e^{-ikx} for x <= -X,   u = t e^{ikx} for x >= X.
struct TransferResult {
    double k = 0.0;
    std::complex<double> r_amp;
    std::complex<double> t_amp;
    std::size_t slab_count = 0;
};

// Piecewise-constant (midpoint) slabs of width <= slab_width between the
// potential's breakpoints on [-X, X], X = support radius (or half_width when
// given). Requires compact support and zero tails.
TransferResult transfer_reflection(const Potential& p, double k, double slab_width,
                                   double half_width = 0.0);

struct BarrierProbabilities {
    double reflect_prob = 0.0;
    double transmit_prob = 0.0;
};

// Textbook rectangular barrier of height v0 and total width a at energy e,
// for H = -d^2/dx^2 + V.
BarrierProbabilities closed_form_barrier(double e, double v0, double a);

}  // namespace wscat
