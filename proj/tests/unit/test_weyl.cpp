#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "wscat/errors.hpp"
#include "wscat/potential.hpp"
#include "wscat/weyl.hpp"

using namespace wscat;

namespace {

cplx isqrt(cplx z) { return cplx(0.0, 1.0) * std::sqrt(z); }

// Fixed-step RK4 on u'' = (V - z) u, used as an oracle with z anywhere in C.
std::array<cplx, 2> rk4(const Potential& p, cplx z, double x0, double x1, std::array<cplx, 2> y,
                        int steps) {
    const double h = (x1 - x0) / steps;
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    // Clamp stage abscissae so rounding never samples V across an endpoint jump.
    auto f = [&](double x, const std::array<cplx, 2>& s) {
        return std::array<cplx, 2>{s[1], (p(std::clamp(x, lo, hi)) - z) * s[0]};
    };
    for (int i = 0; i < steps; ++i) {
        const double x = x0 + i * h;
        const auto k1 = f(x, y);
        const auto k2 = f(x + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
        const auto k3 = f(x + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
        const auto k4 = f(x + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
        for (int c = 0; c < 2; ++c) y[c] += h / 6 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    return y;
}

// m_r from RK4 started with the tail solution e^{ikx}, Im k > 0, at x = X.
// Works in either half-plane.
cplx rk4_m_right(const Potential& p, cplx z, double X, int steps) {
    cplx k = std::sqrt(z - p.tail_right());
    if (k.imag() < 0) k = -k;
    const cplx ik = cplx(0, 1) * k;
    const auto y = rk4(p, z, X, 0.0, {1.0, ik}, steps);
    return y[1] / y[0];
}

}  // namespace

TEST_CASE("interior_m examples on the free line") {
    const Potential zero;
    const auto mr = interior_m(Side::Right, zero, {0.0, 1.0});
    // i * sqrt(i) = e^{3 i pi / 4}
    CHECK(mr.m.real() == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-9));
    CHECK(mr.m.imag() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    const auto ml = interior_m(Side::Left, zero, {4.0, 0.01});
    CHECK(std::abs(ml.m - isqrt({4.0, 0.01})) <= 1e-9);
    CHECK(ml.m.real() == doctest::Approx(-0.0025).epsilon(1e-3));
    CHECK_THROWS_AS(interior_m(Side::Right, zero, {1.0, 0.0}), InvalidArgument);
}

TEST_CASE("step potential right m against a dense-grid oracle") {
    const Potential step(StepPotential{0.0, 1.0});
    const cplx z(4.0, 0.01);
    const auto mr = interior_m(Side::Right, step, {4.0, 0.01});
    CHECK(std::abs(mr.m - isqrt(z - 1.0)) <= 1e-8);
    const cplx oracle = rk4_m_right(step, z, 3.0, 60000);
    CHECK(std::abs(mr.m - oracle) <= 1e-8);
    const auto ml = interior_m(Side::Left, step, {4.0, 0.01});
    CHECK(std::abs(ml.m - isqrt(z)) <= 1e-8);
}

TEST_CASE("boundary_m examples") {
    const Potential zero;
    CHECK(std::abs(boundary_m(Side::Right, zero, 4.0).m - cplx(0, 2)) <= 1e-10);
    CHECK(std::abs(boundary_m(Side::Left, zero, 4.0).m - cplx(0, 2)) <= 1e-10);
    // Below the spectrum both sides are real: m = -sqrt(-lambda) with this sign convention.
    const auto below = boundary_m(Side::Right, zero, -1.0);
    CHECK(std::abs(below.m - cplx(-1.0, 0.0)) <= 1e-8);
}

TEST_CASE("barrier boundary value matches a closed-form oracle") {
    // Right solution e^{ikx} outside x = 1/2, continued through the barrier analytically.
    const Potential barrier(SquareBarrier{2.0, 0.5, 0.0});
    const auto mr = boundary_m(Side::Right, barrier, 1.0);
    const double k = 1.0, kap = 1.0;
    const cplx ik(0.0, k);
    const cplx expected = (-kap * std::sinh(kap / 2) + ik * std::cosh(kap / 2)) /
                          (std::cosh(kap / 2) - (ik / kap) * std::sinh(kap / 2));
    CHECK(mr.m.imag() > 0.0);
    CHECK(std::abs(mr.m - expected) <= 1e-9);
    // Symmetric barrier: the left function coincides.
    CHECK(std::abs(boundary_m(Side::Left, barrier, 1.0).m - expected) <= 1e-9);
}

TEST_CASE("ac_density examples") {
    const Potential zero;
    CHECK(ac_density(Side::Right, zero, 9.0) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(ac_density(Side::Right, zero, -1.0) <= 1e-8);
    const Potential pt(PoschlTeller{1});
    const double rho = ac_density(Side::Left, pt, 1.0);
    CHECK(rho > 0.0);
    // Brute-force ladder with explicit interior values approaches the same limit.
    double prev = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double v = interior_m(Side::Left, pt, {1.0, eps}).m.imag();
        CHECK(v > 0.0);
        prev = v;
    }
    CHECK(std::abs(prev - rho) <= 1e-5);
}

TEST_CASE("constant potential closed form on a z grid") {
    for (double c : {-1.5, 0.0, 2.0}) {
        const Potential p(StepPotential{c, c});
        for (int i = 0; i < 20; ++i) {
            const ComplexEnergy z{-3.0 + 0.5 * i, 0.05 + 0.1 * (i % 5)};
            const cplx expected = isqrt(z.value() - c);
            CHECK(std::abs(interior_m(Side::Right, p, z).m - expected) <= 1e-8);
            CHECK(std::abs(interior_m(Side::Left, p, z).m - expected) <= 1e-8);
        }
    }
}

TEST_CASE("Herglotz positivity for random potentials and energies") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> amp(-3.0, 3.0), width(0.2, 2.0), re(-4.0, 10.0),
        im(0.1, 3.0), pos(-1.5, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        Potential p;
        switch (trial % 4) {
            case 0: p = Potential(SquareBarrier{amp(rng), width(rng), pos(rng)}); break;
            case 1: p = Potential(GaussianBump{amp(rng), width(rng), pos(rng)}); break;
            case 2: p = Potential(PoschlTeller{1 + trial % 3}); break;
            default: p = Potential(StepPotential{amp(rng), amp(rng)}); break;
        }
        const ComplexEnergy z{re(rng), im(rng)};
        for (Side s : {Side::Left, Side::Right}) {
            const auto m = interior_m(s, p, z);
            INFO(p.describe(), " z=", z.re, "+", z.im, "i");
            CHECK(m.m.imag() > 0.0);
        }
    }
}

TEST_CASE("conjugation symmetry against a lower half-plane oracle") {
    const Potential g(GaussianBump{1.2, 0.9, 0.3});
    for (double lam : {-0.5, 0.7, 3.0}) {
        for (double eps : {0.05, 0.5}) {
            const cplx up = interior_m(Side::Right, g, {lam, eps}).m;
            const cplx down = rk4_m_right(g, cplx(lam, -eps), 12.0, 120000);
            CHECK(std::abs(std::conj(up) - down) <= 1e-9);
        }
    }
}

TEST_CASE("halving the ODE tolerance stays within the error estimate") {
    for (const Potential& p : {Potential(SquareBarrier{2.0, 0.5, 0.0}), Potential(PoschlTeller{1}),
                               Potential(GaussianBump{-1.0, 1.0, 0.5})}) {
        SolverOptions fine;
        fine.rel_ode_tol *= 0.5;
        for (double lam : {0.5, 2.0, 6.0}) {
            const auto a = boundary_m(Side::Right, p, lam);
            const auto b = boundary_m(Side::Right, p, lam, fine);
            INFO(p.describe(), " lambda=", lam);
            CHECK(std::abs(a.m - b.m) <= 10.0 * a.err_estimate);
        }
    }
}

TEST_CASE("extrapolation reproduces polynomials and flags divergence") {
    const std::vector<double> eps{1e-1, 5e-2, 2.5e-2, 1.25e-2};
    std::vector<cplx> vals;
    for (double e : eps) vals.push_back(cplx(1.0, 2.0) + 3.0 * e - 4.0 * e * e);
    const auto ex = extrapolate_to_zero(eps, vals);
    CHECK(std::abs(ex.value - cplx(1.0, 2.0)) <= 1e-12);
    std::vector<cplx> wild;
    for (double e : eps) wild.push_back(cplx(std::pow(-30.0, std::log2(0.1 / e)), 0.0));
    CHECK_THROWS_AS(extrapolate_to_zero(eps, wild), ExtrapolationDivergence);
}

TEST_CASE("solver option validation") {
    SolverOptions bad;
    bad.eps_ladder = {1e-3, 1e-2};
    CHECK_THROWS_AS(bad.check(), InvalidArgument);
    SolverOptions neg;
    neg.rel_ode_tol = -1.0;
    CHECK_THROWS_AS(neg.check(), InvalidArgument);
}
