#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wscat/errors.hpp"
#include "wscat/lattice.hpp"

using namespace wscat;

TEST_CASE("free lattice at z = -1") {
    const auto m = LatticeModel::from_potential(Potential(), 200, 0.05, cplx(-1.0, 0.0));
    CHECK(m.N == 200);
    const auto r = resolvent_difference_check(m);
    CHECK(r.sv_ratio <= 1e-10);
    CHECK(r.coefficient_residual <= 1e-8);
    CHECK(r.entry_residual <= 1e-10);
    CHECK(r.decoupled_cross_block == 0.0);
    CHECK_FALSE(r.delta_convention.empty());
}

TEST_CASE("barrier lattice at z = 2 + i") {
    const auto m = LatticeModel::from_potential(Potential(SquareBarrier{2.0, 0.5, 0.0}), 200, 0.05, cplx(2.0, 1.0));
    const auto r = resolvent_difference_check(m);
    CHECK(r.sv_ratio <= 1e-10);
    CHECK(r.entry_residual <= 1e-10);
    CHECK(std::abs(lattice_g00(m) - r.g00) <= 1e-12 * std::abs(r.g00));
}

TEST_CASE("rank one for random models") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> amp(-2.0, 2.0), width(0.3, 1.5), pos(-1.0, 1.0), re(-1.0, 5.0),
        im(0.1, 2.0);
    for (int i = 0; i < 20; ++i) {
        Potential p;
        switch (i % 3) {
            case 0: p = Potential(SquareBarrier{amp(rng), width(rng), pos(rng)}); break;
            case 1: p = Potential(GaussianBump{amp(rng), width(rng), pos(rng)}); break;
            default: p = Potential(PoschlTeller{1 + i % 2}); break;
        }
        const double zr = re(rng);
        const auto m = LatticeModel::from_potential(p, 120, 0.05, cplx(zr, im(rng)));
        const auto r = resolvent_difference_check(m);
        INFO(p.describe(), " z=", m.z.real(), "+", m.z.imag(), "i");
        CHECK(r.sv_ratio <= 1e-10);
        CHECK(r.coefficient_residual <= 1e-8);
        CHECK(r.entry_residual <= 1e-10);
        CHECK(r.decoupled_cross_block == 0.0);
    }
}

TEST_CASE("discrete G00 converges to the continuum at second order") {
    const Potential g(GaussianBump{1.0, 1.0, 0.0});
    double err[3];
    const double hs[] = {0.1, 0.05, 0.025};
    for (int i = 0; i < 3; ++i) {
        const auto n = static_cast<std::size_t>(std::lround(12.0 / hs[i]));
        const auto m = LatticeModel::from_potential(g, n, hs[i], cplx(-1.0, 0.0));
        const auto r = resolvent_difference_check(m, &g);
        REQUIRE(r.g00_continuum);
        err[i] = r.continuum_residual;
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.8);
    CHECK(std::log2(err[1] / err[2]) >= 1.8);
}

TEST_CASE("N is raised to cover the support") {
    const auto m = LatticeModel::from_potential(Potential(PoschlTeller{1}), 10, 0.1, cplx(0.0, 1.0));
    CHECK(m.N * m.h >= effective_support(Potential(PoschlTeller{1}), 1e-12) + kTailMargin);
    CHECK(m.samples.size() == 2 * m.N + 1);
}

TEST_CASE("model validation and singular solves") {
    auto m = LatticeModel::from_potential(Potential(), 20, 0.1, cplx(1.0, 0.0));
    CHECK_THROWS_AS(m.check(), InvalidArgument);
    CHECK_THROWS_AS(LatticeModel::from_potential(Potential(), 20, 0.0, cplx(-1.0, 0.0)), InvalidArgument);

    // Three nodes, h = 1: choosing V = -3 at both ends makes H + 1 singular.
    LatticeModel s;
    s.N = 1;
    s.h = 1.0;
    s.samples = {-3.0, 0.0, -3.0};
    s.z = cplx(-1.0, 0.0);
    CHECK_THROWS_AS(resolvent_difference_check(s), SingularResolvent);
}
