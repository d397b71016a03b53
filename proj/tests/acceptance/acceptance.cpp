// Cross-method acceptance suite: one PASS/FAIL line per criterion.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wscat/dynamics.hpp"
#include "wscat/lattice.hpp"
#include "wscat/oracle.hpp"
#include "wscat/scattering.hpp"
#include "wscat/weyl.hpp"

using namespace wscat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Residuals of the algebraic identity and unitarity, folded over every sweep.
struct SweepLedger {
    double identity = 0.0;
    double unitarity = 0.0;
    double modulus = 0.0;
    std::size_t points = 0;

    void add(const ScatteringMatrix2& s, const ReflectionRecord& r) {
        identity = std::max(identity, std::abs(s.s_ll - r.r_spectral));
        unitarity = std::max(unitarity, s.unitarity_residual());
        modulus = std::max(modulus, std::abs(std::abs(s.s_ll) - std::abs(s.s_rr)));
        ++points;
    }
};

SweepLedger ledger;

struct SweepPoint {
    ScatteringMatrix2 s;
    ReflectionRecord r;
};

SweepPoint spectral_point(const Potential& p, double lambda) {
    const BoundaryPair mp = boundary_pair(p, lambda);
    SweepPoint pt{scattering_matrix(lambda, mp.left, mp.right), spectral_reflection(lambda, mp.left, mp.right)};
    ledger.add(pt.s, pt.r);
    return pt;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

int failures = 0;

void criterion(const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (limit_seconds > 0.0) {
        timing += fmt(" (limit %g s)", limit_seconds);
        if (secs >= limit_seconds) out.ok = false;
    }
    std::printf("[%s] %s: %s; %s\n", out.ok ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
}

Outcome free_line() {
    const Potential zero;
    double max_s = 0.0, max_r = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const auto pt = spectral_point(zero, 0.1 * i);
        max_s = std::max(max_s, std::abs(pt.s.s_ll));
        max_r = std::max(max_r, pt.r.reflect_prob);
    }
    return {max_s <= 1e-10 && max_r <= 1e-10,
            "max|s_ll| = " + fmt("%.3g", max_s) + ", max reflect_prob = " + fmt("%.3g", max_r) + " (tol 1e-10)"};
}

Outcome barrier_oracle() {
    const Potential barrier(SquareBarrier{2.0, 0.5, 0.0});
    double worst = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double lam = 0.05 + (8.0 - 0.05) * i / 40.0;
        const auto pt = spectral_point(barrier, lam);
        const double orc = std::norm(transfer_reflection(barrier, std::sqrt(lam), 0.005).r_amp);
        worst = std::max(worst, std::abs(pt.r.reflect_prob - orc));
    }
    const auto at1 = spectral_point(barrier, 1.0);
    const double t_spec = at1.r.transmit_prob;
    const double t_orc = std::norm(transfer_reflection(barrier, 1.0, 0.005).t_amp);
    const double t_cf = closed_form_barrier(1.0, 2.0, 1.0).transmit_prob;
    const double d1 = std::max(std::abs(t_spec - 0.4199), std::abs(t_orc - 0.4199));
    const double d_cf = std::max(std::abs(t_spec - t_cf), std::abs(t_orc - t_cf));
    return {worst <= 1e-6 && d1 <= 1e-4,
            "max |R_spec - |r|^2| = " + fmt("%.3g", worst) + " (tol 1e-6); T(1) spectral " + fmt("%.6f", t_spec) +
                ", transfer " + fmt("%.6f", t_orc) + ", closed form " + fmt("%.6f", t_cf) +
                ", |T - 0.4199| = " + fmt("%.2g", d1) + " (tol 1e-4), |T - T_cf| = " + fmt("%.2g", d_cf)};
}

Outcome reflectionless_family() {
    double spec_max = 0.0, orc_max = 0.0;
    for (int nu : {1, 2}) {
        const Potential pt(PoschlTeller{nu});
        const Potential compact = pt.truncated(1e-12);
        for (int i = 0; i < 32; ++i) {
            const double lam = 0.5 + 7.5 * i / 31.0;
            spec_max = std::max(spec_max, spectral_point(pt, lam).r.reflect_prob);
            orc_max = std::max(orc_max, std::norm(transfer_reflection(compact, std::sqrt(lam), 0.005).r_amp));
        }
    }
    return {spec_max <= 1e-6 && orc_max <= 1e-8,
            "spectral max R = " + fmt("%.3g", spec_max) + " (tol 1e-6), transfer max |r|^2 = " + fmt("%.3g", orc_max) +
                " (tol 1e-8)"};
}

Outcome dynamics() {
    const auto barrier = evolve_packet(Potential(SquareBarrier{2.0, 0.5, 0.0}), PacketSpec{});
    PacketSpec free_spec;
    free_spec.k0 = 2.0;
    free_spec.sigma_x = 4.0;
    free_spec.x0 = -40.0;
    free_spec.L = 120.0;
    const auto free = evolve_packet(Potential(), free_spec);
    PacketSpec pt_spec;
    pt_spec.k0 = 1.5;
    const auto pt = evolve_packet(Potential(PoschlTeller{1}), pt_spec);
    const double d = std::abs(barrier.left_mass - barrier.predicted_reflect);
    return {d <= 1e-2 && free.left_mass <= 1e-3 && pt.left_mass <= 1e-3,
            "barrier left_mass " + fmt("%.6f", barrier.left_mass) + " vs predicted " +
                fmt("%.6f", barrier.predicted_reflect) + " (|diff| " + fmt("%.2g", d) + ", tol 1e-2); free " +
                fmt("%.2g", free.left_mass) + ", Poschl-Teller " + fmt("%.2g", pt.left_mass) + " (tol 1e-3)"};
}

Outcome lattice() {
    std::mt19937_64 rng(20261014);
    std::uniform_real_distribution<double> amp(-2.0, 2.0), width(0.3, 1.5), pos(-1.0, 1.0), re(-1.0, 5.0),
        im(0.1, 2.0);
    double ratio = 0.0, coef = 0.0;
    for (int i = 0; i < 20; ++i) {
        Potential p;
        switch (i % 4) {
            case 0: p = Potential(SquareBarrier{amp(rng), width(rng), pos(rng)}); break;
            case 1: p = Potential(GaussianBump{amp(rng), width(rng), pos(rng)}); break;
            case 2: p = Potential(ZeroPotential{}); break;
            default: p = Potential(SquareBarrier{amp(rng), 0.5 * width(rng), pos(rng)}); break;
        }
        const double zr = re(rng);
        const auto rep = resolvent_difference_check(LatticeModel::from_potential(p, 200, 0.05, cplx(zr, im(rng))));
        ratio = std::max(ratio, rep.sv_ratio);
        coef = std::max(coef, rep.coefficient_residual);
    }
    const Potential g(GaussianBump{1.0, 1.0, 0.0});
    double err[3];
    const double hs[] = {0.1, 0.05, 0.025};
    for (int i = 0; i < 3; ++i) {
        const auto n = static_cast<std::size_t>(std::lround(12.0 / hs[i]));
        err[i] = resolvent_difference_check(LatticeModel::from_potential(g, n, hs[i], cplx(-1.0, 0.0)), &g)
                     .continuum_residual;
    }
    const double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
    return {ratio <= 1e-10 && coef <= 1e-8 && order >= 1.8,
            "max sigma2/sigma1 = " + fmt("%.3g", ratio) + " (tol 1e-10), max |c - 1/G00| = " + fmt("%.3g", coef) +
                " (tol 1e-8), observed mesh order " + fmt("%.3f", order) + " (min 1.8)"};
}

// RK4 continuation of e^{ikx} (Im k > 0) from x = X down to 0; valid for z in either half-plane.
cplx rk4_m_right(const Potential& p, cplx z, double X, int steps) {
    cplx k = std::sqrt(z - p.tail_right());
    if (k.imag() < 0) k = -k;
    cplx u = 1.0, du = cplx(0, 1) * k;
    const double h = -X / steps;
    auto acc = [&](double x, cplx y) { return (p(std::clamp(x, 0.0, X)) - z) * y; };
    for (int i = 0; i < steps; ++i) {
        const double x = X + i * h;
        const cplx k1u = du, k1d = acc(x, u);
        const cplx k2u = du + h / 2 * k1d, k2d = acc(x + h / 2, u + h / 2 * k1u);
        const cplx k3u = du + h / 2 * k2d, k3d = acc(x + h / 2, u + h / 2 * k2u);
        const cplx k4u = du + h * k3d, k4d = acc(x + h, u + h * k3u);
        u += h / 6 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += h / 6 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    return du / u;
}

Outcome herglotz() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> amp(-3.0, 3.0), width(0.2, 2.0), pos(-1.5, 1.5), re(-4.0, 10.0),
        im(0.0, 2.0);
    double worst = kInfiniteSupport;
    int cases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Potential p;
        switch (trial % 4) {
            case 0: p = Potential(SquareBarrier{amp(rng), width(rng), pos(rng)}); break;
            case 1: p = Potential(GaussianBump{amp(rng), width(rng), pos(rng)}); break;
            case 2: p = Potential(PoschlTeller{1 + trial % 3}); break;
            default: p = Potential(StepPotential{amp(rng), amp(rng)}); break;
        }
        const double zr = re(rng);
        const double zi = trial % 5 == 0 ? 0.0 : im(rng);  // every fifth case is a boundary value
        for (Side s : {Side::Left, Side::Right}) {
            const MValue m = zi > 0.0 ? interior_m(s, p, {zr, zi}) : boundary_m(s, p, zr);
            worst = std::min(worst, m.m.imag() + m.err_estimate);
            ++cases;
        }
    }
    double conj_res = 0.0;
    const Potential g(GaussianBump{1.2, 0.9, 0.3});
    for (double lam : {-0.5, 0.7, 3.0})
        for (double eps : {0.05, 0.5}) {
            const cplx up = interior_m(Side::Right, g, {lam, eps}).m;
            conj_res = std::max(conj_res, std::abs(std::conj(up) - rk4_m_right(g, cplx(lam, -eps), 12.0, 120000)));
        }
    return {worst >= 0.0 && conj_res <= 1e-9,
            "min (Im m + err) over " + std::to_string(cases) + " values = " + fmt("%.3g", worst) +
                " (must be >= 0), conjugation residual " + fmt("%.3g", conj_res) + " (tol 1e-9)"};
}

Outcome identity_sweeps() {
    return {ledger.identity <= 1e-10,
            "max |s_ll - r_spectral| = " + fmt("%.3g", ledger.identity) + " over " + std::to_string(ledger.points) +
                " sweep points (tol 1e-10)"};
}

Outcome unitarity_sweeps() {
    return {ledger.unitarity <= 1e-8 && ledger.modulus <= 1e-10,
            "max ||s s* - I||_max = " + fmt("%.3g", ledger.unitarity) + " (tol 1e-8), max ||s_ll| - |s_rr|| = " +
                fmt("%.3g", ledger.modulus) + " (tol 1e-10) over " + std::to_string(ledger.points) + " points"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / ("wscat_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path cfg = dir / "verify.json";
    std::ofstream(cfg) << R"({"potential": {"kind": "square_barrier", "height": 2, "half_width": 0.5},
        "lambda_grid": {"min": 0.1, "max": 8, "count": 24}})";
    std::string outputs[2];
    int codes[2];
    for (int i = 0; i < 2; ++i) {
        const fs::path out = dir / ("run" + std::to_string(i) + ".csv");
        const std::string cmd = std::string(WSCAT_CLI_PATH) + " verify --seed 42 --config " + cfg.string() +
                                " --out " + out.string();
        const int raw = std::system(cmd.c_str());
        codes[i] = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        outputs[i] = slurp(out);
    }
    fs::remove_all(dir);
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    return {same && codes[0] == 0 && codes[1] == 0,
            std::string(same ? "byte-identical" : "outputs differ") + " verify CSV (" +
                std::to_string(outputs[0].size()) + " bytes), exit codes " + std::to_string(codes[0]) + "/" +
                std::to_string(codes[1])};
}

void extra_sweeps() {
    // Sweeps that include thresholds, below-spectrum energies and one-sided spectrum.
    const std::vector<Potential> ps{Potential(StepPotential{0.0, 1.0}), Potential(StepPotential{-1.0, 2.0}),
                                    Potential(GaussianBump{-1.5, 0.8, 0.4}), Potential(SquareBarrier{-2.0, 1.0, 0.0})};
    for (const auto& p : ps)
        for (int i = 0; i < 25; ++i) spectral_point(p, -0.9 + 0.37 * i);
}

}  // namespace

int main() {
    criterion("AC1 free-line reflectionlessness", 1.0, free_line);
    criterion("AC4 barrier oracle equivalence", 10.0, barrier_oracle);
    criterion("AC5 reflectionless Poschl-Teller family", 30.0, reflectionless_family);
    extra_sweeps();
    criterion("AC2 s_ll = r_spectral identity", 0.0, identity_sweeps);
    criterion("AC3 unitarity and |s_ll| = |s_rr|", 0.0, unitarity_sweeps);
    criterion("AC6 dynamical = spectral", 120.0, dynamics);
    criterion("AC7 rank-one resolvent identity", 30.0, lattice);
    criterion("AC8 Herglotz and conjugation", 0.0, herglotz);
    criterion("AC9 verify determinism", 0.0, determinism);
    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
