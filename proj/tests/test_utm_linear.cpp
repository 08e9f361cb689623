#include <doctest.h>

#include <cmath>
#include <complex>

#include "mb/error.hpp"
#include "mb/profiles.hpp"
#include "mb/utm_linear.hpp"
#include "mb/whole_line.hpp"

using namespace mb;
using cd = std::complex<double>;

namespace {

GridSpec small_grid() {
    GridSpec g;
    g.L = 30.0;
    g.nx = 301;
    g.T = 0.2;
    g.nt = 81;
    g.R = 8.0;
    g.nq = 64;
    return g;
}

LinearProblem make(BoundaryKind kind, double gamma, double alpha, const std::string& init, const std::string& bdry) {
    LinearProblem p;
    p.grid = small_grid();
    p.alpha = alpha;
    p.kind = kind;
    p.gamma = gamma;
    p.initial = Profile::parse(init).sample(p.grid.dx(), p.grid.nx);
    p.boundary = Profile::parse(bdry).sample(p.grid.dt(), p.grid.nt);
    return p;
}

const char* kPulse = "gaussian(center=0.1, width=0.025)";
const char* kBump = "gaussian(center=10, width=2)";

std::vector<double> rel_target(const LinearProblem& p) { return p.boundary; }

}  // namespace

TEST_CASE("Dirichlet: initial and boundary recovery") {
    const auto p = make(BoundaryKind::Dirichlet, 0.0, 1.0, kBump, kPulse);
    UtmSolver s(p);
    const auto sol = s.solve();
    CHECK(relative_l2(sol.values.slice(0), p.initial) < 1e-3);
    CHECK(relative_l2(s.trace(0), rel_target(p)) < 1e-3);
    CHECK(boundary_residual(s, p) < 1e-3);
    CHECK(sol.meta["imag_residue_relative"].get<double>() < 1e-6);
    CHECK(sol.meta["tail_ratio"].get<double>() < 1e-3);
}

TEST_CASE("interior data away from the boundary follows the whole-line flow") {
    auto p = make(BoundaryKind::Dirichlet, 0.0, 2.5, kBump, "zero");
    const auto sol = solve_dirichlet(p);
    LineGrid lg{-30.0, 0.1, 900};
    std::vector<double> V0(lg.n);
    for (std::size_t i = 0; i < lg.n; ++i) V0[i] = std::exp(-std::pow((lg.x(i) - 10.0) / 2.0, 2));
    const auto V = solve_ivp_homogeneous(V0, lg, 2.5, p.grid.T);
    double err = 0.0;
    for (std::size_t j = 50; j < p.grid.nx; ++j) err = std::max(err, std::abs(sol.values(j, p.grid.nt - 1) - V[300 + j]));
    CHECK(err < 1e-8);
}

TEST_CASE("Neumann and Robin trace recovery") {
    for (double alpha : {1.0, 2.5}) {
        for (auto [kind, gamma] : {std::pair{BoundaryKind::Neumann, 0.0}, std::pair{BoundaryKind::Robin, -1.0},
                                    std::pair{BoundaryKind::Robin, 0.8}}) {
            const auto p = make(kind, gamma, alpha, kBump, kPulse);
            UtmSolver s(p);
            CHECK(boundary_residual(s, p) < 1e-2);
            CHECK(relative_l2(s.solve().values.slice(0), p.initial) < 1e-3);
            CHECK(s.contour().residue_active() == (gamma > 0.0));
        }
    }
}

TEST_CASE("Robin with the pole active and data touching the boundary") {
    // Zero boundary data: v_x + gamma v must vanish although both terms are O(1).
    for (double gamma : {0.3, 1.5}) {
        auto p = make(BoundaryKind::Robin, gamma, 1.0, "gaussian(center=4, width=1)", "zero");
        UtmSolver s(p);
        const auto v0 = s.trace(0), v1 = s.trace(1);
        double res = 0.0, scale = 0.0;
        for (std::size_t n = 0; n < v0.size(); ++n) {
            res = std::max(res, std::abs(v1[n] + gamma * v0[n]));
            scale = std::max(scale, std::abs(v1[n]));
        }
        CHECK(scale > 1e-2);
        CHECK(res < 1e-5 * scale + 2e-6);
    }
}

TEST_CASE("Robin with gamma = 0 is Neumann") {
    auto pr = make(BoundaryKind::Robin, 0.0, 2.5, kBump, kPulse);
    auto pn = pr;
    pn.kind = BoundaryKind::Neumann;
    const auto r = solve_robin(pr);
    const auto n = solve_neumann(pn);
    double diff = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < r.values.raw().size(); ++i) {
        diff = std::max(diff, std::abs(r.values.raw()[i] - n.values.raw()[i]));
        peak = std::max(peak, std::abs(n.values.raw()[i]));
    }
    CHECK(diff <= 1e-10 * peak);
}

TEST_CASE("linearity in the data") {
    const auto p1 = make(BoundaryKind::Dirichlet, 0.0, 1.0, kBump, "zero");
    const auto p2 = make(BoundaryKind::Dirichlet, 0.0, 1.0, "zero", kPulse);
    auto p3 = p1;
    for (std::size_t j = 0; j < p3.initial.size(); ++j) p3.initial[j] = 2.0 * p1.initial[j];
    for (std::size_t n = 0; n < p3.boundary.size(); ++n) p3.boundary[n] = -3.0 * p2.boundary[n];
    const auto a = solve_linear(p1), b = solve_linear(p2), c = solve_linear(p3);
    std::vector<double> mix(a.values.raw().size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * a.values.raw()[i] - 3.0 * b.values.raw()[i];
    CHECK(relative_l2(c.values.raw(), mix) < 1e-12);
}

TEST_CASE("global relation on a manufactured solution") {
    // u = (1+t)^2 (1+x) e^{-x} with the matching forcing.
    const double alpha = 1.7;
    LinearProblem p;
    p.grid.L = 40.0;
    p.grid.nx = 2001;
    p.grid.T = 0.2;
    p.grid.nt = 41;
    p.alpha = alpha;
    p.kind = BoundaryKind::Dirichlet;
    const auto& g = p.grid;
    FieldSlice exact;
    exact.grid = g;
    exact.values = Field2D(g.nx, g.nt);
    p.forcing = Field2D(g.nx, g.nt);
    p.initial.resize(g.nx);
    p.boundary.resize(g.nt);
    for (std::size_t n = 0; n < g.nt; ++n) {
        const double t = g.t(n);
        p.boundary[n] = (1 + t) * (1 + t);
        for (std::size_t j = 0; j < g.nx; ++j) {
            const double x = g.x(j), e = std::exp(-x);
            exact.values(j, n) = (1 + t) * (1 + t) * (1 + x) * e;
            p.forcing(j, n) = 2 * (1 + t) * (1 + x) * e + alpha * (1 + t) * (1 + t) * (2 - x) * e;
        }
    }
    p.initial.assign(exact.values.slice(0).begin(), exact.values.slice(0).end());
    std::vector<cd> probes;
    for (int k = 0; k < 10; ++k) probes.emplace_back(-2.0 + 0.45 * k, -0.1 * (k % 4));
    CHECK(global_relation_residual(exact, p, probes, g.T) < 1e-4);
    auto bad = exact;
    for (auto& v : bad.values.raw()) v *= 1.1;
    CHECK(global_relation_residual(bad, p, probes, g.T) > 1e-2);
}

TEST_CASE("superposition agrees with the one-shot formula") {
    for (auto [kind, gamma] : {std::pair{BoundaryKind::Dirichlet, 0.0}, std::pair{BoundaryKind::Robin, -1.0}}) {
        auto p = make(kind, gamma, 2.5, kBump, kPulse);
        p.grid.nt = 41;
        p.boundary = Profile::parse(kPulse).sample(p.grid.dt(), p.grid.nt);
        p.forcing = ForcingProfile::parse("gaussian(center=8, width=1.5) * sine_pulse(center=0.1, width=0.08)").sample(p.grid);
        const auto direct = solve_linear(p);
        const auto super = solve_forced_by_superposition(p);
        CHECK(relative_l2(super.values.raw(), direct.values.raw()) < 1e-2);
    }
}

TEST_CASE("error reporting") {
    auto p = make(BoundaryKind::Robin, 1e-4, 1.0, kBump, kPulse);
    try {
        UtmSolver s(p);
        FAIL("expected PoleOnContour");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PoleOnContour);
        CHECK(e.field() == "gamma");
    }
    const auto q = make(BoundaryKind::Dirichlet, 0.0, 1.0, kBump, kPulse);
    UtmSolver s(q);
    const double xs[] = {-0.5};
    CHECK_THROWS_AS(s.evaluate(xs), Error);
    auto r = q;
    r.initial.pop_back();
    CHECK_THROWS_AS(UtmSolver{r}, Error);
    auto n = q;
    n.kind = BoundaryKind::Neumann;
    n.gamma = 0.5;
    CHECK_THROWS_AS(solve_neumann(n), Error);
}

TEST_CASE("corner mismatch is reported as a warning") {
    auto p = make(BoundaryKind::Dirichlet, 0.0, 1.0, kBump, "constant(amp=0.5)");
    const auto sol = solve_linear(p);
    CHECK(sol.meta["compatibility_mismatch"].get<double>() == doctest::Approx(0.5));
    REQUIRE(sol.meta.contains("warnings"));
}
