#include <doctest.h>

#include <cmath>
#include <complex>

#include "mb/error.hpp"
#include "mb/oracle.hpp"
#include "mb/profiles.hpp"
#include "mb/utm_linear.hpp"

using namespace mb;

namespace {

using C = std::complex<double>;

// v = exp(-t) Im exp(i(x + 0.3) - x^2/16)
constexpr double kW = 4.0;
C carrier(double x) { return std::exp(C(0.0, x + 0.3) - x * x / (kW * kW)); }
C dq(double x) { return C(0.0, 1.0) - 2.0 * x / (kW * kW); }
double exact(double x, double t) { return std::exp(-t) * carrier(x).imag(); }
double exact_x(double x, double t) { return std::exp(-t) * (dq(x) * carrier(x)).imag(); }
double exact_xxx(double x, double t) {
    const C a = dq(x), b = -2.0 / (kW * kW);
    return std::exp(-t) * ((a * a * a + 3.0 * a * b) * carrier(x)).imag();
}

LinearProblem manufactured(std::size_t nx, double alpha, BoundaryKind kind, double gamma) {
    LinearProblem p;
    p.alpha = alpha;
    p.kind = kind;
    p.gamma = gamma;
    p.grid.L = 20.0;
    p.grid.nx = nx;
    p.grid.T = 0.2;
    p.grid.nt = 41;
    const GridSpec& g = p.grid;
    p.initial.resize(nx);
    for (std::size_t j = 0; j < nx; ++j) p.initial[j] = exact(g.x(j), 0.0);
    p.boundary.resize(g.nt);
    for (std::size_t n = 0; n < g.nt; ++n) {
        const double t = g.t(n);
        p.boundary[n] = kind == BoundaryKind::Dirichlet ? exact(0.0, t) : exact_x(0.0, t) + gamma * exact(0.0, t);
    }
    p.forcing = Field2D(nx, g.nt);
    for (std::size_t n = 0; n < g.nt; ++n)
        for (std::size_t j = 0; j < nx; ++j)
            p.forcing(j, n) = -exact(g.x(j), g.t(n)) + alpha * exact_xxx(g.x(j), g.t(n));
    return p;
}

double manufactured_error(const FieldSlice& s) {
    Field2D ref(s.values.nx(), s.values.nt());
    for (std::size_t n = 0; n < ref.nt(); ++n)
        for (std::size_t j = 0; j < ref.nx(); ++j) ref(j, n) = exact(s.grid.x(j), s.grid.t(n));
    return relative_l2(s.values.raw(), ref.raw());
}

GridSpec quiescent_grid() {
    GridSpec g;
    g.L = 40.0;
    g.nx = 401;
    g.T = 0.1;
    g.nt = 51;
    return g;
}

LinearProblem gaussian_problem(double alpha, BoundaryKind kind, double gamma) {
    LinearProblem p;
    p.alpha = alpha;
    p.kind = kind;
    p.gamma = gamma;
    p.grid = quiescent_grid();
    p.initial = Profile::parse("gaussian(center=15, width=2)").sample(p.grid.dx(), p.grid.nx);
    p.boundary.assign(p.grid.nt, 0.0);
    return p;
}

ProblemData mb_data(const GridSpec& g, double amp) {
    ProblemData d = ProblemData::zeros(g);
    d.u0 = Profile::parse("gaussian(center=15, width=2)").sample(g.dx(), g.nx);
    d.v0 = Profile::parse("gaussian(center=18, width=2, amp=0.8)").sample(g.dx(), g.nx);
    for (auto& x : d.u0) x *= amp;
    for (auto& x : d.v0) x *= amp;
    return d;
}

double integral(const Field2D& f, std::size_t n, double dx) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.nx(); ++j) s += f(j, n);
    return s * dx;
}

}  // namespace

TEST_CASE("stencil scheme") {
    StencilScheme sc;
    CHECK(d3_monomial_defect(sc) < 1e-10);
    sc.order = 6;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = {};
    sc.refine = 0;
    CHECK_THROWS_AS(sc.validate(), Error);
}

TEST_CASE("oracle_linear: zero data stays zero") {
    LinearProblem p = gaussian_problem(1.0, BoundaryKind::Dirichlet, 0.0);
    p.initial.assign(p.grid.nx, 0.0);
    CHECK(oracle_linear(p).values.max_abs() == 0.0);
}

TEST_CASE("oracle_linear: manufactured solution, fourth order in space") {
    for (auto [kind, gamma] : {std::pair{BoundaryKind::Dirichlet, 0.0}, std::pair{BoundaryKind::Neumann, 0.0},
                               std::pair{BoundaryKind::Robin, -1.0}, std::pair{BoundaryKind::Robin, 0.7}})
        for (double alpha : {1.0, 2.5}) {
            CAPTURE(to_string(kind));
            CAPTURE(alpha);
            CAPTURE(gamma);
            const double e1 = manufactured_error(oracle_linear(manufactured(101, alpha, kind, gamma)));
            const double e2 = manufactured_error(oracle_linear(manufactured(201, alpha, kind, gamma)));
            const double e3 = manufactured_error(oracle_linear(manufactured(401, alpha, kind, gamma)));
            CHECK(e2 <= 1e-3);
            CHECK(std::abs(std::log2(e2 / e3) - 4.0) <= 0.3);
            CHECK(std::log2(e1 / e3) / 2.0 >= 3.5);
        }
}

TEST_CASE("oracle_linear: second order in time") {
    const LinearProblem p = gaussian_problem(2.5, BoundaryKind::Dirichlet, 0.0);
    StencilScheme ref;
    ref.dt_ratio = 0.05;
    const FieldSlice r = oracle_linear(p, ref);
    StencilScheme a, b;
    a.dt_ratio = 1.0;
    b.dt_ratio = 0.5;
    const FieldSlice sa = oracle_linear(p, a), sb = oracle_linear(p, b);
    CHECK(int(sa.meta["substeps"]) * 2 == int(sb.meta["substeps"]));
    const double ea = relative_l2(sa.values.raw(), r.values.raw());
    const double eb = relative_l2(sb.values.raw(), r.values.raw());
    CHECK(std::abs(std::log2(ea / eb) - 2.0) <= 0.3);
}

TEST_CASE("oracle_linear: linear in the data") {
    const LinearProblem a = manufactured(201, 1.5, BoundaryKind::Robin, 0.4);
    LinearProblem b = gaussian_problem(1.5, BoundaryKind::Robin, 0.4);
    b.grid = a.grid;
    b.initial = Profile::parse("gaussian(center=8, width=1.5)").sample(a.grid.dx(), a.grid.nx);
    b.boundary.assign(a.grid.nt, 0.25);
    b.forcing = Field2D();
    LinearProblem c = a;
    for (std::size_t j = 0; j < c.initial.size(); ++j) c.initial[j] = 2.0 * a.initial[j] - 3.0 * b.initial[j];
    for (std::size_t n = 0; n < c.boundary.size(); ++n) c.boundary[n] = 2.0 * a.boundary[n] - 3.0 * b.boundary[n];
    for (auto& x : c.forcing.raw()) x *= 2.0;
    const FieldSlice sa = oracle_linear(a), sb = oracle_linear(b), sc = oracle_linear(c);
    std::vector<double> combo(sa.values.raw().size());
    for (std::size_t k = 0; k < combo.size(); ++k) combo[k] = 2.0 * sa.values.raw()[k] - 3.0 * sb.values.raw()[k];
    CHECK(relative_l2(sc.values.raw(), combo) < 1e-12);
}

TEST_CASE("oracle_linear agrees with the transform solution before boundary interaction") {
    for (double alpha : {1.0, 2.5})
        for (auto [kind, gamma] : {std::pair{BoundaryKind::Dirichlet, 0.0}, std::pair{BoundaryKind::Robin, -1.0}}) {
            const LinearProblem p = gaussian_problem(alpha, kind, gamma);
            CHECK(relative_l2(oracle_linear(p).values.raw(), solve_linear(p).values.raw()) <= 1e-2);
        }
}

TEST_CASE("oracle_linear: closure errors") {
    LinearProblem p = gaussian_problem(1.0, BoundaryKind::Dirichlet, 0.0);
    p.grid.nx = 9;
    p.initial.assign(9, 0.0);
    try {
        oracle_linear(p);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularOperator);
    }
}

TEST_CASE("oracle_mb: zero data and small-amplitude limit") {
    const GridSpec g = quiescent_grid();
    MBParams mp;
    mp.alpha = 2.0;
    const SolutionField z = oracle_mb(mp, g, ProblemData::zeros(g));
    CHECK(z.u.max_abs() == 0.0);
    CHECK(z.v.max_abs() == 0.0);

    // deviation from the linear flow is quadratic in the amplitude
    auto deviation = [&](double amp) {
        const ProblemData d = mb_data(g, amp);
        const SolutionField s = oracle_mb(mp, g, d);
        const LinearProblem pv = LinearProblem::v_equation(mp, g, d);
        return relative_l2(s.v.raw(), oracle_linear(pv).values.raw()) * amp;
    };
    const double d1 = deviation(1e-2), d2 = deviation(5e-3);
    CHECK(std::abs(std::log2(d1 / d2) - 2.0) <= 0.2);
}

TEST_CASE("oracle_mb: conservation for interior data") {
    const GridSpec g = quiescent_grid();
    MBParams mp;
    mp.alpha = 2.0;
    const SolutionField s = oracle_mb(mp, g, mb_data(g, 1.0));
    auto energy = [&](std::size_t n) {
        double e = 0.0;
        for (std::size_t j = 0; j < g.nx; ++j) e += s.u(j, n) * s.u(j, n) + s.v(j, n) * s.v(j, n);
        return e * g.dx();
    };
    const std::size_t last = g.nt - 1;
    CHECK(std::abs(energy(last) - energy(0)) / energy(0) <= 1e-4);
    CHECK(std::abs(integral(s.u, last, g.dx()) - integral(s.u, 0, g.dx())) <= 1e-6);
    CHECK(std::abs(integral(s.v, last, g.dx()) - integral(s.v, 0, g.dx())) <= 1e-6);
}

TEST_CASE("oracle_mb: runaway growth is rejected") {
    GridSpec g = quiescent_grid();
    MBParams mp;
    StencilScheme sc;
    sc.dt_ratio = 400.0;
    ProblemData d = mb_data(g, 300.0);
    try {
        oracle_mb(mp, g, d, sc);
        FAIL("expected StepRejected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StepRejected);
    }
}
