#include "mb/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "mb/error.hpp"
#include "mb/norms.hpp"
#include "mb/quadrature.hpp"

namespace mb {

namespace {

constexpr std::size_t kWidth = 5;

double stacked_norm(const Field2D& a, const Field2D& b) {
    return std::hypot(l2_norm(a.raw()), l2_norm(b.raw()));
}

double stacked_diff(const SolutionField& x, const SolutionField& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.u.raw().size(); ++k) {
        const double du = x.u.raw()[k] - y.u.raw()[k], dv = x.v.raw()[k] - y.v.raw()[k];
        s += du * du + dv * dv;
    }
    return std::sqrt(s);
}

// the pair of linear solves, run concurrently
SolutionField solve_pair(const LinearProblem& pu, const LinearProblem& pv, const UtmOptions& opt, bool parallel) {
    auto fu = std::async(parallel ? std::launch::async : std::launch::deferred, [&] { return solve_linear(pu, opt); });
    FieldSlice sv = solve_linear(pv, opt);
    FieldSlice su = fu.get();
    SolutionField out;
    out.grid = pu.grid;
    out.u = std::move(su.values);
    out.v = std::move(sv.values);
    out.meta["u"] = std::move(su.meta);
    out.meta["v"] = std::move(sv.meta);
    return out;
}

void add_into(Field2D& dst, const Field2D& src) {
    if (src.nx() == 0) return;
    if (dst.nx() == 0) {
        dst = src;
        return;
    }
    for (std::size_t k = 0; k < dst.raw().size(); ++k) dst.raw()[k] += src.raw()[k];
}

void check_state(const SolutionField& s, const GridSpec& g) {
    if (s.u.nx() != g.nx || s.u.nt() != g.nt || s.v.nx() != g.nx || s.v.nt() != g.nt)
        fail(ErrorKind::InvariantViolation, "state", "state must live on the problem grid");
}

}  // namespace

void IterationConfig::validate(const GridSpec& grid) const {
    if (T_star < 0.0) fail(ErrorKind::InvariantViolation, "T_star", "T_star must be positive");
    if (lifespan(grid) > grid.T + 1e-15) fail(ErrorKind::InvariantViolation, "T_star", "need T_star <= T");
    if (max_iters < 1) fail(ErrorKind::InvariantViolation, "max_iters", "need at least one iteration");
    if (!(tol > 0.0)) fail(ErrorKind::InvariantViolation, "tol", "tol must be positive");
    if (!(c0 > 0.0)) fail(ErrorKind::InvariantViolation, "c0", "c0 must be positive");
}

std::vector<double> ddx4(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    if (n < kWidth) fail(ErrorKind::InvariantViolation, "nx", "need at least five samples for the derivative");
    std::vector<double> out(n);
    // interior weights are shared; only the two nodes at each end differ
    auto weights_at = [&](std::size_t j) {
        std::size_t start = j >= 2 ? j - 2 : 0;
        start = std::min(start, n - kWidth);
        std::vector<double> xs(kWidth);
        for (std::size_t k = 0; k < kWidth; ++k) xs[k] = (double(start + k) - double(j)) * dx;
        return std::pair{start, quad::fd_weights(0.0, xs, 1)[1]};
    };
    const auto wc = weights_at(2).second;
    for (std::size_t j = 0; j < n; ++j) {
        const bool edge = j < 2 || j + 2 >= n;
        const auto [start, w] = edge ? weights_at(j) : std::pair{j - 2, wc};
        double s = 0.0;
        for (std::size_t k = 0; k < kWidth; ++k) s += w[k] * f[start + k];
        out[j] = s;
    }
    return out;
}

NonlinearForcing nonlinear_forcing(const SolutionField& state, const IterationConfig& cfg) {
    const GridSpec& g = state.grid;
    check_state(state, g);
    const double T2 = 2.0 * cfg.lifespan(g);
    NonlinearForcing out{Field2D(g.nx, g.nt), Field2D(g.nx, g.nt)};
    std::vector<double> vv(g.nx), uv(g.nx);
    for (std::size_t n = 0; n < g.nt; ++n) {
        const double psi = time_localizer(g.t(n), T2);
        for (std::size_t j = 0; j < g.nx; ++j) {
            vv[j] = state.v(j, n) * state.v(j, n);
            uv[j] = state.u(j, n) * state.v(j, n);
        }
        const std::vector<double> d1 = ddx4(vv, g.dx()), d2 = ddx4(uv, g.dx());
        for (std::size_t j = 0; j < g.nx; ++j) {
            out.f1(j, n) = -cfg.coupling.u * psi * d1[j];
            out.f2(j, n) = -cfg.coupling.v * psi * d2[j];
        }
    }
    return out;
}

SolutionField iteration_map(const SolutionField& state, const MBParams& p, const ProblemData& data,
                            const IterationConfig& cfg) {
    const GridSpec& g = state.grid;
    cfg.validate(g);
    data.check_shape(g);
    NonlinearForcing nf = nonlinear_forcing(state, cfg);
    LinearProblem pu = LinearProblem::u_equation(p, g, data);
    LinearProblem pv = LinearProblem::v_equation(p, g, data);
    add_into(nf.f1, data.f1);
    add_into(nf.f2, data.f2);
    pu.forcing = std::move(nf.f1);
    pv.forcing = std::move(nf.f2);
    return solve_pair(pu, pv, cfg.utm, cfg.parallel);
}

SolutionField picard_solve(const MBParams& p, const GridSpec& grid, const ProblemData& data,
                           const IterationConfig& cfg) {
    p.validate();
    grid.validate();
    data.check_shape(grid);
    cfg.validate(grid);

    // linear part with all data, then forced zero-data corrections
    const SolutionField base = solve_pair(LinearProblem::u_equation(p, grid, data),
                                          LinearProblem::v_equation(p, grid, data), cfg.utm, cfg.parallel);
    ProblemData hom = ProblemData::zeros(grid);
    LinearProblem hu = LinearProblem::u_equation(p, grid, hom);
    LinearProblem hv = LinearProblem::v_equation(p, grid, hom);

    SolutionField x = base;
    std::vector<double> diffs, rel_diffs, ratios;
    bool converged = false;
    int streak = 0;
    int iters = 0;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        iters = k;
        NonlinearForcing nf = nonlinear_forcing(x, cfg);
        hu.forcing = std::move(nf.f1);
        hv.forcing = std::move(nf.f2);
        SolutionField next = solve_pair(hu, hv, cfg.utm, cfg.parallel);
        add_into(next.u, base.u);
        add_into(next.v, base.v);
        next.grid = grid;

        const double d = stacked_diff(next, x);
        const double scale = stacked_norm(next.u, next.v);
        const double rel = scale > 0.0 ? d / scale : d;
        if (!diffs.empty() && diffs.back() > 0.0) {
            ratios.push_back(d / diffs.back());
            streak = ratios.back() >= 1.0 ? streak + 1 : 0;
        }
        diffs.push_back(d);
        rel_diffs.push_back(rel);
        x = std::move(next);
        if (!std::isfinite(d)) fail(ErrorKind::NonFiniteIntegrand, "picard", "iterate became non-finite");
        if (rel <= cfg.tol) {
            converged = true;
            break;
        }
        if (streak >= 3) {
            const double hint =
                suggest_lifespan(data, grid, p.boundary, cfg.indices.s, cfg.c0, cfg.indices.beta());
            nlohmann::json diag = {{"iteration", k},
                                   {"contraction_ratios", ratios},
                                   {"T_star", cfg.lifespan(grid)},
                                   {"suggested_T_star", hint}};
            fail(ErrorKind::NoContraction, "T_star",
                 "iteration map is not contracting; try a smaller T_star: " + diag.dump());
        }
    }
    x.meta = nlohmann::json::object();
    x.meta["solver"] = "picard";
    x.meta["iterations"] = iters;
    x.meta["converged"] = converged;
    x.meta["differences"] = diffs;
    x.meta["relative_differences"] = rel_diffs;
    x.meta["contraction_ratios"] = ratios;
    x.meta["T_star"] = cfg.lifespan(grid);
    x.meta["tol"] = cfg.tol;
    x.meta["linear_u"] = base.meta["u"];
    x.meta["linear_v"] = base.meta["v"];
    return x;
}

double suggest_lifespan(const ProblemData& data, const GridSpec& grid, BoundaryKind kind, double s, double c0,
                        double beta) {
    if (!(c0 > 0.0)) fail(ErrorKind::InvariantViolation, "c0", "c0 must be positive");
    if (!(beta > 0.0)) fail(ErrorKind::InvariantViolation, "beta", "beta must be positive");
    const double sb = kind == BoundaryKind::Dirichlet ? (s + 1.0) / 3.0 : s / 3.0;
    auto bnorm = [&](const std::vector<double>& b) {
        if (b.empty()) return 0.0;
        return sobolev_norm(b, grid.T / double(std::max<std::size_t>(b.size() - 1, 1)), sb);
    };
    const double bracket = 1.0 + sobolev_norm(data.u0, grid.dx(), s) + sobolev_norm(data.v0, grid.dx(), s) +
                           bnorm(data.bdry_u) + bnorm(data.bdry_v);
    return c0 * std::pow(bracket, -4.0 / beta);
}

ConservedSeries conserved_quantities(const SolutionField& sol, double alpha) {
    const GridSpec& g = sol.grid;
    check_state(sol, g);
    ConservedSeries c;
    const double dx = g.dx();
    std::vector<double> e(g.nx), h(g.nx);
    for (std::size_t n = 0; n < g.nt; ++n) {
        const auto u = sol.u.slice(n), v = sol.v.slice(n);
        const std::vector<double> ux = ddx4(u, dx), vx = ddx4(v, dx);
        for (std::size_t j = 0; j < g.nx; ++j) {
            e[j] = u[j] * u[j] + v[j] * v[j];
            h[j] = ux[j] * ux[j] + alpha * vx[j] * vx[j] - u[j] * v[j] * v[j];
        }
        c.t.push_back(g.t(n));
        c.mass_u.push_back(quad::simpson(u, dx));
        c.mass_v.push_back(quad::simpson(v, dx));
        c.E.push_back(quad::simpson(e, dx));
        c.H.push_back(quad::simpson(h, dx));
    }
    return c;
}

}  // namespace mb
