#include <cmath>

#include "mb/error.hpp"
#include "mb/quadrature.hpp"
#include "mb/utm_linear.hpp"
#include "mb/whole_line.hpp"

namespace mb {

namespace {

struct Extension {
    LineGrid line;
    std::size_t offset = 0;  // line index of x = 0
};

Extension make_extension(const GridSpec& g) {
    Extension e;
    const std::size_t left = g.nx - 1;
    const std::size_t right = (g.nx - 1) / 2;
    e.offset = left;
    e.line.dx = g.dx();
    e.line.n = left + g.nx + right;
    e.line.x0 = -g.dx() * static_cast<double>(left);
    return e;
}

// C^2 reflection 6 f(x) - 32 f(x/2) + 27 f(x/3), tapered to zero away from the origin.
std::vector<double> extend(std::span<const double> f, const GridSpec& g, const Extension& e) {
    std::vector<double> out(e.line.n, 0.0);
    for (std::size_t j = 0; j < g.nx; ++j) out[e.offset + j] = f[j];
    const double width = g.L / 8.0;
    for (std::size_t i = 1; i <= e.offset; ++i) {
        const double x = g.dx() * static_cast<double>(i);
        const double taper = 1.0 - smooth_step(x / width);
        if (taper == 0.0) break;
        const double p = static_cast<double>(i);
        const double v = 6.0 * f[i] - 32.0 * quad::interpolate<double>(f, p / 2.0) +
                         27.0 * quad::interpolate<double>(f, p / 3.0);
        out[e.offset - i] = taper * v;
    }
    return out;
}

}  // namespace

FieldSlice solve_forced_by_superposition(const LinearProblem& p, const UtmOptions& opt) {
    p.validate();
    if (p.boundary_span != 0.0)
        fail(ErrorKind::InvariantViolation, "boundary_span", "superposition expects boundary samples on [0, T]");
    const GridSpec& g = p.grid;
    const Extension ext = make_extension(g);
    const double dt = g.dt();
    const std::size_t pad = std::max<std::size_t>(8, (g.nt - 1) / 2);
    const std::size_t nt_ext = g.nt + pad;
    const double T_ext = dt * static_cast<double>(nt_ext - 1);
    const bool dirichlet = p.kind == BoundaryKind::Dirichlet;

    // Whole-line homogeneous part.
    const auto V0 = extend(p.initial, g, ext);
    const Field2D V = solve_ivp_homogeneous_series(V0, ext.line, p.alpha, dt, nt_ext);

    // Whole-line Duhamel part.
    Field2D W(ext.line.n, nt_ext);
    if (p.has_forcing()) {
        Field2D w(ext.line.n, g.nt);
        for (std::size_t n = 0; n < g.nt; ++n) {
            const auto e = extend(p.forcing.slice(n), g, ext);
            std::copy(e.begin(), e.end(), w.slice(n).begin());
        }
        W = solve_ivp_forced(w, ext.line, dt, p.alpha, nt_ext);
    }

    auto trace = [&](const Field2D& F, std::size_t n) {
        const double value = F(ext.offset, n);
        if (dirichlet) return value;
        return spectral_derivative(F.slice(n), ext.line, ext.offset) + p.gamma * value;
    };

    // Corrected boundary data on [0, T_ext]: held constant past T, then cut off smoothly.
    std::vector<double> phi(nt_ext), W0(nt_ext);
    for (std::size_t n = 0; n < nt_ext; ++n) {
        const double t = dt * static_cast<double>(n);
        const double cut = n < g.nt ? 1.0 : 1.0 - smooth_step((t - g.T) / (T_ext - g.T));
        const double data = p.boundary[std::min(n, g.nt - 1)];
        phi[n] = cut * (data - trace(V, n));
        W0[n] = p.has_forcing() ? -cut * trace(W, n) : 0.0;
    }

    auto pure = [&](const std::vector<double>& bd) {
        LinearProblem q;
        q.alpha = p.alpha;
        q.gamma = p.gamma;
        q.kind = p.kind;
        q.grid = g;
        q.initial.assign(g.nx, 0.0);
        q.boundary = bd;
        q.boundary_span = T_ext;
        return q;
    };
    const LinearProblem q_phi = pure(phi);
    const UtmSolver s_phi(q_phi, opt);
    const FieldSlice part_phi = s_phi.solve();

    FieldSlice out;
    out.grid = g;
    out.values = Field2D(g.nx, g.nt);
    for (std::size_t n = 0; n < g.nt; ++n) {
        const double psi = time_localizer(g.t(n), 1.0);
        for (std::size_t j = 0; j < g.nx; ++j)
            out.values(j, n) = psi * (V(ext.offset + j, n) + W(ext.offset + j, n)) + part_phi.values(j, n);
    }
    out.meta["solver"] = "superposition";
    out.meta["extension_points"] = ext.line.n;
    out.meta["boundary_extension_time"] = T_ext;
    out.meta["homogeneous_boundary_problem"] = part_phi.meta;
    out.meta["homogeneous_boundary_problem"]["trace_residual"] = boundary_residual(s_phi, q_phi);

    if (p.has_forcing()) {
        const LinearProblem q_w = pure(W0);
        const UtmSolver s_w(q_w, opt);
        const FieldSlice part_w = s_w.solve();
        for (std::size_t n = 0; n < g.nt; ++n)
            for (std::size_t j = 0; j < g.nx; ++j) out.values(j, n) += part_w.values(j, n);
        out.meta["forced_boundary_problem"] = part_w.meta;
        out.meta["forced_boundary_problem"]["trace_residual"] = boundary_residual(s_w, q_w);
    }
    if (!out.values.all_finite()) fail(ErrorKind::NonFiniteIntegrand, "field", "non-finite superposition value");
    return out;
}

}  // namespace mb
