#include "mb/oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "mb/error.hpp"
#include "mb/quadrature.hpp"

namespace mb {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

constexpr std::size_t kD3Width = 7;
constexpr std::size_t kD1Width = 5;

// Fornberg weights for derivative m at node j on a window of `width` nodes,
// clamped to [0, n).
struct Row {
    std::size_t start = 0;
    std::vector<double> w;
};

Row stencil_row(std::size_t j, std::size_t n, std::size_t width, int m, double dx) {
    const std::size_t half = width / 2;
    std::size_t start = j >= half ? j - half : 0;
    start = std::min(start, n - width);
    std::vector<double> xs(width);
    for (std::size_t k = 0; k < width; ++k) xs[k] = (double(start + k) - double(j)) * dx;
    Row r;
    r.start = start;
    r.w = quad::fd_weights(0.0, xs, m)[static_cast<std::size_t>(m)];
    return r;
}

// Linear part of one equation on the fine grid.
class LinearStepper {
public:
    LinearStepper(double alpha, double gamma, BoundaryKind kind, std::size_t n, double dx, double L, double dt,
                  const StencilScheme& scheme)
        : n_(n), dt_(dt) {
        std::vector<Eigen::Triplet<double>> a;
        const double sponge_start = L * (1.0 - scheme.sponge_fraction);
        for (std::size_t j = 1; j + 2 < n; ++j) {
            const Row r = stencil_row(j, n, kD3Width, 3, dx);
            for (std::size_t k = 0; k < r.w.size(); ++k) a.emplace_back(int(j), int(r.start + k), alpha * r.w[k]);
            const double x = dx * double(j);
            const double sigma = scheme.sponge_strength * smooth_step((x - sponge_start) / (L - sponge_start));
            if (sigma > 0.0) a.emplace_back(int(j), int(j), sigma);
        }
        A_.resize(int(n), int(n));
        A_.setFromTriplets(a.begin(), a.end());

        // constraint rows: boundary condition at 0, v = 0 and v_x = 0 at L
        std::vector<Eigen::Triplet<double>> m;
        for (int k = 0; k < A_.outerSize(); ++k)
            for (SpMat::InnerIterator it(A_, k); it; ++it) m.emplace_back(int(it.row()), int(it.col()), 0.5 * dt * it.value());
        for (std::size_t j = 1; j + 2 < n; ++j) m.emplace_back(int(j), int(j), 1.0);
        if (kind == BoundaryKind::Dirichlet) {
            m.emplace_back(0, 0, 1.0);
        } else {
            const Row r = stencil_row(0, n, kD1Width, 1, dx);
            for (std::size_t k = 0; k < r.w.size(); ++k) m.emplace_back(0, int(r.start + k), r.w[k]);
            m.emplace_back(0, 0, gamma);
        }
        // row n-2 enforces v_x(L) = 0 with the one-sided stencil at x = L
        const Row re = stencil_row(n - 1, n, kD1Width, 1, dx);
        for (std::size_t k = 0; k < re.w.size(); ++k) m.emplace_back(int(n - 2), int(re.start + k), re.w[k]);
        m.emplace_back(int(n - 1), int(n - 1), 1.0);
        SpMat lhs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        lhs.setFromTriplets(m.begin(), m.end());
        lhs.makeCompressed();
        lu_.compute(lhs);
        if (lu_.info() != Eigen::Success)
            fail(ErrorKind::SingularOperator, "closure", "implicit operator could not be factorized: " + lu_.lastErrorMessage());
    }

    /// One step: v <- v^{n+1} given the averaged source (forcing and explicit terms)
    /// and the boundary value at the new time.
    void step(Vec& v, const Vec& source, double bc_new) {
        Vec rhs = v - 0.5 * dt_ * (A_ * v) + dt_ * source;
        rhs[0] = bc_new;
        rhs[int(n_) - 2] = 0.0;
        rhs[int(n_) - 1] = 0.0;
        v = lu_.solve(rhs);
        if (lu_.info() != Eigen::Success) fail(ErrorKind::SingularOperator, "closure", "back-substitution failed");
    }

private:
    std::size_t n_;
    double dt_;
    SpMat A_;
    Eigen::SparseLU<SpMat> lu_;
};

// 4th-order first derivative, centred in the interior
SpMat d1_matrix(std::size_t n, double dx) {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t j = 0; j < n; ++j) {
        const Row r = stencil_row(j, n, kD1Width, 1, dx);
        for (std::size_t k = 0; k < r.w.size(); ++k) t.emplace_back(int(j), int(r.start + k), r.w[k]);
    }
    SpMat d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    d.setFromTriplets(t.begin(), t.end());
    return d;
}

// Resampling from the problem grid to the fine grid and to internal times.
struct Resampler {
    std::size_t refine;
    std::size_t n_fine;

    Vec space(std::span<const double> coarse) const {
        Vec out(static_cast<Eigen::Index>(n_fine));
        for (std::size_t j = 0; j < n_fine; ++j)
            out[int(j)] = quad::interpolate<double>(coarse, double(j) / double(refine));
        return out;
    }
};

struct TimeSeries {
    std::vector<double> samples;
    double span = 0.0;
    double at(double t) const {
        if (samples.size() == 1) return samples[0];
        const double p = t / span * double(samples.size() - 1);
        return quad::interpolate<double>(samples, std::min(p, double(samples.size() - 1)));
    }
};

// forcing on the fine grid at grid times, interpolated in time on demand
struct FineForcing {
    std::vector<Vec> slices;  // one per grid time, empty when there is no forcing
    double dt = 0.0;

    Vec at(double t, std::size_t n) const {
        if (slices.empty()) return Vec::Zero(int(n));
        const quad::Stencil st = quad::lagrange8(t / dt, slices.size());
        Vec out = Vec::Zero(int(n));
        for (int k = 0; k < 8; ++k) out += st.w[k] * slices[st.start + k];
        return out;
    }
};

FineForcing fine_forcing(const Field2D& f, const GridSpec& grid, const Resampler& rs) {
    FineForcing ff;
    ff.dt = grid.dt();
    if (f.nx() == 0 || f.max_abs() == 0.0) return ff;
    for (std::size_t k = 0; k < grid.nt; ++k) ff.slices.push_back(rs.space(f.slice(k)));
    return ff;
}

struct Setup {
    std::size_t n;
    double dx;
    std::size_t substeps;
    double dt;
};

Setup make_setup(const GridSpec& grid, const StencilScheme& scheme, double alpha_max) {
    Setup s;
    s.n = (grid.nx - 1) * scheme.refine + 1;
    s.dx = grid.L / double(s.n - 1);
    const double dt_max = scheme.dt_ratio * s.dx * s.dx * s.dx / alpha_max;
    s.substeps = std::max<std::size_t>(1, std::size_t(std::ceil(grid.dt() / dt_max - 1e-12)));
    s.dt = grid.dt() / double(s.substeps);
    if (s.n < 2 * kD3Width)
        fail(ErrorKind::SingularOperator, "nx", "grid too coarse for the boundary closure stencils");
    return s;
}

TimeSeries boundary_series(const LinearProblem& lp) {
    return TimeSeries{lp.boundary, lp.span()};
}

}  // namespace

void StencilScheme::validate() const {
    if (order != 4) fail(ErrorKind::ParameterOutOfRange, "order", "only fourth-order stencils are implemented");
    if (!(dt_ratio > 0.0)) fail(ErrorKind::InvariantViolation, "dt_ratio", "dt_ratio must be positive");
    if (refine == 0) fail(ErrorKind::InvariantViolation, "refine", "refine must be at least 1");
    if (!(sponge_fraction > 0.0 && sponge_fraction < 0.5))
        fail(ErrorKind::InvariantViolation, "sponge_fraction", "sponge must cover (0, 1/2) of the domain");
    if (!(sponge_strength >= 0.0)) fail(ErrorKind::InvariantViolation, "sponge_strength", "must be non-negative");
}

double d3_monomial_defect(const StencilScheme& scheme) {
    scheme.validate();
    const Row r = stencil_row(3, 7, kD3Width, 3, 1.0);
    double worst = 0.0;
    for (int k = 0; k <= scheme.order + 2; ++k) {
        double approx = 0.0;
        for (std::size_t i = 0; i < r.w.size(); ++i) approx += r.w[i] * std::pow(double(i) - 3.0, k);
        const double exact = k == 3 ? 6.0 : 0.0;  // d^3/dx^3 x^k at 0
        worst = std::max(worst, std::abs(approx - exact));
    }
    return worst;
}

FieldSlice oracle_linear(const LinearProblem& p, const StencilScheme& scheme) {
    p.validate();
    scheme.validate();
    const GridSpec& g = p.grid;
    const Setup su = make_setup(g, scheme, p.alpha);
    const Resampler rs{scheme.refine, su.n};
    const TimeSeries bc = boundary_series(p);
    const FineForcing ff = fine_forcing(p.forcing, g, rs);

    LinearStepper stepper(p.alpha, p.gamma, p.kind, su.n, su.dx, g.L, su.dt, scheme);
    Vec v = rs.space(p.initial);

    FieldSlice out;
    out.grid = g;
    out.values = Field2D(g.nx, g.nt);
    auto record = [&](std::size_t k) {
        for (std::size_t j = 0; j < g.nx; ++j) out.values(j, k) = v[int(j * scheme.refine)];
    };
    record(0);
    Vec f_old = ff.at(0.0, su.n);
    for (std::size_t k = 1; k < g.nt; ++k) {
        for (std::size_t m = 1; m <= su.substeps; ++m) {
            const double t_new = g.t(k - 1) + double(m) * su.dt;
            const Vec f_new = ff.at(t_new, su.n);
            stepper.step(v, 0.5 * (f_old + f_new), bc.at(t_new));
            f_old = f_new;
        }
        record(k);
    }
    if (!out.values.all_finite()) fail(ErrorKind::NonFiniteIntegrand, "oracle_linear", "non-finite state");
    out.meta["solver"] = "oracle_linear";
    out.meta["fine_nx"] = su.n;
    out.meta["substeps"] = su.substeps;
    out.meta["dt_internal"] = su.dt;
    return out;
}

SolutionField oracle_mb(const MBParams& p, const GridSpec& grid, const ProblemData& data, const StencilScheme& scheme,
                        CouplingConstants coupling) {
    p.validate();
    grid.validate();
    data.check_shape(grid);
    scheme.validate();
    const LinearProblem pu = LinearProblem::u_equation(p, grid, data);
    const LinearProblem pv = LinearProblem::v_equation(p, grid, data);
    const Setup su = make_setup(grid, scheme, std::max(1.0, p.alpha));
    const Resampler rs{scheme.refine, su.n};
    const TimeSeries bu = boundary_series(pu), bv = boundary_series(pv);
    const FineForcing f1 = fine_forcing(data.f1, grid, rs), f2 = fine_forcing(data.f2, grid, rs);
    LinearStepper su_u(1.0, pu.gamma, pu.kind, su.n, su.dx, grid.L, su.dt, scheme);
    LinearStepper su_v(p.alpha, pv.gamma, pv.kind, su.n, su.dx, grid.L, su.dt, scheme);
    const SpMat D1 = d1_matrix(su.n, su.dx);

    Vec u = rs.space(data.u0), v = rs.space(data.v0);
    const double scale0 = std::max({u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff(), 1e-300});
    auto flux_u = [&](const Vec&, const Vec& vv) -> Vec { return -coupling.u * (D1 * vv.cwiseProduct(vv)); };
    auto flux_v = [&](const Vec& uu, const Vec& vv) -> Vec { return -coupling.v * (D1 * uu.cwiseProduct(vv)); };

    SolutionField out;
    out.grid = grid;
    out.u = Field2D(grid.nx, grid.nt);
    out.v = Field2D(grid.nx, grid.nt);
    auto record = [&](std::size_t k) {
        for (std::size_t j = 0; j < grid.nx; ++j) {
            out.u(j, k) = u[int(j * scheme.refine)];
            out.v(j, k) = v[int(j * scheme.refine)];
        }
    };
    record(0);
    Vec nu_old = flux_u(u, v), nv_old = flux_v(u, v);
    Vec g1_old = f1.at(0.0, su.n), g2_old = f2.at(0.0, su.n);
    bool first = true;
    double peak = scale0;
    for (std::size_t k = 1; k < grid.nt; ++k) {
        for (std::size_t m = 1; m <= su.substeps; ++m) {
            const double t_new = grid.t(k - 1) + double(m) * su.dt;
            const Vec nu = flux_u(u, v), nv = flux_v(u, v);
            // AB2 (forward Euler on the first step)
            const Vec eu = first ? nu : Vec(1.5 * nu - 0.5 * nu_old);
            const Vec ev = first ? nv : Vec(1.5 * nv - 0.5 * nv_old);
            first = false;
            nu_old = nu;
            nv_old = nv;
            const Vec g1 = f1.at(t_new, su.n), g2 = f2.at(t_new, su.n);
            su_u.step(u, 0.5 * (g1_old + g1) + eu, bu.at(t_new));
            su_v.step(v, 0.5 * (g2_old + g2) + ev, bv.at(t_new));
            g1_old = g1;
            g2_old = g2;
            const double now = std::max(u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff());
            if (!std::isfinite(now) || now > 1e3 * scale0) {
                nlohmann::json diag = {{"t", t_new}, {"max_abs", now}, {"initial_max_abs", scale0}};
                fail(ErrorKind::StepRejected, "oracle_mb", "solution grew beyond 1e3 times its initial size: " + diag.dump());
            }
            peak = std::max(peak, now);
        }
        record(k);
    }
    out.meta["solver"] = "oracle_mb";
    out.meta["fine_nx"] = su.n;
    out.meta["substeps"] = su.substeps;
    out.meta["dt_internal"] = su.dt;
    out.meta["peak_abs"] = peak;
    out.meta["coupling_u"] = coupling.u;
    out.meta["coupling_v"] = coupling.v;
    return out;
}

}  // namespace mb
