#include "mb/utm_linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mb/error.hpp"
#include "mb/quadrature.hpp"
#include "mb/transforms.hpp"

namespace mb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx I(0.0, 1.0);

}  // namespace

LinearProblem LinearProblem::u_equation(const MBParams& p, const GridSpec& g, const ProblemData& d) {
    LinearProblem lp;
    lp.alpha = 1.0;
    lp.gamma = p.boundary == BoundaryKind::Dirichlet ? 0.0 : p.gamma1;
    lp.kind = p.boundary;
    lp.grid = g;
    lp.initial = d.u0;
    lp.boundary = d.bdry_u;
    lp.forcing = d.f1;
    return lp;
}

LinearProblem LinearProblem::v_equation(const MBParams& p, const GridSpec& g, const ProblemData& d) {
    LinearProblem lp;
    lp.alpha = p.alpha;
    lp.gamma = p.boundary == BoundaryKind::Dirichlet ? 0.0 : p.gamma2;
    lp.kind = p.boundary;
    lp.grid = g;
    lp.initial = d.v0;
    lp.boundary = d.bdry_v;
    lp.forcing = d.f2;
    return lp;
}

void LinearProblem::validate() const {
    grid.validate();
    if (!(alpha > 0.0)) fail(ErrorKind::InvariantViolation, "alpha", "alpha must be positive");
    if (kind == BoundaryKind::Neumann && gamma != 0.0)
        fail(ErrorKind::InvariantViolation, "gamma", "Neumann boundary requires gamma = 0");
    if (initial.size() != grid.nx) fail(ErrorKind::InvariantViolation, "initial", "needs nx samples");
    if (boundary.size() < 8) fail(ErrorKind::InvariantViolation, "boundary", "needs at least 8 samples");
    if (boundary_span == 0.0 && boundary.size() != grid.nt)
        fail(ErrorKind::InvariantViolation, "boundary", "needs nt samples on [0, T]");
    if (boundary_span != 0.0 && boundary_span < grid.T)
        fail(ErrorKind::InvariantViolation, "boundary_span", "boundary samples must cover [0, T]");
    if (forcing.nx() != 0 && (forcing.nx() != grid.nx || forcing.nt() != grid.nt))
        fail(ErrorKind::InvariantViolation, "forcing", "forcing must be nx x nt");
}

UtmSolver::UtmSolver(LinearProblem p, UtmOptions opt) : p_(std::move(p)), opt_(opt) {
    p_.validate();
    build();
}

void UtmSolver::build() {
    const GridSpec& g = p_.grid;
    const double alpha = p_.alpha;
    const double gamma = p_.gamma;
    const bool dirichlet = p_.kind == BoundaryKind::Dirichlet;
    const double Tb = p_.span();
    const double Tphase = std::max(g.T, Tb);
    const std::size_t nt = g.nt;

    auto rate = [&](double r) { return 3.0 * alpha * r * r * Tphase + 2.0 * g.L; };
    quad_ = build_contour(g.R, g.nq, dirichlet ? 0.0 : gamma, rate, opt_.phase_budget);
    if (!dirichlet && gamma > 0.0) {
        const double first_panel = quad_.nodes.size() >= 8 ? quad_.nodes[7] + quad_.nodes[0] : g.R;
        if (0.5 * gamma < 0.25 * first_panel)
            fail(ErrorKind::PoleOnContour, "gamma",
                 "pole i*gamma is closer to the rays than the quadrature resolves");
    }
    const std::size_t K = quad_.nodes.size();

    // Transform arguments: P = r (real), Q = exp(-i pi/3) r.
    const cplx rot = std::polar(1.0, -std::numbers::pi / 3.0);
    std::vector<cplx> args(2 * K);
    for (std::size_t k = 0; k < K; ++k) {
        args[k] = quad_.nodes[k];
        args[K + k] = rot * quad_.nodes[k];
    }
    std::vector<cplx> u0hat(2 * K);
    {
        const auto W0 = std::all_of(p_.initial.begin(), p_.initial.end(), [](double v) { return v == 0.0; });
        for (std::size_t k = 0; k < 2 * K; ++k)
            u0hat[k] = W0 ? cplx(0.0) : half_line_ft(p_.initial, g.L, args[k]);
    }
    Eigen::MatrixXcd Ftab = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(2 * K), static_cast<Eigen::Index>(nt));
    if (p_.has_forcing()) Ftab = forcing_transform_table(p_.forcing, g.dx(), g.dt(), args, alpha);

    // Boundary transform on the right ray: xi^3 = -r^3.
    const bool span_matches = std::abs(Tb - g.T) < 1e-12 * g.T && p_.boundary.size() == nt;
    std::vector<cplx> bT(K);
    Eigen::MatrixXcd bt;  // running transform, right ray
    const bool zero_boundary =
        std::all_of(p_.boundary.begin(), p_.boundary.end(), [](double v) { return v == 0.0; });
    if (span_matches) bt = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(nt));
    for (std::size_t k = 0; k < K; ++k) {
        const double r = quad_.nodes[k];
        if (zero_boundary) continue;
        if (span_matches) {
            const auto cum = time_transform_cumulative(p_.boundary, cplx(-r * r * r), alpha, Tb);
            for (std::size_t n = 0; n < nt; ++n) bt(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = cum[n];
            bT[k] = cum.back();
        } else {
            bT[k] = time_transform(p_.boundary, cplx(-r * r * r), alpha, Tb);
        }
    }
    if (!opt_.boundary_final_time && !span_matches)
        fail(ErrorKind::InvariantViolation, "boundary_final_time",
             "the running boundary transform needs boundary samples on the output time grid");

    const cplx a = ContourConstants::a();
    const cplx a2 = a * a;
    const cplx sigma = ContourConstants::sigma();
    const cplx sigma2 = sigma * sigma;

    freq_.resize(4 * K);
    coef_.resize(static_cast<Eigen::Index>(4 * K), static_cast<Eigen::Index>(nt));
    double tail = 0.0, peak = 0.0;
    double tvariant = 0.0;
    const std::size_t last_panel = K >= 8 ? K - 8 : 0;
    std::vector<cplx> tdiff(nt, cplx(0.0));

    for (std::size_t k = 0; k < K; ++k) {
        const double r = quad_.nodes[k];
        const double w = quad_.weights[k] / kTwoPi;
        const cplx xiR = a * r, xiL = a2 * r;
        freq_[k] = r;
        freq_[K + k] = -r;
        freq_[2 * K + k] = xiR;
        freq_[3 * K + k] = xiL;
        const cplx uP = u0hat[k], uQ = u0hat[K + k];
        const cplx FPT = Ftab(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(nt - 1));
        const cplx FQT = Ftab(static_cast<Eigen::Index>(K + k), static_cast<Eigen::Index>(nt - 1));
        for (std::size_t n = 0; n < nt; ++n) {
            const double t = g.t(n);
            const cplx FP = Ftab(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
            const cplx FQ = Ftab(static_cast<Eigen::Index>(K + k), static_cast<Eigen::Index>(n));
            // Real line, xi = +r and xi = -r.
            const cplx osc = std::exp(I * (alpha * r * r * r * t));
            const cplx line = w * osc * (uP + FP);
            coef_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = line;
            coef_(static_cast<Eigen::Index>(K + k), static_cast<Eigen::Index>(n)) = std::conj(line);

            // Sector rays: xi^3 = -r^3 on the right ray, +r^3 on the left ray.
            const cplx oscR = std::conj(osc), oscL = osc;
            const cplx FPs = dirichlet ? FP : FPT;
            const cplx FQs = dirichlet ? FQ : FQT;
            const cplx R_sig = std::conj(uP + FPs), R_sig2 = uQ + FQs;  // right ray: A(sigma xi), A(sigma^2 xi)
            const cplx L_sig = std::conj(uQ + FQs), L_sig2 = uP + FPs;  // left ray
            const cplx hR = opt_.boundary_final_time ? bT[k] : bt(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
            const cplx hL = std::conj(hR);
            cplx KR, KL;
            if (dirichlet) {
                KR = sigma * R_sig + sigma2 * R_sig2 - 3.0 * alpha * xiR * xiR * hR;
                KL = sigma * L_sig + sigma2 * L_sig2 - 3.0 * alpha * xiL * xiL * hL;
            } else {
                const cplx ig(0.0, gamma);
                auto robin = [&](cplx xi, cplx As, cplx As2, cplx h) {
                    const cplx data = ((xi + (sigma + 1.0) * ig) * As - (xi * (sigma + 1.0) + ig) * As2) /
                                      (sigma * (xi - ig));
                    return data + 3.0 * I * alpha * xi * xi / (xi - ig) * h;
                };
                KR = robin(xiR, R_sig, R_sig2, hR);
                KL = robin(xiL, L_sig, L_sig2, hL);
            }
            const cplx cR = w * oscR * KR * a;
            const cplx cL = -w * oscL * KL * a2;
            coef_(static_cast<Eigen::Index>(2 * K + k), static_cast<Eigen::Index>(n)) = cR;
            coef_(static_cast<Eigen::Index>(3 * K + k), static_cast<Eigen::Index>(n)) = cL;

            const double mag = std::max({std::abs(line), std::abs(cR), std::abs(cL)}) / std::max(quad_.weights[k], 1e-300);
            peak = std::max(peak, mag);
            if (k >= last_panel) tail = std::max(tail, mag);

            if (span_matches) {
                // Boundary contribution at x = 0 with the transform at T minus the one at t.
                const cplx dR = bT[k] - bt(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
                const cplx dL = std::conj(dR);
                cplx bR, bL;
                if (dirichlet) {
                    bR = -3.0 * alpha * xiR * xiR * dR;
                    bL = -3.0 * alpha * xiL * xiL * dL;
                } else {
                    const cplx ig(0.0, gamma);
                    bR = 3.0 * I * alpha * xiR * xiR / (xiR - ig) * dR;
                    bL = 3.0 * I * alpha * xiL * xiL / (xiL - ig) * dL;
                }
                tdiff[n] += w * (oscR * bR * a - oscL * bL * a2);
            }
        }
    }
    if (!coef_.allFinite()) fail(ErrorKind::NonFiniteIntegrand, "coefficients", "non-finite quadrature coefficient");
    for (const auto& d : tdiff) tvariant = std::max(tvariant, std::abs(d));

    if (!dirichlet && gamma > 0.0) {
        const cplx z2 = I * sigma2 * gamma, z1 = I * sigma * gamma;
        residue_.data_at_sigma2 = half_line_ft(p_.initial, g.L, z2);
        residue_.data_at_sigma = half_line_ft(p_.initial, g.L, z1);
        if (p_.has_forcing()) {
            const cplx zs[2] = {z2, z1};
            const auto Fz = forcing_transform_table(p_.forcing, g.dx(), g.dt(), zs, alpha);
            residue_.forcing_at_sigma2 = Fz(0, static_cast<Eigen::Index>(nt - 1));
            residue_.forcing_at_sigma = Fz(1, static_cast<Eigen::Index>(nt - 1));
        }
        residue_.boundary = time_transform(p_.boundary, cplx(0.0, -gamma * gamma * gamma), alpha, Tb);
    }

    meta_["solver"] = "utm";
    meta_["boundary_kind"] = std::string(to_string(p_.kind));
    meta_["alpha"] = alpha;
    meta_["gamma"] = gamma;
    meta_["R"] = g.R;
    meta_["nodes_per_ray"] = K;
    meta_["phase_budget"] = opt_.phase_budget;
    meta_["residue_active"] = quad_.residue_active();
    meta_["tail_ratio"] = peak > 0.0 ? tail / peak : 0.0;
    meta_["boundary_time_variant_gap"] = tvariant;
    meta_["boundary_transform_time"] = opt_.boundary_final_time ? "final" : "running";
    double mismatch = 0.0;
    if (dirichlet) {
        mismatch = std::abs(p_.initial[0] - p_.boundary[0]);
    } else {
        const double dx = g.dx();
        const auto& f = p_.initial;
        const double d1 = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * dx);
        mismatch = std::abs(d1 + gamma * f[0] - p_.boundary[0]);
    }
    meta_["compatibility_mismatch"] = mismatch;
    if (mismatch > opt_.compatibility_tol)
        meta_["warnings"].push_back(std::string(to_string(ErrorKind::CompatibilityViolation)) +
                                    ": corner mismatch " + std::to_string(mismatch));
}

Eigen::MatrixXd UtmSolver::evaluate(std::span<const double> xs) const {
    for (double x : xs)
        if (x < 0.0)
            fail(ErrorKind::DivergentIntegrand, "x", "sector exponentials grow for x < 0");
    const auto nx = static_cast<Eigen::Index>(xs.size());
    const auto nf = static_cast<Eigen::Index>(freq_.size());
    Eigen::MatrixXcd E(nx, nf);
    for (Eigen::Index c = 0; c < nf; ++c) {
        const cplx f = freq_[static_cast<std::size_t>(c)];
        for (Eigen::Index j = 0; j < nx; ++j) E(j, c) = std::exp(I * f * xs[static_cast<std::size_t>(j)]);
    }
    Eigen::MatrixXcd U = E * coef_;
    if (quad_.residue_active()) {
        for (Eigen::Index j = 0; j < nx; ++j)
            for (Eigen::Index n = 0; n < U.cols(); ++n)
                U(j, n) += residue_term(p_.gamma, p_.alpha, residue_, xs[static_cast<std::size_t>(j)],
                                        p_.grid.t(static_cast<std::size_t>(n)));
    }
    if (!U.allFinite()) fail(ErrorKind::NonFiniteIntegrand, "field", "non-finite solution value");
    return U.real();
}

FieldSlice UtmSolver::solve() const {
    const auto xs = p_.grid.xs();
    const auto nx = static_cast<Eigen::Index>(xs.size());
    const auto nf = static_cast<Eigen::Index>(freq_.size());
    Eigen::MatrixXcd E(nx, nf);
    for (Eigen::Index c = 0; c < nf; ++c) {
        const cplx step = std::exp(I * freq_[static_cast<std::size_t>(c)] * p_.grid.dx());
        cplx z(1.0);
        for (Eigen::Index j = 0; j < nx; ++j) {
            E(j, c) = (j % 32 == 0) ? std::exp(I * freq_[static_cast<std::size_t>(c)] * xs[static_cast<std::size_t>(j)]) : z;
            z = E(j, c) * step;
        }
    }
    Eigen::MatrixXcd U = E * coef_;
    if (quad_.residue_active()) {
        for (Eigen::Index j = 0; j < nx; ++j)
            for (Eigen::Index n = 0; n < U.cols(); ++n)
                U(j, n) += residue_term(p_.gamma, p_.alpha, residue_, xs[static_cast<std::size_t>(j)],
                                        p_.grid.t(static_cast<std::size_t>(n)));
    }
    if (!U.allFinite()) fail(ErrorKind::NonFiniteIntegrand, "field", "non-finite solution value");
    FieldSlice out;
    out.grid = p_.grid;
    out.values = Field2D(p_.grid.nx, p_.grid.nt);
    double vmax = 0.0, imax = 0.0;
    for (Eigen::Index n = 0; n < U.cols(); ++n)
        for (Eigen::Index j = 0; j < nx; ++j) {
            out.values(static_cast<std::size_t>(j), static_cast<std::size_t>(n)) = U(j, n).real();
            vmax = std::max(vmax, std::abs(U(j, n).real()));
            imax = std::max(imax, std::abs(U(j, n).imag()));
        }
    out.meta = meta_;
    out.meta["imag_residue"] = imax;
    out.meta["imag_residue_relative"] = vmax > 0.0 ? imax / vmax : 0.0;
    if (vmax > 0.0 && imax > 1e-6 * vmax)
        out.meta["warnings"].push_back("imaginary residue exceeds 1e-6 of the peak");
    return out;
}

std::vector<double> UtmSolver::trace(int derivative) const {
    const double h = opt_.trace_step;
    const int npts = derivative == 0 ? 1 : derivative + 4;
    std::vector<double> xs(static_cast<std::size_t>(npts));
    for (int k = 0; k < npts; ++k) xs[static_cast<std::size_t>(k)] = h * k;
    const Eigen::MatrixXd V = evaluate(xs);
    std::vector<double> out(p_.grid.nt, 0.0);
    if (derivative == 0) {
        for (std::size_t n = 0; n < out.size(); ++n) out[n] = V(0, static_cast<Eigen::Index>(n));
        return out;
    }
    const auto w = quad::fd_weights(0.0, xs, derivative)[static_cast<std::size_t>(derivative)];
    for (std::size_t n = 0; n < out.size(); ++n) {
        double acc = 0.0;
        for (int k = 0; k < npts; ++k) acc += w[static_cast<std::size_t>(k)] * V(k, static_cast<Eigen::Index>(n));
        out[n] = acc;
    }
    return out;
}

FieldSlice solve_dirichlet(const LinearProblem& p, const UtmOptions& opt) {
    if (p.kind != BoundaryKind::Dirichlet)
        fail(ErrorKind::InvariantViolation, "boundary_kind", "solve_dirichlet needs Dirichlet data");
    return UtmSolver(p, opt).solve();
}

FieldSlice solve_robin(const LinearProblem& p, const UtmOptions& opt) {
    if (p.kind == BoundaryKind::Dirichlet)
        fail(ErrorKind::InvariantViolation, "boundary_kind", "solve_robin needs Robin or Neumann data");
    return UtmSolver(p, opt).solve();
}

FieldSlice solve_neumann(const LinearProblem& p, const UtmOptions& opt) {
    if (p.gamma != 0.0) fail(ErrorKind::InvariantViolation, "gamma", "solve_neumann needs gamma = 0");
    LinearProblem q = p;
    if (q.kind == BoundaryKind::Dirichlet)
        fail(ErrorKind::InvariantViolation, "boundary_kind", "solve_neumann needs Neumann data");
    q.kind = BoundaryKind::Neumann;
    return UtmSolver(q, opt).solve();
}

FieldSlice solve_linear(const LinearProblem& p, const UtmOptions& opt) { return UtmSolver(p, opt).solve(); }

double boundary_residual(const UtmSolver& solver, const LinearProblem& p) {
    std::vector<double> lhs = solver.trace(0);
    if (p.kind != BoundaryKind::Dirichlet) {
        const auto d1 = solver.trace(1);
        for (std::size_t n = 0; n < lhs.size(); ++n) lhs[n] = d1[n] + p.gamma * lhs[n];
    }
    std::vector<double> target(lhs.size());
    for (std::size_t n = 0; n < lhs.size(); ++n)
        target[n] = quad::interpolate<double>(p.boundary, p.grid.t(n) / (p.span() / static_cast<double>(p.boundary.size() - 1)));
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < lhs.size(); ++n) {
        num += (lhs[n] - target[n]) * (lhs[n] - target[n]);
        den += target[n] * target[n];
    }
    if (den == 0.0) {
        // No boundary data: scale by the size of the individual trace terms.
        const auto v0 = solver.trace(0);
        double s0 = 0.0, s1 = 0.0;
        std::vector<double> d1;
        if (p.kind != BoundaryKind::Dirichlet) d1 = solver.trace(1);
        for (std::size_t n = 0; n < v0.size(); ++n) {
            s0 += v0[n] * v0[n];
            if (!d1.empty()) s1 += d1[n] * d1[n];
        }
        const double scale = std::sqrt(s1) + std::abs(p.gamma) * std::sqrt(s0);
        return scale > 0.0 ? std::sqrt(num) / scale : std::sqrt(num);
    }
    return std::sqrt(num / den);
}

double global_relation_residual(const FieldSlice& sol, const LinearProblem& p,
                                std::span<const cplx> xi_probes, double t) {
    const GridSpec& g = sol.grid;
    const double dt = g.dt(), dx = g.dx();
    const auto m = static_cast<std::size_t>(std::llround(t / dt));
    if (m >= g.nt || std::abs(g.t(m) - t) > 1e-9 * std::max(1.0, t))
        fail(ErrorKind::InvariantViolation, "t", "time must be a grid time");
    if (m < 7) fail(ErrorKind::InvariantViolation, "t", "need at least 8 time samples up to t");
    const std::size_t nm = m + 1;
    std::vector<double> tr0(nm), tr1(nm), tr2(nm);
    std::vector<double> xs5 = {0, 1, 2, 3, 4}, xs6 = {0, 1, 2, 3, 4, 5};
    const auto w1 = quad::fd_weights(0.0, xs5, 1)[1];
    const auto w2 = quad::fd_weights(0.0, xs6, 2)[2];
    for (std::size_t n = 0; n < nm; ++n) {
        const auto s = sol.values.slice(n);
        tr0[n] = s[0];
        double a1 = 0.0, a2 = 0.0;
        for (int k = 0; k < 5; ++k) a1 += w1[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k)];
        for (int k = 0; k < 6; ++k) a2 += w2[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k)];
        tr1[n] = a1 / dx;
        tr2[n] = a2 / (dx * dx);
    }
    Field2D fcut;
    if (p.has_forcing()) {
        fcut = Field2D(g.nx, nm);
        for (std::size_t n = 0; n < nm; ++n)
            for (std::size_t j = 0; j < g.nx; ++j) fcut(j, n) = p.forcing(j, n);
    }
    const auto snap = sol.values.slice(m);
    double worst = 0.0;
    for (cplx xi : xi_probes) {
        const cplx xi3 = xi * xi * xi;
        const cplx lhs = std::exp(-I * p.alpha * xi3 * t) * half_line_ft(snap, g.L, xi);
        const cplx g0 = time_transform(tr0, xi3, p.alpha, t);
        const cplx g1 = time_transform(tr1, xi3, p.alpha, t);
        const cplx g2 = time_transform(tr2, xi3, p.alpha, t);
        cplx rhs = half_line_ft(p.initial, g.L, xi) + p.alpha * (g2 + I * xi * g1 - xi * xi * g0);
        if (p.has_forcing()) rhs += forcing_transform(fcut, g.L, t, xi, p.alpha);
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
    return worst;
}

}  // namespace mb
