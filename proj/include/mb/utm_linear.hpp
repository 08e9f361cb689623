#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "mb/contour.hpp"
#include "mb/core.hpp"

namespace mb {

/// One forced linear half-line problem  v_t + alpha v_xxx = f  with a boundary
/// condition at x = 0. The u-equation of the system is the alpha = 1 instance.
struct LinearProblem {
    double alpha = 1.0;
    double gamma = 0.0;
    BoundaryKind kind = BoundaryKind::Dirichlet;
    GridSpec grid;
    std::vector<double> initial;   // nx samples on [0, L]
    std::vector<double> boundary;  // uniform samples on [0, boundary_span]
    double boundary_span = 0.0;    // 0 means grid.T
    Field2D forcing;               // nx x nt, or empty for zero forcing

    static LinearProblem u_equation(const MBParams& p, const GridSpec& g, const ProblemData& d);
    static LinearProblem v_equation(const MBParams& p, const GridSpec& g, const ProblemData& d);

    double span() const { return boundary_span > 0.0 ? boundary_span : grid.T; }
    bool has_forcing() const { return forcing.nx() > 0 && forcing.max_abs() > 0.0; }
    void validate() const;
};

struct UtmOptions {
    double phase_budget = 3.0;         // radians per order-8 panel
    bool boundary_final_time = true;   // boundary transform at T (true) or at t
    double trace_step = 0.02;          // spacing of the one-sided trace stencils
    double compatibility_tol = 1e-6;
};

/// Single field on the problem grid with diagnostics.
struct FieldSlice {
    GridSpec grid;
    Field2D values;
    nlohmann::json meta = nlohmann::json::object();
};

/// Transform cache and quadrature for one problem; evaluates the solution formula
/// at arbitrary x >= 0 for every grid time.
class UtmSolver {
public:
    explicit UtmSolver(LinearProblem p, UtmOptions opt = {});

    /// Rows: xs, columns: grid times.
    Eigen::MatrixXd evaluate(std::span<const double> xs) const;
    FieldSlice solve() const;

    /// d^j v / dx^j (0, t_n) by one-sided differences of the evaluated field.
    std::vector<double> trace(int derivative) const;

    const ContourQuadrature& contour() const { return quad_; }
    const nlohmann::json& diagnostics() const { return meta_; }

private:
    void build();

    LinearProblem p_;
    UtmOptions opt_;
    ContourQuadrature quad_;
    // Columns of the assembled sum: frequency and per-time coefficient.
    std::vector<cplx> freq_;
    Eigen::MatrixXcd coef_;  // freq x time
    ResidueTransforms residue_;
    nlohmann::json meta_;
};

FieldSlice solve_dirichlet(const LinearProblem& p, const UtmOptions& opt = {});
FieldSlice solve_robin(const LinearProblem& p, const UtmOptions& opt = {});
FieldSlice solve_neumann(const LinearProblem& p, const UtmOptions& opt = {});
FieldSlice solve_linear(const LinearProblem& p, const UtmOptions& opt = {});

/// Four-term representation: psi*V + S[0,phi;0] + psi*W + S[0,W0;0], with V the
/// whole-line evolution of an extension of the initial data, W the Duhamel
/// solution for an extension of the forcing, and pure boundary problems carrying
/// the corrected boundary data.
FieldSlice solve_forced_by_superposition(const LinearProblem& p, const UtmOptions& opt = {});

/// Boundary-condition residual of a computed slice, relative to the data scale:
/// Dirichlet v(0,t) - h(t), otherwise v_x(0,t) + gamma v(0,t) - phi(t).
double boundary_residual(const UtmSolver& solver, const LinearProblem& p);

/// max over probes of |LHS - RHS| / (1 + |RHS|) for the global relation at time t.
double global_relation_residual(const FieldSlice& sol, const LinearProblem& p,
                                std::span<const cplx> xi_probes, double t);

}  // namespace mb
