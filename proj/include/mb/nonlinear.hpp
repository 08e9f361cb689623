#pragma once

#include <span>
#include <vector>

#include "mb/core.hpp"
#include "mb/oracle.hpp"
#include "mb/utm_linear.hpp"

namespace mb {

struct IterationConfig {
    double T_star = 0.0;  // 0 means grid.T
    int max_iters = 25;
    double tol = 1e-8;
    double c0 = 0.1;
    CouplingConstants coupling;
    SobolevIndices indices;  // for the lifespan hint
    UtmOptions utm;
    bool parallel = true;  // solve the two equations concurrently

    double lifespan(const GridSpec& grid) const { return T_star > 0.0 ? T_star : grid.T; }
    void validate(const GridSpec& grid) const;
};

/// Fourth-order first derivative: centred in the interior, one-sided near both ends.
std::vector<double> ddx4(std::span<const double> f, double dx);

struct NonlinearForcing {
    Field2D f1, f2;
};

/// f1 = -c_u psi_{2T*}(t) (v^2)_x and f2 = -c_v psi_{2T*}(t) (uv)_x on the state's grid.
NonlinearForcing nonlinear_forcing(const SolutionField& state, const IterationConfig& cfg);

/// (Phi, Psi): linear solves with the data of `data` plus the nonlinear forcing of `state`.
SolutionField iteration_map(const SolutionField& state, const MBParams& p, const ProblemData& data,
                            const IterationConfig& cfg);

/// Fixed point of iteration_map, started from the zero-forcing linear solves.
/// meta: iterations, differences, relative_differences, contraction_ratios, converged.
SolutionField picard_solve(const MBParams& p, const GridSpec& grid, const ProblemData& data,
                           const IterationConfig& cfg);

/// c0 [1 + |u0|_{H^s} + |v0|_{H^s} + |bdry_u| + |bdry_v|]^{-4/beta}. Boundary data is
/// measured in H^{(s+1)/3}(0,T) for Dirichlet and H^{s/3}(0,T) otherwise.
double suggest_lifespan(const ProblemData& data, const GridSpec& grid, BoundaryKind kind, double s, double c0,
                        double beta);

struct ConservedSeries {
    std::vector<double> t, mass_u, mass_v, E, H;
};

/// Integrals of u, v, u^2 + v^2 and u_x^2 + alpha v_x^2 - u v^2 at every grid time.
ConservedSeries conserved_quantities(const SolutionField& sol, double alpha);

}  // namespace mb
