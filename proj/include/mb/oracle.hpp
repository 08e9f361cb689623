#pragma once

#include "mb/core.hpp"
#include "mb/utm_linear.hpp"

namespace mb {

/// Finite-difference reference discretization.
struct StencilScheme {
    int order = 4;                 // spatial accuracy of the derivative stencils
    double dt_ratio = 1.0;         // internal step <= dt_ratio * dx^3 / alpha
    std::size_t refine = 1;        // fine grid has (nx-1)*refine + 1 nodes
    double sponge_fraction = 0.125;
    double sponge_strength = 40.0; // peak damping rate at x = L

    void validate() const;
};

/// Interior D3 weights for offsets -3..3 and the largest monomial error they
/// leave on x^k, k <= order + 2, at a unit-spaced interior node.
double d3_monomial_defect(const StencilScheme& scheme);

struct CouplingConstants {
    double u = 0.5;  // u_t + u_xxx + u * (v^2)_x = f1
    double v = 1.0;  // v_t + alpha v_xxx + v * (uv)_x = f2
};

/// Crank-Nicolson in time, 7-point fourth-order D3 in space (off-centred near
/// the ends), one boundary row at x = 0, v = v_x = 0 at x = L and a sponge layer.
FieldSlice oracle_linear(const LinearProblem& p, const StencilScheme& scheme = {});

/// Same linear part for both equations, nonlinear fluxes by second-order
/// Adams-Bashforth on fourth-order centred differences of v^2 and uv.
SolutionField oracle_mb(const MBParams& p, const GridSpec& grid, const ProblemData& data,
                        const StencilScheme& scheme = {}, CouplingConstants coupling = {});

}  // namespace mb
