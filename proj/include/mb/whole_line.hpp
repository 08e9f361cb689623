#pragma once

#include <span>
#include <vector>

#include "mb/core.hpp"

namespace mb {

/// Uniform periodic grid x_i = x0 + i*dx, i < n, used for whole-line evolution.
struct LineGrid {
    double x0 = 0.0;
    double dx = 0.1;
    std::size_t n = 0;

    double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
    double period() const { return dx * static_cast<double>(n); }
    /// Angular frequency of DFT bin k (signed).
    double freq(std::size_t k) const;
};

/// Whole-line Airy evolution of V0 at time t via the discrete Fourier transform.
std::vector<double> solve_ivp_homogeneous(std::span<const double> V0, const LineGrid& g, double alpha, double t);

/// Same, at times n*dt for n < nt; columns of the result are time slices.
Field2D solve_ivp_homogeneous_series(std::span<const double> V0, const LineGrid& g, double alpha, double dt,
                                     std::size_t nt);

/// Duhamel solution W of W_t + alpha W_xxx = w, W(.,0) = 0, for forcing samples
/// w (g.n x nt at spacing dt). Output has nt_out >= nt time slices; beyond the
/// last forcing sample the solution evolves freely.
Field2D solve_ivp_forced(const Field2D& w, const LineGrid& g, double dt, double alpha, std::size_t nt_out = 0);

/// Spectral first derivative of periodic samples at index i.
double spectral_derivative(std::span<const double> f, const LineGrid& g, std::size_t i);

/// Throws AliasingDetected when the top tenth of the spectrum exceeds 1e-6 of its peak.
void check_spectral_tail(std::span<const double> f, const std::string& field);

}  // namespace mb
