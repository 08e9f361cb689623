#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mb/core.hpp"

namespace mb {

using cplx = std::complex<double>;

enum class SpectralKind { HalfLineFT, TimeTransform, ForcingTransform };

/// Complex samples indexed by frequency.
struct SpectralField {
    std::vector<cplx> nodes;
    std::vector<cplx> values;
    SpectralKind kind = SpectralKind::HalfLineFT;
};

/// integral_0^L exp(-i x xi) f(x) dx for uniform samples f on [0, L].
cplx half_line_ft(std::span<const double> f, double L, cplx xi);
SpectralField half_line_ft(std::span<const double> f, double L, std::span<const cplx> xis);

/// integral_0^t_end exp(-i alpha xi_cubed t) g(t) dt for uniform samples g on [0, t_end].
cplx time_transform(std::span<const double> g, cplx xi_cubed, double alpha, double t_end);

/// Running time transform at every sample time of g.
std::vector<cplx> time_transform_cumulative(std::span<const double> g, cplx xi_cubed, double alpha,
                                            double t_end);

/// F(xi, t) = integral_0^t exp(-i alpha xi^3 tau) fhat(xi, tau) dtau for forcing
/// samples on [0, L] x [0, t] (the last time sample sits at t).
cplx forcing_transform(const Field2D& f, double L, double t, cplx xi, double alpha);

/// Rows: frequencies; columns: F(xi_k, t_n) at every time sample of f.
Eigen::MatrixXcd forcing_transform_table(const Field2D& f, double dx, double dt,
                                         std::span<const cplx> xis, double alpha);

/// Rows: frequencies; columns: fhat(xi_k, t_n) (spatial transform only).
Eigen::MatrixXcd spatial_transform_table(const Field2D& f, double dx, std::span<const cplx> xis);

}  // namespace mb
