#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "mb/core.hpp"

namespace mb {

/// Complex samples on a uniform space-time grid, stored time-major
/// (values[n * nx + j] at x0 + j dx, t0 + n dt).
struct SpaceTimeSample {
    std::size_t nx = 0, nt = 0;
    double dx = 1.0, dt = 1.0;
    double x0 = 0.0, t0 = 0.0;
    std::vector<std::complex<double>> values;
    /// Set when every edge of the box vanishes to 1e-10 of the peak, so the
    /// periodic extension used by the DFT is continuous.
    bool periodic_compatible = false;
    nlohmann::json meta = nlohmann::json::object();

    static SpaceTimeSample from_field(const Field2D& f, double dx, double dt);
    std::complex<double>& at(std::size_t j, std::size_t n) { return values[n * nx + j]; }
    std::complex<double> at(std::size_t j, std::size_t n) const { return values[n * nx + j]; }
    void validate() const;
    void update_compatibility();
};

/// Tapered extension of a field on [0, L] x [0, T] to [-L_ext, L] x [-margin, T + margin]:
/// C^2 reflections across x = 0 and across both time ends, faded out within the
/// first max(L_ext/4, 64 dx) past x = 0 and over a time margin of
/// max(T/8, 64 dt), capped at T. Its norms bound the restriction norms from
/// above; the spectral tail ratio is recorded in meta.
SpaceTimeSample canonical_extension(const Field2D& f, double dx, double dt, double L_ext);

/// (integral (1 + xi^2)^s |fhat|^2 dxi / (2 pi))^{1/2} over DFT bins.
double sobolev_norm(std::span<const double> f, double dx, double s);
double sobolev_norm(std::span<const std::complex<double>> f, double dx, double s);

/// Weighted Plancherel norm (sum_bins weight(xi, tau) |what|^2 dxi dtau / (2 pi)^2)^{1/2}.
double weighted_spacetime_norm(const SpaceTimeSample& w, const std::function<double(double, double)>& weight);

/// Weight (1 + |xi|)^{2s} (1 + |tau - alpha xi^3|)^{2b}.
double bourgain_norm(const SpaceTimeSample& w, double s, double b, double alpha);

/// Bourgain norm plus the low-frequency term with weight 1_{|xi|<1} (1 + |tau|)^{2 theta}.
double modified_bourgain_norm(const SpaceTimeSample& w, double s, double b, double theta, double alpha);

/// The low-frequency term alone.
double low_frequency_norm(const SpaceTimeSample& w, double theta);

/// Weight (1 + |tau|)^{2s/3} (1 + |tau - alpha xi^3|)^{2b}.
double temporal_norm(const SpaceTimeSample& w, double s, double b, double alpha);

/// Largest DFT amplitude in the outer tenth of either frequency axis, relative to the peak bin.
double spectral_tail_ratio(const SpaceTimeSample& w);

/// Signed angular frequency of DFT bin k of n samples at spacing h.
double dft_frequency(std::size_t k, std::size_t n, double h);

}  // namespace mb
