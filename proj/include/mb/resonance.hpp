#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace mb {

/// d_alpha(xi, xi1) = -xi^3 + alpha xi1^3 + alpha (xi - xi1)^3, the u-equation resonance.
double d_alpha(double xi, double xi1, double alpha);

/// The v-equation analogue -alpha xi^3 + xi1^3 + alpha (xi - xi1)^3.
double d_tilde_alpha(double xi, double xi1, double alpha);

/// Largest of the three modulations |tau - xi^3|, |tau1 - alpha xi1^3|,
/// |tau - tau1 - alpha (xi - xi1)^3|; always at least |d_alpha| / 3.
double max_modulation(double xi, double tau, double xi1, double tau1, double alpha);

/// Sharp Sobolev threshold. `inclusive == false` encodes the "+" of -3/4+:
/// admissible indices satisfy s > value instead of s >= value.
struct CriticalExponent {
    double value = 0.0;
    bool inclusive = true;

    bool admits(double s) const { return inclusive ? s >= value : s > value; }
};

CriticalExponent critical_exponent(double alpha);

/// delta(alpha) = min{sqrt(alpha)/|1 - alpha|, 1/1000} / 10 (1/10000 at alpha = 1).
double resonance_delta(double alpha);

/// Roots, critical points and inflection point of d_alpha, per unit xi or xi1.
struct ResonanceGeometry {
    double alpha = 1.0;
    std::complex<double> r1, r2;  // zeros of d_alpha in xi1 / xi
    bool real_roots = true;       // false for alpha > 4
    std::optional<double> p1, p2; // zeros of d/dxi in xi / xi1 (alpha != 1)
    std::optional<double> q;      // zero of d^2/dxi^2 in xi / xi1 (alpha != 1)
    double delta = 0.0;

    /// Throws AlphaOne when the critical points are undefined.
    double require_p1() const;
    double require_p2() const;
    double require_q() const;
};

/// Builds the geometry and verifies the derivative identities at the stated points.
ResonanceGeometry geometry(double alpha);

/// One row of the alpha sweep table.
struct ResonanceRow {
    double alpha;
    CriticalExponent sc;
    ResonanceGeometry geom;
};

std::vector<ResonanceRow> resonance_sweep(double alpha_min, double alpha_max, std::size_t steps);

}  // namespace mb
