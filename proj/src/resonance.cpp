#include "mb/resonance.hpp"

#include <algorithm>
#include <cmath>

#include "mb/error.hpp"

namespace mb {

double d_alpha(double xi, double xi1, double alpha) {
    const double e = xi - xi1;
    return -xi * xi * xi + alpha * xi1 * xi1 * xi1 + alpha * e * e * e;
}

double d_tilde_alpha(double xi, double xi1, double alpha) {
    const double e = xi - xi1;
    return -alpha * xi * xi * xi + xi1 * xi1 * xi1 + alpha * e * e * e;
}

double max_modulation(double xi, double tau, double xi1, double tau1, double alpha) {
    const double e = xi - xi1;
    return std::max({std::abs(tau - xi * xi * xi), std::abs(tau1 - alpha * xi1 * xi1 * xi1),
                     std::abs(tau - tau1 - alpha * e * e * e)});
}

CriticalExponent critical_exponent(double alpha) {
    if (!(alpha > 0.0)) fail(ErrorKind::ParameterOutOfRange, "alpha", "alpha must be positive");
    if (alpha == 4.0) return {0.75, true};
    if (alpha == 1.0 || alpha > 4.0) return {-0.75, false};
    return {0.0, true};
}

double resonance_delta(double alpha) {
    if (!(alpha > 0.0)) fail(ErrorKind::ParameterOutOfRange, "alpha", "alpha must be positive");
    if (alpha == 1.0) return 1e-4;
    return 0.1 * std::min(std::sqrt(alpha) / std::abs(1.0 - alpha), 1e-3);
}

namespace {

double require(const std::optional<double>& v, const char* name) {
    if (!v) fail(ErrorKind::AlphaOne, name, "undefined at alpha = 1");
    return *v;
}

void verify(double residual, double scale, const char* what) {
    if (std::abs(residual) > 1e-10 * std::max(1.0, scale))
        fail(ErrorKind::InvariantViolation, what, "derivative identity does not hold");
}

}  // namespace

double ResonanceGeometry::require_p1() const { return require(p1, "p1"); }
double ResonanceGeometry::require_p2() const { return require(p2, "p2"); }
double ResonanceGeometry::require_q() const { return require(q, "q"); }

ResonanceGeometry geometry(double alpha) {
    if (!(alpha > 0.0)) fail(ErrorKind::ParameterOutOfRange, "alpha", "alpha must be positive");
    ResonanceGeometry g;
    g.alpha = alpha;
    const std::complex<double> disc = std::sqrt(std::complex<double>(-3.0 + 12.0 / alpha, 0.0));
    g.r1 = 0.5 - disc / 6.0;
    g.r2 = 0.5 + disc / 6.0;
    g.real_roots = alpha <= 4.0;
    if (g.real_roots) {
        g.r1 = g.r1.real();
        g.r2 = g.r2.real();
    }
    g.delta = resonance_delta(alpha);
    if (alpha != 1.0) {
        const double sa = std::sqrt(alpha);
        g.p1 = sa / (sa - 1.0);
        g.p2 = sa / (sa + 1.0);
        g.q = alpha / (alpha - 1.0);
    }

    // Derivative identities at unit xi1 (and unit xi for the xi1-derivative).
    const double xi = 1.0;
    auto ddxi1 = [&](double x, double x1) { return 3.0 * alpha * x1 * x1 - 3.0 * alpha * (x - x1) * (x - x1); };
    verify(ddxi1(xi, 0.5 * xi), alpha, "xi1_critical_point");
    if (alpha != 1.0) {
        auto ddxi = [&](double x, double x1) { return -3.0 * x * x + 3.0 * alpha * (x - x1) * (x - x1); };
        auto d2dxi2 = [&](double x, double x1) { return -6.0 * x + 6.0 * alpha * (x - x1); };
        verify(ddxi(*g.p1 * xi, xi), std::abs(*g.p1) * std::abs(*g.p1) * alpha, "p1");
        verify(ddxi(*g.p2 * xi, xi), alpha, "p2");
        verify(d2dxi2(*g.q * xi, xi), std::abs(*g.q) * alpha, "q");
    }
    if (g.real_roots) {
        verify(d_alpha(1.0, g.r1.real(), alpha), alpha, "r1");
        verify(d_alpha(1.0, g.r2.real(), alpha), alpha, "r2");
    }
    return g;
}

std::vector<ResonanceRow> resonance_sweep(double alpha_min, double alpha_max, std::size_t steps) {
    if (!(alpha_min > 0.0)) fail(ErrorKind::ParameterOutOfRange, "alpha_min", "must be positive");
    if (!(alpha_max >= alpha_min)) fail(ErrorKind::ParameterOutOfRange, "alpha_max", "must be >= alpha_min");
    if (steps < 1) fail(ErrorKind::ParameterOutOfRange, "steps", "must be at least 1");
    std::vector<ResonanceRow> rows;
    rows.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double a = alpha_min + (alpha_max - alpha_min) * static_cast<double>(k) / static_cast<double>(steps);
        rows.push_back({a, critical_exponent(a), geometry(a)});
        if (alpha_max == alpha_min) break;
    }
    return rows;
}

}  // namespace mb
