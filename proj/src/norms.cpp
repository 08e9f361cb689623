#include "mb/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fftw3.h>

#include "mb/error.hpp"
#include "mb/quadrature.hpp"

namespace mb {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Forward DFT (exp(-i...)) of time-major data, in place.
std::vector<cplx> dft2(const SpaceTimeSample& w) {
    std::vector<cplx> buf = w.values;
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(w.nt), static_cast<int>(w.nx), data, data, FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return buf;
}

double pow_weight(double base, double e) { return e == 0.0 ? 1.0 : std::pow(base, e); }

}  // namespace

double dft_frequency(std::size_t k, std::size_t n, double h) {
    const auto kk = static_cast<long long>(k);
    const auto nn = static_cast<long long>(n);
    const long long s = kk <= nn / 2 ? kk : kk - nn;
    return kTwoPi * static_cast<double>(s) / (static_cast<double>(n) * h);
}

SpaceTimeSample SpaceTimeSample::from_field(const Field2D& f, double dx, double dt) {
    SpaceTimeSample w;
    w.nx = f.nx();
    w.nt = f.nt();
    w.dx = dx;
    w.dt = dt;
    w.values.assign(f.raw().begin(), f.raw().end());
    w.update_compatibility();
    return w;
}

void SpaceTimeSample::validate() const {
    if (nx == 0 || nt == 0 || values.size() != nx * nt)
        fail(ErrorKind::InvariantViolation, "values", "sample size must be nx * nt");
    if (!(dx > 0.0)) fail(ErrorKind::InvariantViolation, "dx", "must be positive");
    if (!(dt > 0.0)) fail(ErrorKind::InvariantViolation, "dt", "must be positive");
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            fail(ErrorKind::InvariantViolation, "values", "non-finite sample");
}

void SpaceTimeSample::update_compatibility() {
    double peak = 0.0, edge = 0.0;
    for (const auto& v : values) peak = std::max(peak, std::abs(v));
    for (std::size_t n = 0; n < nt; ++n) edge = std::max({edge, std::abs(at(0, n)), std::abs(at(nx - 1, n))});
    for (std::size_t j = 0; j < nx; ++j) edge = std::max({edge, std::abs(at(j, 0)), std::abs(at(j, nt - 1))});
    periodic_compatible = edge <= 1e-10 * peak;
}

SpaceTimeSample canonical_extension(const Field2D& f, double dx, double dt, double L_ext) {
    const std::size_t nx = f.nx(), nt = f.nt();
    if (nx < 8 || nt < 2) fail(ErrorKind::InvariantViolation, "field", "need at least 8 x 2 samples");
    const double L = dx * static_cast<double>(nx - 1);
    if (!(L_ext > 0.0) || L_ext > L) fail(ErrorKind::ParameterOutOfRange, "L_ext", "must lie in (0, L]");
    if (nt < 17) fail(ErrorKind::InvariantViolation, "field", "need at least 17 time samples");
    const auto mx = static_cast<std::size_t>(std::llround(L_ext / dx));
    const double T = dt * static_cast<double>(nt - 1);
    const auto mt = std::min<std::size_t>(nt - 1, std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(T / 8.0 / dt))));
    const double fade_t = dt * static_cast<double>(mt);
    const double fade_x = std::min(L_ext, std::max(L_ext / 4.0, 64.0 * dx));

    SpaceTimeSample w;
    w.nx = mx + nx;
    w.nt = nt + 2 * mt;
    w.dx = dx;
    w.dt = dt;
    w.x0 = -dx * static_cast<double>(mx);
    w.t0 = -fade_t;
    w.values.assign(w.nx * w.nt, cplx(0.0));

    std::vector<double> row(w.nx);
    for (std::size_t n = 0; n < nt; ++n) {
        const auto s = f.slice(n);
        for (std::size_t j = 0; j < nx; ++j) row[mx + j] = s[j];
        for (std::size_t i = 1; i <= mx; ++i) {
            const double p = static_cast<double>(i);
            const double x = dx * p;
            const double fade = 1.0 - smooth_step(x / fade_x);
            const double v = 6.0 * s[i] - 32.0 * quad::interpolate<double>(s, p / 2.0) +
                             27.0 * quad::interpolate<double>(s, p / 3.0);
            row[mx - i] = fade * v;
        }
        for (std::size_t j = 0; j < w.nx; ++j) w.at(j, mt + n) = row[j];
    }
    // C^2 reflection across t = 0 and t = T, faded out over the margin.
    std::vector<cplx> col(nt);
    for (std::size_t j = 0; j < w.nx; ++j) {
        for (std::size_t n = 0; n < nt; ++n) col[n] = w.at(j, mt + n);
        for (std::size_t m = 1; m <= mt; ++m) {
            const double fade = smooth_step((fade_t - dt * static_cast<double>(m)) / fade_t);
            const double p = static_cast<double>(m);
            const double last = static_cast<double>(nt - 1);
            auto reflect = [&](double base, double dir) {
                return 6.0 * quad::interpolate<cplx>(col, base + dir * p) -
                       32.0 * quad::interpolate<cplx>(col, base + dir * p / 2.0) +
                       27.0 * quad::interpolate<cplx>(col, base + dir * p / 3.0);
            };
            w.at(j, mt - m) = fade * reflect(0.0, 1.0);
            w.at(j, mt + nt - 1 + m) = fade * reflect(last, -1.0);
        }
    }
    w.update_compatibility();
    w.meta["extension"] = "c2_reflection_with_taper";
    w.meta["L_ext"] = L_ext;
    w.meta["time_margin"] = fade_t;
    w.meta["bound"] = "upper bound on the restriction norm";
    const double tail = spectral_tail_ratio(w);
    w.meta["spectral_tail_ratio"] = tail;
    if (tail > 1e-6) w.meta["warnings"].push_back("spectral tail above 1e-6 of the peak");
    return w;
}

double sobolev_norm(std::span<const cplx> f, double dx, double s) {
    const std::size_t n = f.size();
    if (n == 0) return 0.0;
    std::vector<cplx> buf(f.begin(), f.end());
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = dft_frequency(k, n, dx);
        acc += pow_weight(1.0 + xi * xi, s) * std::norm(buf[k]);
    }
    return std::sqrt(acc * dx / static_cast<double>(n));
}

double sobolev_norm(std::span<const double> f, double dx, double s) {
    std::vector<cplx> c(f.begin(), f.end());
    return sobolev_norm(std::span<const cplx>(c), dx, s);
}

double weighted_spacetime_norm(const SpaceTimeSample& w, const std::function<double(double, double)>& weight) {
    w.validate();
    const auto F = dft2(w);
    std::vector<double> xis(w.nx);
    for (std::size_t j = 0; j < w.nx; ++j) xis[j] = dft_frequency(j, w.nx, w.dx);
    double acc = 0.0;
    for (std::size_t n = 0; n < w.nt; ++n) {
        const double tau = dft_frequency(n, w.nt, w.dt);
        double row = 0.0;
        for (std::size_t j = 0; j < w.nx; ++j) row += weight(xis[j], tau) * std::norm(F[n * w.nx + j]);
        acc += row;
    }
    const double scale = w.dx * w.dt / (static_cast<double>(w.nx) * static_cast<double>(w.nt));
    return std::sqrt(acc * scale);
}

double bourgain_norm(const SpaceTimeSample& w, double s, double b, double alpha) {
    return weighted_spacetime_norm(w, [&](double xi, double tau) {
        return pow_weight(1.0 + std::abs(xi), 2.0 * s) * pow_weight(1.0 + std::abs(tau - alpha * xi * xi * xi), 2.0 * b);
    });
}

double low_frequency_norm(const SpaceTimeSample& w, double theta) {
    return weighted_spacetime_norm(
        w, [&](double xi, double tau) { return std::abs(xi) < 1.0 ? pow_weight(1.0 + std::abs(tau), 2.0 * theta) : 0.0; });
}

double modified_bourgain_norm(const SpaceTimeSample& w, double s, double b, double theta, double alpha) {
    return weighted_spacetime_norm(w, [&](double xi, double tau) {
        double wt = pow_weight(1.0 + std::abs(xi), 2.0 * s) * pow_weight(1.0 + std::abs(tau - alpha * xi * xi * xi), 2.0 * b);
        if (std::abs(xi) < 1.0) wt += pow_weight(1.0 + std::abs(tau), 2.0 * theta);
        return wt;
    });
}

double temporal_norm(const SpaceTimeSample& w, double s, double b, double alpha) {
    return weighted_spacetime_norm(w, [&](double xi, double tau) {
        return pow_weight(1.0 + std::abs(tau), 2.0 * s / 3.0) *
               pow_weight(1.0 + std::abs(tau - alpha * xi * xi * xi), 2.0 * b);
    });
}

double spectral_tail_ratio(const SpaceTimeSample& w) {
    w.validate();
    const auto F = dft2(w);
    double peak = 0.0, tail = 0.0;
    const std::size_t cx = w.nx / 10, ct = w.nt / 10;
    for (std::size_t n = 0; n < w.nt; ++n) {
        const std::size_t dn = std::min(n, w.nt - n);
        for (std::size_t j = 0; j < w.nx; ++j) {
            const std::size_t dj = std::min(j, w.nx - j);
            const double a = std::abs(F[n * w.nx + j]);
            peak = std::max(peak, a);
            if (dj + cx >= w.nx / 2 || dn + ct >= w.nt / 2) tail = std::max(tail, a);
        }
    }
    return peak > 0.0 ? tail / peak : 0.0;
}

}  // namespace mb
