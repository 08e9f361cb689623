#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "mb/profiles.hpp"
#include "mb/transforms.hpp"

using namespace mb;
using cd = std::complex<double>;

namespace {

std::vector<double> samples(const std::string& desc, double L, std::size_t n) {
    return Profile::parse(desc).sample(L / (n - 1), n);
}

}  // namespace

TEST_CASE("half-line transform of exp(-x)") {
    const auto f = samples("exp_decay(rate=1)", 40.0, 801);
    CHECK(std::abs(half_line_ft(f, 40.0, cd(0.0)) - 1.0) < 1e-8);
    CHECK(std::abs(half_line_ft(f, 40.0, cd(0.0, -0.5)) - 2.0 / 3.0) < 1e-8);
    const auto p = Profile::parse("exp_decay(rate=1)");
    for (cd xi : {cd(2.0), cd(-5.0, -1.0), cd(7.5, -0.2)})
        CHECK(std::abs(half_line_ft(f, 40.0, xi) - *p.half_line_ft_exact(xi)) < 1e-8);
}

TEST_CASE("zero data transforms to exactly zero") {
    std::vector<double> f(64, 0.0);
    CHECK(half_line_ft(f, 10.0, cd(3.0, -1.0)) == cd(0.0));
    CHECK(time_transform(f, cd(2.0), 1.0, 0.2) == cd(0.0));
    Field2D F(64, 16);
    CHECK(forcing_transform(F, 10.0, 0.2, cd(1.0), 2.0) == cd(0.0));
}

TEST_CASE("gaussian far from the origin matches its full-line transform") {
    const auto f = samples("gaussian(center=20, width=2)", 40.0, 801);
    const auto p = Profile::parse("gaussian(center=20, width=2)");
    for (double k : {0.0, 0.7, -2.3, 4.0}) CHECK(std::abs(half_line_ft(f, 40.0, cd(k)) - *p.half_line_ft_exact(cd(k))) < 1e-9);
}

TEST_CASE("time transform closed forms") {
    const double T = 0.3;
    std::vector<double> one(61, 1.0);
    CHECK(std::abs(time_transform(one, cd(0.0), 2.5, T) - T) < 1e-12);
    for (double tau : {1.0, 37.0, -250.0}) {
        const cd exact = (1.0 - std::exp(cd(0, -tau * T))) / cd(0, tau);
        CHECK(std::abs(time_transform(one, cd(tau), 1.0, T) - exact) < 1e-8);
    }
}

TEST_CASE("compactly supported boundary data: transform equals the whole-line one") {
    // h(t) = sin(pi t / 2)^4 on (0, 2), smooth and compactly supported.
    const std::size_t n = 401;
    std::vector<double> h(n);
    for (std::size_t j = 0; j < n; ++j) h[j] = std::pow(std::sin(std::numbers::pi * (2.0 * j / (n - 1)) / 2.0), 4);
    const double alpha = 1.5, tau = 3.0;
    const cd got = time_transform(h, cd(tau), alpha, 2.0);
    // Independent dense trapezoid quadrature on [0, 2] (spectrally accurate for periodic smooth data).
    cd ref(0.0);
    const std::size_t m = 20000;
    for (std::size_t j = 0; j < m; ++j) {
        const double t = 2.0 * j / m;
        ref += std::exp(cd(0, -alpha * tau * t)) * std::pow(std::sin(std::numbers::pi * t / 2.0), 4);
    }
    ref *= 2.0 / m;
    CHECK(std::abs(got - ref) < 1e-8);
}

TEST_CASE("forcing transform of separable data") {
    const double L = 40.0, t = 0.2;
    const std::size_t nx = 801, nt = 41;
    Field2D F(nx, nt);
    for (std::size_t n = 0; n < nt; ++n)
        for (std::size_t j = 0; j < nx; ++j) F(j, n) = std::exp(-L * j / (nx - 1));
    CHECK(std::abs(forcing_transform(F, L, t, cd(0.0), 3.0) - t) < 1e-8);

    const auto gx = samples("gaussian(center=10, width=1.5)", L, nx);
    const auto st = samples("sine_pulse(center=0.1, width=0.04, freq=60)", t, nt);
    for (std::size_t n = 0; n < nt; ++n)
        for (std::size_t j = 0; j < nx; ++j) F(j, n) = gx[j] * st[n];
    const double alpha = 2.0;
    for (cd xi : {cd(1.3), cd(-0.4, -0.3), cd(2.0, -1.0)}) {
        const cd expected = half_line_ft(gx, L, xi) * time_transform(st, xi * xi * xi, alpha, t);
        CHECK(std::abs(forcing_transform(F, L, t, xi, alpha) - expected) < 1e-8);
    }
}

TEST_CASE("linearity and conjugate symmetry") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N(0.0, 1.0);
    const std::size_t n = 257;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> f(n), g(n), mix(n);
        const double a = N(rng), b = N(rng);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = 10.0 * j / (n - 1);
            f[j] = N(rng) * std::exp(-x);
            g[j] = std::sin(N(rng) * x) * std::exp(-0.5 * x);
            mix[j] = a * f[j] + b * g[j];
        }
        const cd xi(N(rng), -std::abs(N(rng)));
        const cd lhs = half_line_ft(mix, 10.0, xi);
        const cd rhs = a * half_line_ft(f, 10.0, xi) + b * half_line_ft(g, 10.0, xi);
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1 + std::abs(lhs)));
        const double k = N(rng) * 3;
        CHECK(std::abs(half_line_ft(f, 10.0, cd(-k)) - std::conj(half_line_ft(f, 10.0, cd(k)))) < 1e-13);
    }
}

TEST_CASE("refinement convergence on a smooth profile") {
    auto err = [](std::size_t n) {
        const auto f = samples("gaussian(center=6, width=1.2)", 12.0, n);
        const auto p = Profile::parse("gaussian(center=6, width=1.2)");
        (void)p;
        // Reference from a much finer sampling.
        const auto fine = samples("gaussian(center=6, width=1.2)", 12.0, 4097);
        return std::abs(half_line_ft(f, 12.0, cd(2.5)) - half_line_ft(fine, 12.0, cd(2.5)));
    };
    const double e1 = err(65), e2 = err(129);
    CHECK(e2 <= e1 / 64.0 + 1e-13);
}

TEST_CASE("overflow guard") {
    std::vector<double> f(100, 1.0);
    CHECK_THROWS(half_line_ft(f, 100.0, cd(0.0, 10.0)));
}
