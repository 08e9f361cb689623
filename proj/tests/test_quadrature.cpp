#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "mb/quadrature.hpp"

using namespace mb;
using cd = std::complex<double>;

TEST_CASE("order-8 rule integrates degree 15 exactly") {
    const double breaks[] = {0.0, 0.7, 2.0};
    const auto ns = quad::composite_gl8(breaks);
    double acc = 0.0;
    for (std::size_t k = 0; k < ns.nodes.size(); ++k) acc += ns.weights[k] * std::pow(ns.nodes[k], 15);
    CHECK(acc == doctest::Approx(std::pow(2.0, 16) / 16.0).epsilon(1e-13));
}

TEST_CASE("graded breaks respect the phase budget") {
    auto rate = [](double r) { return 3.0 * r * r + 5.0; };
    const auto b = quad::phase_graded_breaks(0.0, 10.0, rate, 2.0, 4);
    CHECK(b.front() == 0.0);
    CHECK(b.back() == 10.0);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) CHECK((b[i + 1] - b[i]) * rate(b[i + 1]) <= 2.0 + 1e-9);
    CHECK(b.size() >= 5);
}

TEST_CASE("Lagrange interpolation reproduces degree-7 polynomials") {
    std::vector<double> f(20);
    auto poly = [](double x) { return 1 - 2 * x + 0.3 * std::pow(x, 4) - 0.01 * std::pow(x, 7); };
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = poly(0.5 * j);
    for (double p : {0.0, 0.3, 2.7, 10.5, 18.2, 19.0}) {
        CHECK(quad::interpolate<double>(f, p) == doctest::Approx(poly(0.5 * p)).epsilon(1e-10));
    }
}

TEST_CASE("oscillatory weights against closed forms") {
    const std::size_t n = 201;
    const double h = 0.05;
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = std::exp(-h * j);
    const double Lend = h * (n - 1);
    for (cd om : {cd(0.0), cd(3.0), cd(-17.5), cd(40.0, -2.0), cd(2.0, 0.5)}) {
        const auto W = quad::oscillatory_weights(n, h, om);
        cd acc(0.0);
        for (std::size_t j = 0; j < n; ++j) acc += W[j] * f[j];
        const cd k = 1.0 + cd(0, 1) * om;
        const cd exact = (1.0 - std::exp(-k * Lend)) / k;
        CHECK(std::abs(acc - exact) < 1e-9);
    }
}

TEST_CASE("cumulative integral matches partial sums") {
    const std::size_t n = 50;
    const double h = 0.02;
    std::vector<cd> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = cd(std::cos(3 * h * j), std::sin(h * j));
    std::vector<cd> out(n);
    quad::cumulative_oscillatory(g, h, cd(25.0), out);
    const auto W = quad::oscillatory_weights(n, h, cd(25.0));
    cd acc(0.0);
    for (std::size_t j = 0; j < n; ++j) acc += W[j] * g[j];
    CHECK(std::abs(out.back() - acc) < 1e-13);
    CHECK(out[0] == cd(0.0));
}

TEST_CASE("growth guard") { CHECK_THROWS(quad::oscillatory_weights(100, 1.0, cd(0.0, 10.0))); }

TEST_CASE("finite-difference weights") {
    const std::vector<double> x = {0, 1, 2, 3, 4};
    const auto w = quad::fd_weights(0.0, x, 1);
    CHECK(w[1][0] == doctest::Approx(-25.0 / 12.0));
    CHECK(w[1][4] == doctest::Approx(-3.0 / 12.0));
    const std::vector<double> c = {-3, -2, -1, 0, 1, 2, 3};
    const auto w3 = quad::fd_weights(0.0, c, 3);
    CHECK(w3[3][0] == doctest::Approx(1.0 / 8.0));
    CHECK(w3[3][1] == doctest::Approx(-1.0));
    CHECK(w3[3][2] == doctest::Approx(13.0 / 8.0));
}

TEST_CASE("Simpson rule") {
    for (std::size_t n : {11u, 12u}) {
        std::vector<double> f(n);
        const double h = 0.1;
        for (std::size_t j = 0; j < n; ++j) f[j] = std::pow(h * j, 3);
        const double Lend = h * (n - 1);
        CHECK(quad::simpson(f, h) == doctest::Approx(std::pow(Lend, 4) / 4).epsilon(1e-12));
    }
}
