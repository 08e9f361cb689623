#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mb/error.hpp"
#include "mb/whole_line.hpp"

using namespace mb;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("single Fourier mode evolves by a phase shift") {
    const LineGrid g{-10.0, 20.0 / 256, 256};
    const double k = 2.0 * kPi * 5.0 / g.period();
    const double alpha = 2.5, t = 0.3;
    std::vector<double> v0(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v0[i] = std::cos(k * g.x(i));
    const auto v = solve_ivp_homogeneous(v0, g, alpha, t);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(v[i] == doctest::Approx(std::cos(k * g.x(i) + alpha * k * k * k * t)).epsilon(1e-11));
}

TEST_CASE("series slices match single-time evolution") {
    const LineGrid g{-20.0, 0.1, 400};
    std::vector<double> v0(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v0[i] = std::exp(-g.x(i) * g.x(i));
    const auto series = solve_ivp_homogeneous_series(v0, g, 1.0, 0.05, 5);
    CHECK(series.nt() == 5);
    const auto direct = solve_ivp_homogeneous(v0, g, 1.0, 0.2);
    for (std::size_t i = 0; i < g.n; ++i) CHECK(std::abs(series(i, 4) - direct[i]) < 1e-13);
    // L2 mass is conserved by the unitary flow.
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        m0 += v0[i] * v0[i];
        m1 += direct[i] * direct[i];
    }
    CHECK(m1 == doctest::Approx(m0).epsilon(1e-12));
}

TEST_CASE("Duhamel solution for a steady single-mode source") {
    const LineGrid g{0.0, 2.0 * kPi / 64, 64};
    const double k = 3.0, alpha = 1.3, dt = 0.01;
    const std::size_t nt = 41;
    Field2D w(g.n, nt);
    for (std::size_t n = 0; n < nt; ++n)
        for (std::size_t i = 0; i < g.n; ++i) w(i, n) = std::cos(k * g.x(i));
    const auto W = solve_ivp_forced(w, g, dt, alpha, nt + 10);
    CHECK(W.nt() == nt + 10);
    const double om = alpha * k * k * k;
    for (std::size_t n : {std::size_t{0}, std::size_t{17}, nt - 1}) {
        const double t = dt * n;
        for (std::size_t i = 0; i < g.n; i += 7) {
            const double exact = (std::sin(k * g.x(i) + om * t) - std::sin(k * g.x(i))) / om;
            CHECK(std::abs(W(i, n) - exact) < 1e-9);
        }
    }
    // Free evolution after the forcing stops.
    const double tf = dt * (nt - 1), t = dt * (nt + 9);
    for (std::size_t i = 0; i < g.n; i += 7) {
        const double exact = (std::sin(k * g.x(i) + om * t) - std::sin(k * g.x(i) + om * (t - tf))) / om;
        CHECK(std::abs(W(i, nt + 9) - exact) < 1e-9);
    }
}

TEST_CASE("spectral derivative and tail check") {
    const LineGrid g{0.0, 2.0 * kPi / 128, 128};
    std::vector<double> f(g.n);
    for (std::size_t i = 0; i < g.n; ++i) f[i] = std::sin(4.0 * g.x(i));
    CHECK(spectral_derivative(f, g, 10) == doctest::Approx(4.0 * std::cos(4.0 * g.x(10))).epsilon(1e-11));
    CHECK_NOTHROW(check_spectral_tail(f, "f"));
    std::vector<double> step(g.n);
    for (std::size_t i = 0; i < g.n; ++i) step[i] = i < g.n / 2 ? 1.0 : 0.0;
    try {
        check_spectral_tail(step, "step");
        FAIL("expected AliasingDetected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AliasingDetected);
        CHECK(e.field() == "step");
    }
}
