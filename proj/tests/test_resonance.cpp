#include <doctest.h>

#include <cmath>
#include <random>

#include "mb/error.hpp"
#include "mb/resonance.hpp"

using namespace mb;

namespace {

// Error relative to the size of the largest cubic term, the natural scale for
// sums that cancel near their zero set.
double rel(double lhs, double rhs, double xi, double xi1, double alpha) {
    const double scale = (1.0 + alpha) * std::pow(std::abs(xi) + std::abs(xi1), 3);
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), scale, 1e-300});
}

struct Sampler {
    std::mt19937_64 rng{20240611};
    std::uniform_real_distribution<double> u{-50.0, 50.0};
    double operator()() { return u(rng); }
};

constexpr int kSamples = 10000;

}  // namespace

TEST_CASE("pointwise values") {
    CHECK(d_alpha(0.0, 3.7, 2.0) == 0.0);
    CHECK(d_alpha(2.0, 1.0, 1.0) == -6.0);
    CHECK(d_alpha(1.0, 0.5, 4.0) == 0.0);
    CHECK(d_tilde_alpha(1.0, 1.0, 2.0) == -1.0);
    CHECK(d_tilde_alpha(2.5, 0.0, 3.0) == 0.0);
}

TEST_CASE("factorizations of d_alpha") {
    Sampler s;
    for (double alpha : {0.5, 2.0, 4.0, 9.0}) {
        const auto g = geometry(alpha);
        double worst = 0.0;
        for (int k = 0; k < kSamples; ++k) {
            const double xi = s(), xi1 = s();
            const double d = d_alpha(xi, xi1, alpha);
            // Completed square in xi1.
            const double sq1 = 3 * alpha * xi * ((xi1 - xi / 2) * (xi1 - xi / 2) + (alpha - 4) / (12 * alpha) * xi * xi);
            worst = std::max(worst, rel(d, sq1, xi, xi1, alpha));
            if (alpha <= 4.0) {
                const double r1 = g.r1.real(), r2 = g.r2.real();
                worst = std::max(worst, rel(d, 3 * alpha * xi * (xi1 - r1 * xi) * (xi1 - r2 * xi), xi, xi1, alpha));
            }
            if (alpha == 4.0) worst = std::max(worst, rel(d, 12 * xi * (xi1 - xi / 2) * (xi1 - xi / 2), xi, xi1, alpha));
            const double c = 3 * alpha * xi1 / (2 * (alpha - 1));
            const double sq2 = (alpha - 1) * xi *
                               ((xi - c) * (xi - c) + 3 * alpha * (alpha - 4) / (4 * (alpha - 1) * (alpha - 1)) * xi1 * xi1);
            worst = std::max(worst, rel(d, sq2, xi, xi1, alpha));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("alpha = 1 factorization") {
    Sampler s;
    for (int k = 0; k < kSamples; ++k) {
        const double xi = s(), xi1 = s();
        CHECK(rel(d_alpha(xi, xi1, 1.0), 3 * xi * xi1 * (xi1 - xi), xi, xi1, 1.0) < 1e-12);
    }
}

TEST_CASE("v-equation quantity") {
    Sampler s;
    for (double alpha : {0.5, 2.0, 4.0, 9.0}) {
        double worst = 0.0;
        for (int k = 0; k < kSamples; ++k) {
            const double xi = s(), xi1 = s();
            const double dt = d_tilde_alpha(xi, xi1, alpha);
            worst = std::max(worst, rel(dt, -d_alpha(xi1, xi, alpha), xi, xi1, alpha));
            if (alpha <= 4.0) {
                const double root = std::sqrt(3 * alpha * (4 - alpha));
                const double c1 = (3 * alpha + root) / (2 * (alpha - 1)), c2 = (3 * alpha - root) / (2 * (alpha - 1));
                worst = std::max(worst, rel(dt, (1 - alpha) * xi1 * (xi1 - c1 * xi) * (xi1 - c2 * xi), xi, xi1, alpha));
            } else {
                CHECK(std::abs(dt) >= (alpha - 4) / 4 * std::pow(std::abs(xi1), 3) * (1 - 1e-12));
            }
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("lower bounds above alpha = 4") {
    Sampler s;
    for (double alpha : {4.5, 9.0, 20.0}) {
        for (int k = 0; k < kSamples; ++k) {
            const double xi = s(), xi1 = s();
            const double d = std::abs(d_alpha(xi, xi1, alpha));
            CHECK(d >= (alpha - 4) / 4 * std::pow(std::abs(xi), 3) * (1 - 1e-12));
            CHECK(d >= 3 * alpha * (alpha - 4) / (4 * (alpha - 1)) * std::abs(xi) * xi1 * xi1 * (1 - 1e-12));
        }
    }
}

TEST_CASE("the three modulations dominate d_alpha / 3") {
    Sampler s;
    for (double alpha : {0.5, 1.0, 4.0, 9.0}) {
        for (int k = 0; k < kSamples; ++k) {
            const double xi = s(), xi1 = s(), tau = 100 * s(), tau1 = 100 * s();
            const double e = xi - xi1;
            const double sum = (tau - xi * xi * xi) - (tau1 - alpha * xi1 * xi1 * xi1) - (tau - tau1 - alpha * e * e * e);
            CHECK(rel(sum, d_alpha(xi, xi1, alpha), xi, xi1, alpha) < 1e-9);
            CHECK(max_modulation(xi, tau, xi1, tau1, alpha) >= std::abs(d_alpha(xi, xi1, alpha)) / 3.0 * (1 - 1e-12));
        }
    }
}

TEST_CASE("elementary comparison lemma") {
    // |a - b| >= eps |b|  implies  |a - b| >= min{1/2, eps/2} |a|.
    Sampler s;
    for (int k = 0; k < kSamples; ++k) {
        const double a = s(), b = s(), eps = std::abs(s()) / 25.0;
        if (std::abs(a - b) >= eps * std::abs(b)) CHECK(std::abs(a - b) >= std::min(0.5, eps / 2) * std::abs(a) * (1 - 1e-12));
    }
}

TEST_CASE("critical exponent table") {
    struct Row {
        double alpha, value;
        bool inclusive;
    };
    const Row rows[] = {{0.3, 0, true},  {0.999, 0, true},   {1, -0.75, false}, {1.001, 0, true},    {2, 0, true},
                        {3.999, 0, true}, {4, 0.75, true}, {4.001, -0.75, false}, {9, -0.75, false}};
    for (const auto& r : rows) {
        const auto sc = critical_exponent(r.alpha);
        CHECK(sc.value == r.value);
        CHECK(sc.inclusive == r.inclusive);
    }
    CHECK(critical_exponent(1.0).admits(-0.7));
    CHECK_FALSE(critical_exponent(1.0).admits(-0.75));
    CHECK(critical_exponent(4.0).admits(0.75));
    CHECK_THROWS_AS(critical_exponent(0.0), Error);
}

TEST_CASE("geometry") {
    const auto g4 = geometry(4.0);
    CHECK(g4.r1.real() == doctest::Approx(0.5));
    CHECK(g4.r2.real() == doctest::Approx(0.5));
    CHECK(g4.require_p1() == doctest::Approx(2.0));
    CHECK(g4.require_p2() == doctest::Approx(2.0 / 3.0));
    CHECK(g4.require_q() == doctest::Approx(4.0 / 3.0));
    CHECK(g4.delta == doctest::Approx(1e-4));

    const auto g1 = geometry(1.0);
    CHECK(g1.r1.real() == doctest::Approx(0.0));
    CHECK(g1.r2.real() == doctest::Approx(1.0));
    try {
        (void)g1.require_q();
        FAIL("expected AlphaOne");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AlphaOne);
    }

    const auto g9 = geometry(9.0);
    CHECK_FALSE(g9.real_roots);
    CHECK(std::abs(g9.r1 - std::conj(g9.r2)) < 1e-15);
    CHECK(g9.r1.imag() != 0.0);
    // Complex roots still annihilate the cubic.
    const auto z = g9.r1;
    const auto dz = -1.0 + 9.0 * z * z * z + 9.0 * (1.0 - z) * (1.0 - z) * (1.0 - z);
    CHECK(std::abs(dz) < 1e-12);

    // delta switches branch where sqrt(alpha)/|1-alpha| = 1/1000.
    CHECK(resonance_delta(1e-8) == doctest::Approx(0.1 * std::sqrt(1e-8) / (1 - 1e-8)));
    CHECK(resonance_delta(0.5) == doctest::Approx(1e-4));
}

TEST_CASE("alpha sweep") {
    const auto rows = resonance_sweep(0.2, 6.0, 29);
    CHECK(rows.size() == 30);
    CHECK(rows.front().alpha == doctest::Approx(0.2));
    CHECK(rows.back().alpha == doctest::Approx(6.0));
    CHECK_THROWS_AS(resonance_sweep(2.0, 1.0, 4), Error);
}
