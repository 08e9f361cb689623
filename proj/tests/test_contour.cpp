#include <doctest.h>

#include <cmath>
#include <complex>

#include "mb/contour.hpp"
#include "mb/error.hpp"

using namespace mb;
using cd = std::complex<double>;

TEST_CASE("contour geometry") {
    const cd a = ContourConstants::a();
    CHECK(std::abs(a * a * a + 1.0) < 1e-15);
    CHECK(std::abs(ContourConstants::sigma() - a * a) < 1e-15);
    CHECK(a.real() == doctest::Approx(ContourConstants::a_R));
    CHECK(a.imag() == doctest::Approx(ContourConstants::a_I));
}

TEST_CASE("node counts and pole bookkeeping") {
    const auto q = build_contour(8.0, 60, 0.0);
    CHECK(q.nodes.size() >= 60);
    CHECK(q.nodes.size() % 8 == 0);
    CHECK_FALSE(q.residue_active());
    double sum = 0.0;
    for (double w : q.weights) sum += w;
    CHECK(sum == doctest::Approx(8.0).epsilon(1e-13));
    const auto qp = build_contour(8.0, 64, 0.7);
    REQUIRE(qp.residue_active());
    CHECK(std::abs(*qp.pole - cd(0.0, 0.7)) < 1e-15);
}

TEST_CASE("boundary integral of an exact derivative") {
    // F = 1/(k+i)^2 has antiderivative -1/(k+i); the pole sits outside the sector.
    const double R = 9.0;
    const cd a = ContourConstants::a();
    const auto q = build_contour(R, 128, 0.0);
    const cd got = integrate_boundary([](cd k) { return 1.0 / ((k + cd(0, 1)) * (k + cd(0, 1))); }, q);
    const cd exact = -1.0 / (a * R + cd(0, 1)) + 1.0 / (a * a * R + cd(0, 1));
    CHECK(std::abs(got - exact) < 1e-12);
}

TEST_CASE("graded contour resolves an oscillatory integrand") {
    // exp(i k^3 t) decays in the sector; along the rays it is exp(-i r^3 t) and exp(i r^3 t).
    const double R = 6.0, t = 0.5;
    auto rate = [&](double r) { return 3.0 * r * r * t; };
    const auto q = build_contour(R, 32, 0.0, rate, 2.0);
    const auto fine = build_contour(R, 4096, 0.0);
    auto F = [&](cd k) { return std::exp(cd(0, 1) * k * k * k * t) / (1.0 + k * k * k * k); };
    CHECK(std::abs(integrate_boundary(F, q) - integrate_boundary(F, fine)) < 1e-10);
}

TEST_CASE("non-finite integrand is reported") {
    const auto q = build_contour(4.0, 16, 0.0);
    CHECK_THROWS_AS(integrate_boundary([](cd) { return cd(NAN, 0.0); }, q), Error);
}

TEST_CASE("residue term vanishes without data and scales with it") {
    ResidueTransforms zero;
    CHECK(residue_term(0.5, 1.0, zero, 1.0, 0.1) == cd(0.0));
    ResidueTransforms d;
    d.data_at_sigma = 1.0;
    const cd r1 = residue_term(0.5, 1.0, d, 1.0, 0.1);
    d.data_at_sigma = 2.0;
    CHECK(std::abs(residue_term(0.5, 1.0, d, 1.0, 0.1) - 2.0 * r1) < 1e-14);
    CHECK(std::abs(r1) > 0.0);
}
