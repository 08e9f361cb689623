#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace mb::quad {

using cplx = std::complex<double>;

/// Gauss-Legendre rule of order 8 on [-1, 1].
const std::array<double, 8>& gl8_nodes();
const std::array<double, 8>& gl8_weights();

struct NodeSet {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Composite order-8 Gauss-Legendre rule over the given breakpoints.
NodeSet composite_gl8(std::span<const double> breaks);

/// Breakpoints on [a, b] whose panels each carry at most `budget` radians of
/// phase, given a nondecreasing local phase rate; at least `min_panels` panels.
std::vector<double> phase_graded_breaks(double a, double b, const std::function<double(double)>& rate,
                                        double budget, std::size_t min_panels);

/// Stencil start and weights for 8-point Lagrange interpolation of uniform
/// samples (n >= 8) at position p, measured in sample spacings from sample 0.
struct Stencil {
    std::size_t start;
    std::array<double, 8> w;
};
Stencil lagrange8(double p, std::size_t n);

template <class T>
T interpolate(std::span<const T> samples, double p) {
    const Stencil st = lagrange8(p, samples.size());
    T acc{};
    for (int k = 0; k < 8; ++k) acc += st.w[k] * samples[st.start + k];
    return acc;
}

/// Weights W with  integral_0^{(n-1)h} exp(-i omega x) f(x) dx ~ sum_j W_j f_j,
/// exact for the local degree-7 interpolant up to Gauss-Legendre error.
std::vector<cplx> oscillatory_weights(std::size_t n, double h, cplx omega);

/// out[m] = integral_0^{m h} exp(-i omega x) g(x) dx for every sample index m.
void cumulative_oscillatory(std::span<const cplx> g, double h, cplx omega, std::span<cplx> out);

/// Largest |Im omega| * span before exp factors overflow.
inline constexpr double kOverflowGuard = 700.0;

/// Finite-difference weights for derivatives 0..m at z from nodes x (Fornberg).
/// Result[k][j] is the weight of node j for the k-th derivative.
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int m);

/// Composite Simpson rule on uniform samples (3/8 rule on the last panel if needed).
double simpson(std::span<const double> f, double h);

}  // namespace mb::quad
