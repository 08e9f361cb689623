#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mb {

// ---- calculus lemma checks ----

enum class CalculusKind { ConvDecay, SqrtKernel, SubhalfConv };

std::string to_string(CalculusKind k);
CalculusKind parse_calculus_kind(const std::string& text);

struct BoundCheck {
    double lhs = 0.0;
    double rhs_shape = 0.0;
    double ratio() const { return lhs / rhs_shape; }
};

/// ConvDecay:   int_R dx / ((1+|x-a|)^{2l} (1+|x-c|)^{2l'})  vs  (1+|a-c|)^{-2 min(l,l')},  1/2 < l,l' < 1.
/// SqrtKernel:  int_{|x|<=c} dx / ((1+|x|)^{2(1-l)} sqrt|a-x|)  vs  (1+c)^{2l-1} / (1+|a|)^{1/2},  1/2 < l < 1.
/// SubhalfConv: the ConvDecay integral  vs  (1+|a-c|)^{1-2l-2l'},  1/4 < l' <= l < 1/2.
BoundCheck calculus_bound_check(CalculusKind kind, double l, double l_prime, double a, double c);

struct SweepResult {
    std::vector<double> ratios;
    double median = 0.0;
    double max = 0.0;
    /// No ratio exceeds three times the sweep median.
    bool bounded() const { return max <= 3.0 * median; }
};

/// n random parameter points at fixed (l, l'): |a - c| log-uniform on [1, 1e4]
/// for the convolution bounds; c log-uniform on [1, 1e3] and a uniform on
/// [-2c, 2c] for the square-root kernel.
SweepResult calculus_sweep(CalculusKind kind, double l, double l_prime, std::size_t n, std::uint64_t seed);

// ---- multipliers and Theta ----

enum class MultiplierKind { Q0, Q1, Q2, Q3, QPrime };

std::string to_string(MultiplierKind k);

struct MultiplierSpec {
    double s = 0.0;
    double b = 0.0;
    double b_prime = 0.0;
    double theta_prime = 0.55;
    double alpha = 4.0;
    MultiplierKind which = MultiplierKind::QPrime;
    /// Drop the chi_{|xi|<1} (1+|tau|)^{theta'} terms, as the counterexamples do.
    bool drop_low_frequency = true;

    void validate() const;
};

/// Q(xi, tau, xi1, tau1) for the chosen kind.
double multiplier(const MultiplierSpec& mspec, double xi, double tau, double xi1, double tau1);

/// Band {|xi - xi_center| <= xi_halfwidth, |tau - mid(xi)| <= tau_halfwidth} with
/// mid(xi) = tau_center + cubic xi^3 + slope (xi - xi_center). cubic = 0 and
/// slope = 0 give a plain rectangle; slope alone gives a tangent-line parallelogram.
struct RectangleSpec {
    double xi_center = 0.0;
    double xi_halfwidth = 0.0;
    double tau_center = 0.0;
    double tau_halfwidth = 0.0;
    double cubic = 0.0;
    double slope = 0.0;

    double xi_lo() const { return xi_center - xi_halfwidth; }
    double xi_hi() const { return xi_center + xi_halfwidth; }
    double mid(double xi) const;
    bool contains(double xi, double tau) const;
    bool empty() const { return !(xi_halfwidth > 0.0) || !(tau_halfwidth > 0.0); }
    void validate() const;
};

/// Rectangles of the counterexample constructions for frequency parameter N.
namespace rects {
RectangleSpec a4_plus(double N);            // N +- N^{-1/2}, |tau - 4 xi^3| <= 10 * 5^3
RectangleSpec a1_tilde_plus(double N);      // 2N +- (2N)^{-1/2}, |tau - xi^3| <= 10 * 5^3
RectangleSpec a4_inner(double N);           // tangent parallelogram at (N, 4N^3)
RectangleSpec a1_tilde_inner(double N);     // tangent parallelogram at (2N, 8N^3)
RectangleSpec a_alpha(double N, double alpha);        // around ((1-r2)N, alpha((1-r2)N)^3)
RectangleSpec a_alpha_tilde(double N, double alpha);  // around (r2 N, alpha (r2 N)^3)
RectangleSpec delta_box(double N, double alpha);      // around (N, N^3)
RectangleSpec a_alpha_plus(double N, double alpha);   // N +- N^{-1/2}, |tau - alpha xi^3| <= 10(1+alpha)^3
RectangleSpec a_alpha_minus(double N, double alpha);  // reflection of a_alpha_plus
RectangleSpec origin_box(double N, double alpha);     // output region for the alpha > 4 construction
}  // namespace rects

/// ||chi_R||^2 by quadrature of the tau-extent over xi.
double c_norm_squared(const RectangleSpec& r);

/// Theta(xi, tau) = integral of Q * c_f(xi - xi1, tau - tau1) * c_g(xi1, tau1), with
/// c_f, c_g sums of indicator functions of the given rectangles.
double theta_quantity(const MultiplierSpec& mspec, const std::vector<RectangleSpec>& f,
                      const std::vector<RectangleSpec>& g, double xi, double tau, bool refined = false);

/// L2 norm of Theta over the output region `out`. Throws QuadratureUnderResolved
/// when a tenfold tighter tolerance moves the result by more than 1%.
double theta_norm(const MultiplierSpec& mspec, const std::vector<RectangleSpec>& f,
                  const std::vector<RectangleSpec>& g, const RectangleSpec& out, double tol = 1e-6);

/// Sampled check that inner(f) - inner(g) lands in A+_4 with the stated margins.
struct ContainmentReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
};
ContainmentReport containment_check(double N, std::size_t per_axis);

// ---- scaling study ----

enum class Construction { Alpha4, Sub4, Sup4 };
Construction construction_for(double alpha);
std::string to_string(Construction c);

struct ScalingRow {
    double N = 0.0;
    double theta_norm = 0.0;
    double cf_norm = 0.0;
    double cg_norm = 0.0;
    double ratio = 0.0;        // theta / (cf cg)
    double local_slope = 0.0;  // d log theta / d log N against the previous row
};

struct ScalingResult {
    double alpha = 0.0;
    double s = 0.0;
    double b = 0.0;
    Construction construction = Construction::Alpha4;
    std::vector<ScalingRow> rows;
    double slope = 0.0;        // least-squares slope of log theta vs log N
    double ratio_slope = 0.0;  // same for log ratio
};

ScalingResult counterexample_scaling(double alpha, double s, const std::vector<double>& N_list, double b = 0.0);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mb
