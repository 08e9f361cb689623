#include "mb/estimates_lab.hpp"

#include "mb/error.hpp"
#include "mb/resonance.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numeric>
#include <random>

namespace mb {

namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

double finite_or_fail(double v, const char* what) {
    if (!std::isfinite(v)) fail(ErrorKind::NonFiniteIntegrand, what, "quadrature returned a non-finite value");
    return v;
}

// integral over R of a function smooth away from the sorted breakpoints
template <class F>
double integrate_line(F f, std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    thread_local exp_sinh<double> tail;
    thread_local tanh_sinh<double> mid;
    const double lo = breaks.front(), hi = breaks.back();
    double sum = tail.integrate([&](double u) { return f(lo - u); }, 0.0, std::numeric_limits<double>::infinity());
    sum += tail.integrate([&](double u) { return f(hi + u); }, 0.0, std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) sum += mid.integrate(f, breaks[k], breaks[k + 1]);
    return sum;
}

double conv_integral(double l, double lp, double a, double c) {
    auto f = [=](double x) { return std::pow(1.0 + std::abs(x - a), -2.0 * l) * std::pow(1.0 + std::abs(x - c), -2.0 * lp); };
    return integrate_line(f, {a, c});
}

double sqrt_integral(double l, double a, double c) {
    std::vector<double> br{-c, 0.0, c};
    if (a > -c && a < c) br.push_back(a);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    thread_local tanh_sinh<double> ts;
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        const double lo = br[k], hi = br[k + 1];
        // distance to the singular point, measured from the nearer endpoint when it is the singular one
        auto f = [=](double x, double xc) {
            double dist;
            if (lo == a && x < 0.5 * (lo + hi)) dist = std::abs(xc);
            else if (hi == a && x >= 0.5 * (lo + hi)) dist = std::abs(xc);
            else dist = std::abs(a - x);
            return std::pow(1.0 + std::abs(x), -2.0 * (1.0 - l)) / std::sqrt(dist);
        };
        sum += ts.integrate(f, lo, hi);
    }
    return sum;
}

double median_of(std::vector<double> v) {
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    double med = v[m];
    if (v.size() % 2 == 0) med = 0.5 * (med + *std::max_element(v.begin(), v.begin() + m));
    return med;
}

}  // namespace

std::string to_string(CalculusKind k) {
    switch (k) {
        case CalculusKind::ConvDecay: return "conv_decay";
        case CalculusKind::SqrtKernel: return "sqrt_kernel";
        case CalculusKind::SubhalfConv: return "subhalf_conv";
    }
    return "?";
}

CalculusKind parse_calculus_kind(const std::string& text) {
    if (text == "conv_decay") return CalculusKind::ConvDecay;
    if (text == "sqrt_kernel") return CalculusKind::SqrtKernel;
    if (text == "subhalf_conv") return CalculusKind::SubhalfConv;
    fail(ErrorKind::ParameterOutOfRange, "kind", "unknown calculus bound '" + text + "'");
}

BoundCheck calculus_bound_check(CalculusKind kind, double l, double l_prime, double a, double c) {
    if (!std::isfinite(a) || !std::isfinite(c)) fail(ErrorKind::ParameterOutOfRange, "a", "a and c must be finite");
    BoundCheck out;
    switch (kind) {
        case CalculusKind::ConvDecay:
            if (!(l > 0.5 && l < 1.0)) fail(ErrorKind::ParameterOutOfRange, "l", "conv_decay needs 1/2 < l < 1");
            if (!(l_prime > 0.5 && l_prime < 1.0))
                fail(ErrorKind::ParameterOutOfRange, "l_prime", "conv_decay needs 1/2 < l' < 1");
            out.lhs = conv_integral(l, l_prime, a, c);
            out.rhs_shape = std::pow(1.0 + std::abs(a - c), -2.0 * std::min(l, l_prime));
            break;
        case CalculusKind::SqrtKernel:
            if (!(l > 0.5 && l < 1.0)) fail(ErrorKind::ParameterOutOfRange, "l", "sqrt_kernel needs 1/2 < l < 1");
            if (!(c > 0.0)) fail(ErrorKind::ParameterOutOfRange, "c", "sqrt_kernel needs c > 0");
            out.lhs = sqrt_integral(l, a, c);
            out.rhs_shape = std::pow(1.0 + c, 2.0 * (l - 0.5)) / std::sqrt(1.0 + std::abs(a));
            break;
        case CalculusKind::SubhalfConv:
            if (!(l_prime > 0.25 && l_prime <= l && l < 0.5))
                fail(ErrorKind::ParameterOutOfRange, "l", "subhalf_conv needs 1/4 < l' <= l < 1/2");
            out.lhs = conv_integral(l, l_prime, a, c);
            out.rhs_shape = std::pow(1.0 + std::abs(a - c), -(2.0 * l + 2.0 * l_prime - 1.0));
            break;
    }
    finite_or_fail(out.lhs, "lhs");
    return out;
}

SweepResult calculus_sweep(CalculusKind kind, double l, double l_prime, std::size_t n, std::uint64_t seed) {
    if (n == 0) fail(ErrorKind::ParameterOutOfRange, "n", "sweep needs at least one point");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SweepResult res;
    res.ratios.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double a, c;
        if (kind == CalculusKind::SqrtKernel) {
            c = std::pow(10.0, 3.0 * unit(rng));
            a = c * (4.0 * unit(rng) - 2.0);
        } else {
            const double d = std::pow(10.0, 4.0 * unit(rng));
            a = 200.0 * unit(rng) - 100.0;
            c = unit(rng) < 0.5 ? a + d : a - d;
        }
        res.ratios.push_back(calculus_bound_check(kind, l, l_prime, a, c).ratio());
    }
    res.median = median_of(res.ratios);
    res.max = *std::max_element(res.ratios.begin(), res.ratios.end());
    return res;
}

// ---- multipliers ----

std::string to_string(MultiplierKind k) {
    switch (k) {
        case MultiplierKind::Q0: return "Q0";
        case MultiplierKind::Q1: return "Q1";
        case MultiplierKind::Q2: return "Q2";
        case MultiplierKind::Q3: return "Q3";
        case MultiplierKind::QPrime: return "QPrime";
    }
    return "?";
}

void MultiplierSpec::validate() const {
    if (!(alpha > 0.0)) fail(ErrorKind::InvariantViolation, "alpha", "alpha must be positive");
    if (!std::isfinite(s)) fail(ErrorKind::InvariantViolation, "s", "s must be finite");
    // b = b' = 0 is admitted: the counterexamples are stated for every b
    if (!(b_prime >= 0.0 && b_prime <= b && b < 0.5))
        fail(ErrorKind::InvariantViolation, "b_prime", "need 0 <= b' <= b < 1/2");
    if (!(theta_prime > 0.5 && theta_prime < 1.0))
        fail(ErrorKind::InvariantViolation, "theta_prime", "need 1/2 < theta' < 1");
}

double multiplier(const MultiplierSpec& mspec, double xi, double tau, double xi1, double tau1) {
    const double xi2 = xi - xi1, tau2 = tau - tau1;
    const bool low1 = std::abs(xi1) < 1.0, low2 = std::abs(xi2) < 1.0;
    switch (mspec.which) {
        case MultiplierKind::Q1: if (!(low1 && low2)) return 0.0; break;
        case MultiplierKind::Q2: if (!(!low1 && low2)) return 0.0; break;
        case MultiplierKind::Q3: if (!(!low1 && !low2)) return 0.0; break;
        default: break;
    }
    const double bp = mspec.b_prime;
    double den1 = std::pow(1.0 + std::abs(tau1 - mspec.alpha * xi1 * xi1 * xi1), bp);
    double den2 = std::pow(1.0 + std::abs(tau2 - mspec.alpha * xi2 * xi2 * xi2), bp);
    if (!mspec.drop_low_frequency) {
        if (low1) den1 += std::pow(1.0 + std::abs(tau1), mspec.theta_prime);
        if (low2) den2 += std::pow(1.0 + std::abs(tau2), mspec.theta_prime);
    }
    double q = std::abs(xi) / std::pow(1.0 + std::abs(tau - xi * xi * xi), bp) / (den1 * den2);
    if (mspec.which == MultiplierKind::QPrime)
        q *= std::pow(1.0 + std::abs(xi), mspec.s) /
             (std::pow(1.0 + std::abs(xi1), mspec.s) * std::pow(1.0 + std::abs(xi2), mspec.s));
    return q;
}

// ---- rectangles ----

double RectangleSpec::mid(double xi) const { return tau_center + cubic * xi * xi * xi + slope * (xi - xi_center); }

bool RectangleSpec::contains(double xi, double tau) const {
    return std::abs(xi - xi_center) <= xi_halfwidth && std::abs(tau - mid(xi)) <= tau_halfwidth;
}

void RectangleSpec::validate() const {
    if (!std::isfinite(xi_center) || !std::isfinite(tau_center) || !std::isfinite(cubic) || !std::isfinite(slope))
        fail(ErrorKind::InvariantViolation, "xi_center", "rectangle data must be finite");
    if (!(xi_halfwidth > 0.0)) fail(ErrorKind::InvariantViolation, "xi_halfwidth", "half-width must be positive");
    if (!(tau_halfwidth > 0.0)) fail(ErrorKind::InvariantViolation, "tau_halfwidth", "half-width must be positive");
}

namespace rects {

namespace {
RectangleSpec empty_rect() { return RectangleSpec{}; }

// parallelogram between the tangent of kappa xi^3 at x0 and its parallel through (x0+d, kappa(x0+d)^3)
RectangleSpec tangent_parallelogram(double x0, double d, double kappa) {
    const double gap = kappa * (3.0 * x0 * d * d + d * d * d);
    RectangleSpec r;
    r.xi_center = x0 + 0.5 * d;
    r.xi_halfwidth = 0.5 * d;
    r.slope = 3.0 * kappa * x0 * x0;
    r.tau_center = kappa * x0 * x0 * x0 + r.slope * 0.5 * d + 0.5 * gap;
    r.tau_halfwidth = 0.5 * gap;
    return r;
}

double sub4_eps(double alpha) {
    const ResonanceGeometry g = geometry(alpha);
    return 1.0 / std::pow(10.0 + std::abs(g.r1) + std::abs(g.r2), 3);
}

double sub4_r2(double alpha) {
    if (!(alpha > 0.0 && alpha < 4.0) || alpha == 1.0)
        fail(ErrorKind::ParameterOutOfRange, "alpha", "this construction needs 0 < alpha < 4, alpha != 1");
    return geometry(alpha).r2.real();
}
}  // namespace

RectangleSpec a4_plus(double N) {
    if (!(N >= 1.0)) return empty_rect();
    RectangleSpec r;
    r.xi_center = N;
    r.xi_halfwidth = 1.0 / std::sqrt(N);
    r.cubic = 4.0;
    r.tau_halfwidth = 10.0 * 125.0;
    return r;
}

RectangleSpec a1_tilde_plus(double N) {
    if (!(N >= 1.0)) return empty_rect();
    RectangleSpec r;
    r.xi_center = 2.0 * N;
    r.xi_halfwidth = 1.0 / std::sqrt(2.0 * N);
    r.cubic = 1.0;
    r.tau_halfwidth = 10.0 * 125.0;
    return r;
}

RectangleSpec a4_inner(double N) {
    if (!(N >= 1.0)) return empty_rect();
    return tangent_parallelogram(N, 1e-3 / std::sqrt(N), 4.0);
}

RectangleSpec a1_tilde_inner(double N) {
    if (!(N >= 1.0)) return empty_rect();
    return tangent_parallelogram(2.0 * N, 1e-3 / std::sqrt(2.0 * N), 1.0);
}

RectangleSpec a_alpha(double N, double alpha) {
    const double r2 = sub4_r2(alpha);
    if (!(N >= 1.0)) return empty_rect();
    const double x = (1.0 - r2) * N;
    RectangleSpec r;
    r.xi_center = x;
    r.xi_halfwidth = 2.0 * sub4_eps(alpha) / (N * N);
    r.tau_center = alpha * x * x * x;
    r.tau_halfwidth = 1e3;
    return r;
}

RectangleSpec a_alpha_tilde(double N, double alpha) {
    const double r2 = sub4_r2(alpha);
    if (!(N >= 1.0)) return empty_rect();
    const double x = r2 * N;
    RectangleSpec r;
    r.xi_center = x;
    r.xi_halfwidth = sub4_eps(alpha) / (N * N);
    r.tau_center = alpha * x * x * x;
    r.tau_halfwidth = 1.0;
    return r;
}

RectangleSpec delta_box(double N, double alpha) {
    sub4_r2(alpha);
    if (!(N >= 1.0)) return empty_rect();
    RectangleSpec r;
    r.xi_center = N;
    r.xi_halfwidth = sub4_eps(alpha) / (N * N);
    r.tau_center = N * N * N;
    r.tau_halfwidth = 1.0;
    return r;
}

RectangleSpec a_alpha_plus(double N, double alpha) {
    if (!(alpha > 0.0)) fail(ErrorKind::ParameterOutOfRange, "alpha", "alpha must be positive");
    if (!(N >= 1.0)) return empty_rect();
    RectangleSpec r;
    r.xi_center = N;
    r.xi_halfwidth = 1.0 / std::sqrt(N);
    r.cubic = alpha;
    r.tau_halfwidth = 10.0 * std::pow(1.0 + alpha, 3);
    return r;
}

RectangleSpec a_alpha_minus(double N, double alpha) {
    RectangleSpec r = a_alpha_plus(N, alpha);
    r.xi_center = -r.xi_center;
    return r;
}

RectangleSpec origin_box(double N, double alpha) {
    if (!(alpha > 0.0)) fail(ErrorKind::ParameterOutOfRange, "alpha", "alpha must be positive");
    if (!(N >= 1.0)) return empty_rect();
    // alpha (xi1^3 + (xi - xi1)^3) ~ 3 alpha N^2 xi for xi1 near N
    RectangleSpec r;
    r.xi_center = 0.0;
    r.xi_halfwidth = 1.0 / std::sqrt(N);
    r.slope = 3.0 * alpha * N * N;
    r.tau_halfwidth = 20.0 * std::pow(1.0 + alpha, 3);
    return r;
}

}  // namespace rects

// ---- Theta ----

namespace {

constexpr unsigned kDepth = 18;

template <class F>
double gk_adapt(F& f, double a, double b, double abs_tol, unsigned depth) {
    double err = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    if (err <= abs_tol || depth == 0) return v;
    const double m = 0.5 * (a + b);
    return gk_adapt(f, a, m, 0.5 * abs_tol, depth - 1) + gk_adapt(f, m, b, 0.5 * abs_tol, depth - 1);
}

// Adaptive Gauss-Kronrod over consecutive pieces of `br`. The tolerance is
// relative to the L1 mass of the whole range, so pieces that only carry
// rounding noise do not force full-depth recursion.
template <class F>
double gk_pieces(F f, const std::vector<double>& br, double tol) {
    if (br.size() < 2) return 0.0;
    double mass = 0.0;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        if (!(br[k + 1] > br[k])) continue;
        double err = 0.0, l1 = 0.0;
        gauss_kronrod<double, 15>::integrate(f, br[k], br[k + 1], 0, 0.0, &err, &l1);
        mass += l1;
    }
    const double span = br.back() - br.front();
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        if (!(br[k + 1] > br[k])) continue;
        const double share = (br[k + 1] - br[k]) / span;
        sum += gk_adapt(f, br[k], br[k + 1], tol * mass * share, kDepth);
    }
    return sum;
}

template <class F>
double gk(F f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    return gk_pieces(f, {a, b}, tol);
}

// fixed Gauss rule on a smooth piece; `fine` selects the refinement order
template <class F>
double gl(F f, double a, double b, bool fine) {
    if (!(b > a)) return 0.0;
    return fine ? gauss<double, 30>::integrate(f, a, b) : gauss<double, 15>::integrate(f, a, b);
}

// Panels growing geometrically away from both ends, for integrands whose
// only roughness is a (1 + |t - kink|)^{-b} factor at an endpoint.
template <class F>
double graded(F& f, double a, double b, bool fine) {
    const double len = b - a;
    if (!(len > 0.0)) return 0.0;
    if (len <= 4.0) return gl(f, a, b, fine);
    std::vector<double> br{a, b};
    for (double d = 1.0; d < 0.5 * len; d *= 2.0) {
        br.push_back(a + d);
        br.push_back(b - d);
    }
    std::sort(br.begin(), br.end());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) sum += gl(f, br[k], br[k + 1], fine);
    return sum;
}

// tau extent of r at xi, if xi lies in its window
bool tau_window(const RectangleSpec& r, double xi, double& lo, double& hi) {
    if (r.empty() || std::abs(xi - r.xi_center) > r.xi_halfwidth) return false;
    const double m = r.mid(xi);
    lo = m - r.tau_halfwidth;
    hi = m + r.tau_halfwidth;
    return true;
}

// For fixed xi the pair (f, g) contributes over xi1 in [a, b]. The tau1 overlap
// length depends on xi1 only through S(xi1) = g.mid(xi1) + f.mid(xi - xi1), a
// cubic, so the kinks sit on level sets of S.
struct PairSlice {
    const RectangleSpec* f = nullptr;
    const RectangleSpec* g = nullptr;
    double xi = 0.0, a = 0.0, b = 0.0;
    std::vector<double> monotone;  // a, interior critical points of S, b

    double S(double xi1) const { return g->mid(xi1) + f->mid(xi - xi1); }
    std::array<double, 4> offsets() const {
        const double p = g->tau_halfwidth + f->tau_halfwidth, m = g->tau_halfwidth - f->tau_halfwidth;
        return {-p, -m, m, p};
    }
};

bool make_slice(const RectangleSpec& f, const RectangleSpec& g, double xi, PairSlice& ps) {
    if (f.empty() || g.empty()) return false;
    ps.f = &f;
    ps.g = &g;
    ps.xi = xi;
    ps.a = std::max(g.xi_lo(), xi - f.xi_hi());
    ps.b = std::min(g.xi_hi(), xi - f.xi_lo());
    if (!(ps.b > ps.a)) return false;
    ps.monotone = {ps.a};
    // S'(x) = 3(gc - fc) x^2 + 6 fc xi x + (gs - fs - 3 fc xi^2)
    const double A = 3.0 * (g.cubic - f.cubic), B = 6.0 * f.cubic * xi,
                 C = g.slope - f.slope - 3.0 * f.cubic * xi * xi;
    std::vector<double> crit;
    if (A == 0.0) {
        if (B != 0.0) crit.push_back(-C / B);
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
            if (q != 0.0) crit.push_back(C / q);
            crit.push_back(q / A);
        }
    }
    std::sort(crit.begin(), crit.end());
    for (double c : crit)
        if (c > ps.a && c < ps.b) ps.monotone.push_back(c);
    ps.monotone.push_back(ps.b);
    return true;
}

// points in [a, b] where S = target
void level_set(const PairSlice& ps, double target, std::vector<double>& out) {
    for (std::size_t k = 0; k + 1 < ps.monotone.size(); ++k) {
        double lo = ps.monotone[k], hi = ps.monotone[k + 1];
        double flo = ps.S(lo) - target, fhi = ps.S(hi) - target;
        if (!(flo * fhi < 0.0)) continue;
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi); ++it) {
            const double m = 0.5 * (lo + hi), fm = ps.S(m) - target;
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = m;
                flo = fm;
            } else {
                hi = m;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
}

double slice_theta(const MultiplierSpec& mspec, const PairSlice& ps, double tau, bool fine) {
    const RectangleSpec& f = *ps.f;
    const RectangleSpec& g = *ps.g;
    const double xi = ps.xi;
    const bool tau_free = mspec.b_prime == 0.0 && mspec.drop_low_frequency;
    auto inner = [&](double xi1) -> double {
        double glo, ghi, flo, fhi;
        if (!tau_window(g, xi1, glo, ghi) || !tau_window(f, xi - xi1, flo, fhi)) return 0.0;
        const double lo = std::max(glo, tau - fhi), hi = std::min(ghi, tau - flo);
        if (!(hi > lo)) return 0.0;
        if (tau_free) return (hi - lo) * multiplier(mspec, xi, tau, xi1, lo);
        std::vector<double> br{lo, hi};
        for (double k : {mspec.alpha * xi1 * xi1 * xi1, tau - mspec.alpha * (xi - xi1) * (xi - xi1) * (xi - xi1), 0.0, tau})
            if (k > lo && k < hi) br.push_back(k);
        std::sort(br.begin(), br.end());
        auto q = [&](double t1) { return multiplier(mspec, xi, tau, xi1, t1); };
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < br.size(); ++k) sum += graded(q, br[k], br[k + 1], fine);
        return sum;
    };
    std::vector<double> br = ps.monotone;
    for (double c : ps.offsets()) level_set(ps, tau + c, br);
    for (double k : {0.0, xi, xi - 1.0, xi + 1.0, -1.0, 1.0})
        if (k > ps.a && k < ps.b) br.push_back(k);
    std::sort(br.begin(), br.end());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) sum += gl(inner, br[k], br[k + 1], fine);
    return sum;
}

struct Slices {
    std::vector<PairSlice> items;
};

Slices slices_at(const std::vector<RectangleSpec>& f, const std::vector<RectangleSpec>& g, double xi) {
    Slices s;
    for (const auto& rf : f)
        for (const auto& rg : g) {
            PairSlice ps;
            if (make_slice(rf, rg, xi, ps)) s.items.push_back(std::move(ps));
        }
    return s;
}

double theta_from_slices(const MultiplierSpec& mspec, const Slices& s, double tau, bool fine) {
    double sum = 0.0;
    for (const auto& ps : s.items) sum += slice_theta(mspec, ps, tau, fine);
    return sum;
}

// xi breakpoints: where a pair's xi1 window changes shape
std::vector<double> xi_breaks(const std::vector<RectangleSpec>& f, const std::vector<RectangleSpec>& g,
                              const RectangleSpec& out) {
    std::vector<double> br{out.xi_lo(), out.xi_hi()};
    for (const auto& rf : f)
        for (const auto& rg : g) {
            if (rf.empty() || rg.empty()) continue;
            for (double k : {rg.xi_lo() + rf.xi_lo(), rg.xi_lo() + rf.xi_hi(), rg.xi_hi() + rf.xi_lo(),
                             rg.xi_hi() + rf.xi_hi(), 2.0 * rg.xi_lo(), 2.0 * rg.xi_hi(), 2.0 * rf.xi_lo(),
                             2.0 * rf.xi_hi()})
                if (k > out.xi_lo() && k < out.xi_hi()) br.push_back(k);
        }
    if (0.0 > out.xi_lo() && 0.0 < out.xi_hi()) br.push_back(0.0);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
}

double theta_norm_once(const MultiplierSpec& mspec, const std::vector<RectangleSpec>& f,
                       const std::vector<RectangleSpec>& g, const RectangleSpec& out, double tol, bool fine) {
    if (out.empty()) return 0.0;
    auto over_tau = [&](double xi) {
        const Slices s = slices_at(f, g, xi);
        if (s.items.empty()) return 0.0;
        const double m = out.mid(xi), lo = m - out.tau_halfwidth, hi = m + out.tau_halfwidth;
        // tau kinks: S at window ends and critical points, shifted by the offsets
        std::vector<double> br{lo, hi};
        const double resonant = xi * xi * xi;
        if (resonant > lo && resonant < hi) br.push_back(resonant);
        for (const auto& ps : s.items)
            for (double e : ps.monotone)
                for (double c : ps.offsets()) {
                    const double t = ps.S(e) - c;
                    if (t > lo && t < hi) br.push_back(t);
                }
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end()), br.end());
        auto sq = [&](double tau) {
            const double th = theta_from_slices(mspec, s, tau, fine);
            return th * th;
        };
        return gk_pieces(sq, br, tol * 0.1);
    };
    const std::vector<double> br = xi_breaks(f, g, out);
    const double total = gk_pieces(over_tau, br, tol);
    return std::sqrt(finite_or_fail(total, "theta_norm"));
}

}  // namespace

double c_norm_squared(const RectangleSpec& r) {
    if (r.empty()) return 0.0;
    return gk(
        [&](double xi) {
            double lo, hi;
            return tau_window(r, xi, lo, hi) ? hi - lo : 0.0;
        },
        r.xi_lo(), r.xi_hi(), 1e-13);
}

double theta_quantity(const MultiplierSpec& mspec, const std::vector<RectangleSpec>& f,
                      const std::vector<RectangleSpec>& g, double xi, double tau, bool refined) {
    return theta_from_slices(mspec, slices_at(f, g, xi), tau, refined);
}

double theta_norm(const MultiplierSpec& mspec, const std::vector<RectangleSpec>& f,
                  const std::vector<RectangleSpec>& g, const RectangleSpec& out, double tol) {
    mspec.validate();
    const double coarse = theta_norm_once(mspec, f, g, out, tol, false);
    const double fine = theta_norm_once(mspec, f, g, out, tol * 0.1, true);
    if (std::abs(fine - coarse) > 0.01 * std::abs(fine))
        fail(ErrorKind::QuadratureUnderResolved, "theta_norm",
             "refinement moved the norm from " + std::to_string(coarse) + " to " + std::to_string(fine));
    return fine;
}

ContainmentReport containment_check(double N, std::size_t per_axis) {
    if (per_axis < 2) fail(ErrorKind::ParameterOutOfRange, "per_axis", "need at least two samples per axis");
    const RectangleSpec inner_g = rects::a4_inner(N);
    const RectangleSpec inner_out = rects::a1_tilde_inner(N);
    const RectangleSpec target = rects::a4_plus(N);
    ContainmentReport rep;
    const double xlo = N - 1e-3 / std::sqrt(N), xhi = N + 1e-3 / std::sqrt(2.0 * N);
    auto sample = [&](const RectangleSpec& r, std::size_t i, std::size_t j, double& x, double& t) {
        const double u = double(i) / double(per_axis - 1), v = double(j) / double(per_axis - 1);
        x = r.xi_lo() + u * (r.xi_hi() - r.xi_lo());
        t = r.mid(x) + (2.0 * v - 1.0) * r.tau_halfwidth;
    };
    for (std::size_t i = 0; i < per_axis; ++i)
        for (std::size_t j = 0; j < per_axis; ++j) {
            double xi, tau;
            sample(inner_out, i, j, xi, tau);
            for (std::size_t k = 0; k < per_axis; ++k)
                for (std::size_t m = 0; m < per_axis; ++m) {
                    double xi1, tau1;
                    sample(inner_g, k, m, xi1, tau1);
                    const double x2 = xi - xi1, t2 = tau - tau1;
                    const bool ok = x2 >= xlo - 1e-12 && x2 <= xhi + 1e-12 &&
                                    std::abs(t2 - 4.0 * x2 * x2 * x2) <= 3.0 && target.contains(x2, t2);
                    ++rep.checked;
                    if (!ok) ++rep.violations;
                }
        }
    return rep;
}

// ---- scaling ----

Construction construction_for(double alpha) {
    if (!(alpha > 0.0)) fail(ErrorKind::ParameterOutOfRange, "alpha", "alpha must be positive");
    if (alpha == 4.0) return Construction::Alpha4;
    if (alpha < 4.0 && alpha != 1.0) return Construction::Sub4;
    return Construction::Sup4;
}

std::string to_string(Construction c) {
    switch (c) {
        case Construction::Alpha4: return "alpha4";
        case Construction::Sub4: return "sub4";
        case Construction::Sup4: return "sup4";
    }
    return "?";
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::ParameterOutOfRange, "x", "need matching sizes >= 2");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (!(std::abs(den) > 0.0)) fail(ErrorKind::ParameterOutOfRange, "x", "abscissae must not all coincide");
    return (n * sxy - sx * sy) / den;
}

ScalingResult counterexample_scaling(double alpha, double s, const std::vector<double>& N_list, double b) {
    if (N_list.size() < 3) fail(ErrorKind::ParameterOutOfRange, "N_list", "need at least three values of N");
    ScalingResult res;
    res.alpha = alpha;
    res.s = s;
    res.b = b;
    res.construction = construction_for(alpha);

    MultiplierSpec mspec;
    mspec.s = s;
    mspec.b = b;
    mspec.b_prime = b;
    mspec.alpha = alpha;
    mspec.which = MultiplierKind::QPrime;
    mspec.drop_low_frequency = true;
    mspec.validate();

    std::vector<double> Ns, thetas, ratios;
    for (double N : N_list) {
        std::vector<RectangleSpec> f, g;
        RectangleSpec out;
        switch (res.construction) {
            case Construction::Alpha4:
                f = g = {rects::a4_plus(N)};
                out = rects::a1_tilde_plus(N);
                break;
            case Construction::Sub4:
                f = {rects::a_alpha(N, alpha)};
                g = {rects::a_alpha_tilde(N, alpha)};
                out = rects::delta_box(N, alpha);
                break;
            case Construction::Sup4:
                f = g = {rects::a_alpha_plus(N, alpha), rects::a_alpha_minus(N, alpha)};
                out = rects::origin_box(N, alpha);
                break;
        }
        ScalingRow row;
        row.N = N;
        for (const auto& r : f) row.cf_norm += c_norm_squared(r);
        for (const auto& r : g) row.cg_norm += c_norm_squared(r);
        row.cf_norm = std::sqrt(row.cf_norm);
        row.cg_norm = std::sqrt(row.cg_norm);
        row.theta_norm = theta_norm(mspec, f, g, out);
        const double denom = row.cf_norm * row.cg_norm;
        row.ratio = denom > 0.0 ? row.theta_norm / denom : 0.0;
        if (!res.rows.empty() && row.theta_norm > 0.0 && res.rows.back().theta_norm > 0.0)
            row.local_slope = std::log(row.theta_norm / res.rows.back().theta_norm) / std::log(N / res.rows.back().N);
        res.rows.push_back(row);
        if (row.theta_norm > 0.0 && N > 0.0) {
            Ns.push_back(N);
            thetas.push_back(row.theta_norm);
            ratios.push_back(row.ratio);
        }
    }
    if (Ns.size() < 2)
        fail(ErrorKind::NotEnoughSignal, "N_list", "Theta vanishes for all but at most one N; no slope can be fitted");
    res.slope = loglog_slope(Ns, thetas);
    res.ratio_slope = loglog_slope(Ns, ratios);
    return res;
}

}  // namespace mb
