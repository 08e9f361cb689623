#include "mb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>

#include "mb/error.hpp"

namespace mb::quad {

namespace {

struct Gl8 {
    std::array<double, 8> x{}, w{};
    Gl8() {
        using rule = boost::math::quadrature::gauss<double, 8>;
        const auto& ax = rule::abscissa();
        const auto& wt = rule::weights();
        for (int i = 0; i < 4; ++i) {
            x[3 - i] = -ax[i];
            x[4 + i] = ax[i];
            w[3 - i] = wt[i];
            w[4 + i] = wt[i];
        }
    }
};

const Gl8& gl8() {
    static const Gl8 rule;
    return rule;
}

}  // namespace

const std::array<double, 8>& gl8_nodes() { return gl8().x; }
const std::array<double, 8>& gl8_weights() { return gl8().w; }

NodeSet composite_gl8(std::span<const double> breaks) {
    NodeSet out;
    const auto& x = gl8_nodes();
    const auto& w = gl8_weights();
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        for (int k = 0; k < 8; ++k) {
            out.nodes.push_back(mid + half * x[k]);
            out.weights.push_back(half * w[k]);
        }
    }
    return out;
}

std::vector<double> phase_graded_breaks(double a, double b, const std::function<double(double)>& rate,
                                        double budget, std::size_t min_panels) {
    const double hmax = (b - a) / static_cast<double>(std::max<std::size_t>(min_panels, 1));
    std::vector<double> breaks{a};
    double r = a;
    while (r < b) {
        double h = std::min(hmax, budget / std::max(rate(r), 1e-300));
        h = std::min(h, budget / std::max(rate(std::min(r + h, b)), 1e-300));
        if (r + h >= b || b - (r + h) < 1e-12 * (b - a)) {
            r = b;
        } else {
            r += h;
        }
        breaks.push_back(r);
    }
    return breaks;
}

Stencil lagrange8(double p, std::size_t n) {
    Stencil st{};
    const double cell = std::floor(p);
    long start = static_cast<long>(cell) - 3;
    start = std::clamp(start, 0L, static_cast<long>(n) - 8);
    st.start = static_cast<std::size_t>(start);
    const double q = p - static_cast<double>(start);
    for (int k = 0; k < 8; ++k) {
        double num = 1.0, den = 1.0;
        for (int m = 0; m < 8; ++m) {
            if (m == k) continue;
            num *= q - m;
            den *= k - m;
        }
        st.w[k] = num / den;
    }
    return st;
}

namespace {

// Interpolation tables for one sample interval split into `sub` GL-8 panels.
// Entry [o][q][k]: weight of stencil sample k at node q of an interval whose
// left sample sits o places after the stencil start.
struct IntervalTable {
    std::size_t sub = 1;
    std::vector<double> theta;   // node positions within the interval, in (0,1)
    std::vector<double> weight;  // GL weights scaled to an interval of unit length
    std::vector<std::array<double, 8>> lag[8];
};

const IntervalTable& interval_table(std::size_t sub) {
    static std::mutex mu;
    static std::map<std::size_t, IntervalTable> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(sub);
    if (it != cache.end()) return it->second;
    IntervalTable tab;
    tab.sub = sub;
    const auto& x = gl8_nodes();
    const auto& w = gl8_weights();
    for (std::size_t s = 0; s < sub; ++s) {
        for (int k = 0; k < 8; ++k) {
            tab.theta.push_back((static_cast<double>(s) + 0.5 * (1.0 + x[k])) / static_cast<double>(sub));
            tab.weight.push_back(0.5 * w[k] / static_cast<double>(sub));
        }
    }
    for (int o = 0; o < 8; ++o) {
        for (double th : tab.theta) {
            std::array<double, 8> lw{};
            const double q = o + th;
            for (int k = 0; k < 8; ++k) {
                double num = 1.0, den = 1.0;
                for (int m = 0; m < 8; ++m) {
                    if (m == k) continue;
                    num *= q - m;
                    den *= k - m;
                }
                lw[k] = num / den;
            }
            tab.lag[o].push_back(lw);
        }
    }
    return cache.emplace(sub, std::move(tab)).first->second;
}

constexpr double kPhaseBudget = 2.0;

// c[o][k]: contribution of stencil sample k to the integral over one interval
// (length h, left end at 0) of exp(-i omega x) times the interpolant.
std::array<std::array<cplx, 8>, 8> interval_weights(double h, cplx omega) {
    const auto sub = static_cast<std::size_t>(
        std::max(1.0, std::ceil(std::abs(omega) * h / kPhaseBudget)));
    const IntervalTable& tab = interval_table(sub);
    const cplx I(0.0, 1.0);
    std::vector<cplx> phase(tab.theta.size());
    for (std::size_t q = 0; q < phase.size(); ++q)
        phase[q] = h * tab.weight[q] * std::exp(-I * omega * (tab.theta[q] * h));
    std::array<std::array<cplx, 8>, 8> c{};
    for (int o = 0; o < 8; ++o) {
        for (std::size_t q = 0; q < phase.size(); ++q) {
            const auto& lw = tab.lag[o][q];
            for (int k = 0; k < 8; ++k) c[o][k] += phase[q] * lw[k];
        }
    }
    return c;
}

void check_growth(std::size_t n, double h, cplx omega) {
    const double span = h * static_cast<double>(n - 1);
    if (std::imag(omega) * span > kOverflowGuard)
        throw Error(ErrorKind::DivergentIntegrand, "omega",
                    "exponential growth exp(Im(omega)*span) exceeds the overflow guard");
}

std::size_t stencil_start(std::size_t i, std::size_t n) {
    const long s = std::clamp(static_cast<long>(i) - 3, 0L, static_cast<long>(n) - 8);
    return static_cast<std::size_t>(s);
}

}  // namespace

std::vector<cplx> oscillatory_weights(std::size_t n, double h, cplx omega) {
    if (n < 8) throw Error(ErrorKind::InvariantViolation, "n", "need at least 8 samples");
    check_growth(n, h, omega);
    const auto c = interval_weights(h, omega);
    const cplx I(0.0, 1.0);
    const cplx step = std::exp(-I * omega * h);
    std::vector<cplx> W(n, cplx(0.0));
    cplx E(1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t s = stencil_start(i, n);
        const std::size_t o = i - s;
        for (int k = 0; k < 8; ++k) W[s + k] += E * c[o][k];
        E = (i % 64 == 63) ? std::exp(-I * omega * (h * static_cast<double>(i + 1))) : E * step;
    }
    return W;
}

void cumulative_oscillatory(std::span<const cplx> g, double h, cplx omega, std::span<cplx> out) {
    const std::size_t n = g.size();
    if (n < 8) throw Error(ErrorKind::InvariantViolation, "n", "need at least 8 samples");
    check_growth(n, h, omega);
    const auto c = interval_weights(h, omega);
    const cplx I(0.0, 1.0);
    const cplx step = std::exp(-I * omega * h);
    cplx E(1.0), acc(0.0);
    out[0] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t s = stencil_start(i, n);
        const std::size_t o = i - s;
        cplx part(0.0);
        for (int k = 0; k < 8; ++k) part += c[o][k] * g[s + k];
        acc += E * part;
        out[i + 1] = acc;
        E = (i % 64 == 63) ? std::exp(-I * omega * (h * static_cast<double>(i + 1))) : E * step;
    }
}

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int m) {
    const int n = static_cast<int>(x.size()) - 1;
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
    double c1 = 1.0, c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

double simpson(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    if (n == 3) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
    auto simpson_even = [&](std::size_t first, std::size_t last) {
        double s = f[first] + f[last];
        for (std::size_t i = first + 1; i < last; ++i) s += ((i - first) % 2 ? 4.0 : 2.0) * f[i];
        return s * h / 3.0;
    };
    if ((n - 1) % 2 == 0) return simpson_even(0, n - 1);
    const std::size_t k = n - 4;
    return simpson_even(0, k) + 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
}

}  // namespace mb::quad
