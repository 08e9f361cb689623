#include "mb/whole_line.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <fftw3.h>

#include "mb/error.hpp"
#include "mb/quadrature.hpp"

namespace mb {

namespace {

using cplx = std::complex<double>;

class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n) {
        in_ = fftw_alloc_real(n);
        out_ = fftw_alloc_complex(n / 2 + 1);
        fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), out_, in_, FFTW_ESTIMATE);
    }
    ~RealFft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(in_);
        fftw_free(out_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::vector<cplx> forward(std::span<const double> f) {
        std::copy(f.begin(), f.end(), in_);
        fftw_execute(fwd_);
        std::vector<cplx> s(n_ / 2 + 1);
        for (std::size_t k = 0; k < s.size(); ++k) s[k] = cplx(out_[k][0], out_[k][1]);
        return s;
    }
    std::vector<double> backward(std::span<const cplx> s) {
        for (std::size_t k = 0; k < s.size(); ++k) {
            out_[k][0] = s[k].real();
            out_[k][1] = s[k].imag();
        }
        fftw_execute(bwd_);
        std::vector<double> f(in_, in_ + n_);
        for (double& v : f) v /= static_cast<double>(n_);
        return f;
    }

private:
    std::size_t n_;
    double* in_;
    fftw_complex* out_;
    fftw_plan fwd_, bwd_;
};

// Spectrum of samples on a grid starting at x0 carries a phase exp(-i xi x0)
// relative to the DFT; it cancels in the round trip, so it is ignored here.

}  // namespace

double LineGrid::freq(std::size_t k) const {
    const double base = 2.0 * std::numbers::pi / period();
    const auto kk = static_cast<long>(k);
    const auto nn = static_cast<long>(n);
    return base * static_cast<double>(kk <= nn / 2 ? kk : kk - nn);
}

void check_spectral_tail(std::span<const double> f, const std::string& field) {
    RealFft fft(f.size());
    const auto s = fft.forward(f);
    double peak = 0.0, tail = 0.0;
    const std::size_t cut = (s.size() * 9) / 10;
    for (std::size_t k = 0; k < s.size(); ++k) {
        peak = std::max(peak, std::abs(s[k]));
        if (k >= cut) tail = std::max(tail, std::abs(s[k]));
    }
    if (peak > 0.0 && tail > 1e-6 * peak)
        throw Error(ErrorKind::AliasingDetected, field,
                    "spectral tail " + std::to_string(tail / peak) + " of peak exceeds 1e-6");
}

namespace {

void check_grid(const LineGrid& g, std::size_t samples) {
    if (g.n < 8 || samples != g.n) throw Error(ErrorKind::InvariantViolation, "n", "sample count must match the line grid");
}

}  // namespace

Field2D solve_ivp_homogeneous_series(std::span<const double> V0, const LineGrid& g, double alpha, double dt,
                                     std::size_t nt) {
    check_grid(g, V0.size());
    check_spectral_tail(V0, "V0");
    RealFft fft(g.n);
    const auto s0 = fft.forward(V0);
    Field2D out(g.n, nt);
    std::vector<cplx> s(s0.size());
    const cplx I(0.0, 1.0);
    for (std::size_t m = 0; m < nt; ++m) {
        const double t = dt * static_cast<double>(m);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double xi = g.freq(k);
            s[k] = s0[k] * std::exp(I * (alpha * xi * xi * xi * t));
        }
        if (g.n % 2 == 0) s.back() = s0.back() * std::cos(alpha * std::pow(g.freq(g.n / 2), 3) * t);
        const auto f = fft.backward(s);
        std::copy(f.begin(), f.end(), out.slice(m).begin());
    }
    return out;
}

std::vector<double> solve_ivp_homogeneous(std::span<const double> V0, const LineGrid& g, double alpha, double t) {
    const Field2D series = solve_ivp_homogeneous_series(V0, g, alpha, t, 2);
    const auto last = series.slice(1);
    return {last.begin(), last.end()};
}

Field2D solve_ivp_forced(const Field2D& w, const LineGrid& g, double dt, double alpha, std::size_t nt_out) {
    const std::size_t nt = w.nt();
    if (nt_out < nt) nt_out = nt;
    check_grid(g, w.nx());
    Field2D out(g.n, nt_out);
    if (w.max_abs() == 0.0) return out;
    RealFft fft(g.n);
    const std::size_t nk = g.n / 2 + 1;
    std::vector<std::vector<cplx>> spectra(nk, std::vector<cplx>(nt));
    for (std::size_t m = 0; m < nt; ++m) {
        check_spectral_tail(w.slice(m), "w");
        const auto s = fft.forward(w.slice(m));
        for (std::size_t k = 0; k < nk; ++k) spectra[k][m] = s[k];
    }
    const cplx I(0.0, 1.0);
    std::vector<std::vector<cplx>> result(nt_out, std::vector<cplx>(nk));
    std::vector<cplx> cum(nt);
    for (std::size_t k = 0; k < nk; ++k) {
        double mag = 0.0;
        for (const cplx& v : spectra[k]) mag = std::max(mag, std::abs(v));
        if (mag == 0.0) continue;
        const double xi = g.freq(k);
        const double omega = alpha * xi * xi * xi;
        quad::cumulative_oscillatory(spectra[k], dt, cplx(omega), cum);
        for (std::size_t m = 0; m < nt_out; ++m) {
            const double t = dt * static_cast<double>(m);
            const cplx acc = cum[std::min(m, nt - 1)];
            result[m][k] = std::exp(I * (omega * t)) * acc;
        }
    }
    for (std::size_t m = 0; m < nt_out; ++m) {
        if (g.n % 2 == 0) result[m].back() = result[m].back().real();
        const auto f = fft.backward(result[m]);
        std::copy(f.begin(), f.end(), out.slice(m).begin());
    }
    return out;
}

double spectral_derivative(std::span<const double> f, const LineGrid& g, std::size_t i) {
    check_grid(g, f.size());
    RealFft fft(g.n);
    auto s = fft.forward(f);
    const cplx I(0.0, 1.0);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= I * g.freq(k);
    if (g.n % 2 == 0) s.back() = 0.0;
    return fft.backward(s)[i];
}

}  // namespace mb
