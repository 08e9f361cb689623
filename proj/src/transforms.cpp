#include "mb/transforms.hpp"

#include <algorithm>

#include "mb/error.hpp"
#include "mb/quadrature.hpp"

namespace mb {

namespace {

double spacing(std::size_t n, double span) { return span / static_cast<double>(n - 1); }

}  // namespace

cplx half_line_ft(std::span<const double> f, double L, cplx xi) {
    if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) return 0.0;
    const auto W = quad::oscillatory_weights(f.size(), spacing(f.size(), L), xi);
    cplx acc(0.0);
    for (std::size_t j = 0; j < f.size(); ++j) acc += W[j] * f[j];
    if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
        throw Error(ErrorKind::DivergentIntegrand, "xi", "half-line transform is not finite");
    return acc;
}

SpectralField half_line_ft(std::span<const double> f, double L, std::span<const cplx> xis) {
    SpectralField out;
    out.kind = SpectralKind::HalfLineFT;
    out.nodes.assign(xis.begin(), xis.end());
    for (cplx xi : xis) out.values.push_back(half_line_ft(f, L, xi));
    return out;
}

cplx time_transform(std::span<const double> g, cplx xi_cubed, double alpha, double t_end) {
    if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) return 0.0;
    const auto W = quad::oscillatory_weights(g.size(), spacing(g.size(), t_end), alpha * xi_cubed);
    cplx acc(0.0);
    for (std::size_t j = 0; j < g.size(); ++j) acc += W[j] * g[j];
    return acc;
}

std::vector<cplx> time_transform_cumulative(std::span<const double> g, cplx xi_cubed, double alpha,
                                            double t_end) {
    std::vector<cplx> gc(g.begin(), g.end()), out(g.size());
    quad::cumulative_oscillatory(gc, spacing(g.size(), t_end), alpha * xi_cubed, out);
    return out;
}

Eigen::MatrixXcd spatial_transform_table(const Field2D& f, double dx, std::span<const cplx> xis) {
    const std::size_t nx = f.nx(), nt = f.nt();
    Eigen::Map<const Eigen::MatrixXd> F(f.raw().data(), static_cast<Eigen::Index>(nx),
                                        static_cast<Eigen::Index>(nt));
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(xis.size()), static_cast<Eigen::Index>(nt));
    constexpr std::size_t block = 256;
    for (std::size_t b0 = 0; b0 < xis.size(); b0 += block) {
        const std::size_t nb = std::min(block, xis.size() - b0);
        Eigen::MatrixXd Wr(nb, nx), Wi(nb, nx);
        for (std::size_t k = 0; k < nb; ++k) {
            const auto W = quad::oscillatory_weights(nx, dx, xis[b0 + k]);
            for (std::size_t j = 0; j < nx; ++j) {
                Wr(k, j) = W[j].real();
                Wi(k, j) = W[j].imag();
            }
        }
        const Eigen::MatrixXd re = Wr * F;
        const Eigen::MatrixXd im = Wi * F;
        for (std::size_t k = 0; k < nb; ++k)
            for (std::size_t n = 0; n < nt; ++n)
                out(static_cast<Eigen::Index>(b0 + k), static_cast<Eigen::Index>(n)) =
                    cplx(re(k, n), im(k, n));
    }
    return out;
}

Eigen::MatrixXcd forcing_transform_table(const Field2D& f, double dx, double dt,
                                         std::span<const cplx> xis, double alpha) {
    const std::size_t nt = f.nt();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(xis.size()),
                                                  static_cast<Eigen::Index>(nt));
    if (f.max_abs() == 0.0) return out;
    const Eigen::MatrixXcd fhat = spatial_transform_table(f, dx, xis);
    std::vector<cplx> row(nt), cum(nt);
    for (std::size_t k = 0; k < xis.size(); ++k) {
        for (std::size_t n = 0; n < nt; ++n) row[n] = fhat(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
        const cplx xi = xis[k];
        quad::cumulative_oscillatory(row, dt, alpha * xi * xi * xi, cum);
        for (std::size_t n = 0; n < nt; ++n) out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = cum[n];
    }
    if (!out.allFinite()) throw Error(ErrorKind::DivergentIntegrand, "xi", "forcing transform is not finite");
    return out;
}

cplx forcing_transform(const Field2D& f, double L, double t, cplx xi, double alpha) {
    const double dx = spacing(f.nx(), L), dt = spacing(f.nt(), t);
    const cplx one[1] = {xi};
    const auto table = forcing_transform_table(f, dx, dt, one, alpha);
    return table(0, static_cast<Eigen::Index>(f.nt() - 1));
}

}  // namespace mb
