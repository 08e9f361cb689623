#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

namespace mb {

using cplx = std::complex<double>;

struct ContourConstants {
    static cplx sigma() { return std::polar(1.0, 2.0 * std::numbers::pi / 3.0); }
    static cplx a() { return std::polar(1.0, std::numbers::pi / 3.0); }
    static constexpr double a_R = 0.5;
    static constexpr double a_I = 0.8660254037844386;
};

/// Nodes on (0, R] shared by both rays of the sector boundary, plus the pole i*gamma
/// when it lies inside the sector (gamma > 0).
struct ContourQuadrature {
    double R = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::optional<cplx> pole;

    bool residue_active() const { return pole.has_value(); }
};

/// Uniform composite Gauss-Legendre panels, at least nq nodes (rounded up to a multiple of 8).
ContourQuadrature build_contour(double R, std::size_t nq, double gamma);

/// As above, with panels refined so no panel carries more than `budget` radians of
/// phase for the local rate `rate(r)`.
ContourQuadrature build_contour(double R, std::size_t nq, double gamma,
                                const std::function<double(double)>& rate, double budget);

/// Sum over nodes of w * [F(a r) a - F(a^2 r) a^2]: the right ray runs outward,
/// the left ray inward.
cplx integrate_boundary(const std::function<cplx(cplx)>& F, const ContourQuadrature& quad);

/// Transforms needed by the residue at i*gamma.
struct ResidueTransforms {
    cplx data_at_sigma2 = 0.0;     // u0hat(i sigma^2 gamma)
    cplx data_at_sigma = 0.0;      // u0hat(i sigma gamma)
    cplx forcing_at_sigma2 = 0.0;  // F(i sigma^2 gamma, T)
    cplx forcing_at_sigma = 0.0;   // F(i sigma gamma, T)
    cplx boundary = 0.0;           // phi~(-i gamma^3, T)
};

/// Both residue contributions of the Robin formula at (x, t).
cplx residue_term(double gamma, double alpha, const ResidueTransforms& d, double x, double t);

}  // namespace mb
