#include "mb/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>

#include "mb/error.hpp"

namespace mb {

std::string_view to_string(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::Dirichlet: return "dirichlet";
        case BoundaryKind::Neumann: return "neumann";
        case BoundaryKind::Robin: return "robin";
    }
    return "dirichlet";
}

BoundaryKind parse_boundary_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "dirichlet") return BoundaryKind::Dirichlet;
    if (lower == "neumann") return BoundaryKind::Neumann;
    if (lower == "robin") return BoundaryKind::Robin;
    fail(ErrorKind::InvariantViolation, "boundary", "unknown boundary kind '" + lower + "'");
}

void MBParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        fail(ErrorKind::InvariantViolation, "alpha", "alpha must be a positive finite number");
    if (!std::isfinite(gamma1)) fail(ErrorKind::InvariantViolation, "gamma1", "not finite");
    if (!std::isfinite(gamma2)) fail(ErrorKind::InvariantViolation, "gamma2", "not finite");
    if (boundary == BoundaryKind::Neumann) {
        if (gamma1 != 0.0)
            fail(ErrorKind::InvariantViolation, "gamma1", "Neumann boundary requires gamma1 = 0");
        if (gamma2 != 0.0)
            fail(ErrorKind::InvariantViolation, "gamma2", "Neumann boundary requires gamma2 = 0");
    }
}

double SobolevIndices::beta1() const {
    if (s >= 0.0) return 1.0 / 36.0;
    return (s + 0.75) / 96.0;
}

double SobolevIndices::beta() const { return std::min(beta1(), (3.0 - s) / 36.0); }

void SobolevIndices::validate() const {
    if (!std::isfinite(s)) fail(ErrorKind::InvariantViolation, "s", "not finite");
    if (!(b > 0.0 && b < 0.5)) fail(ErrorKind::InvariantViolation, "b", "b must lie in (0, 1/2)");
    if (!(b_prime > 0.0 && b_prime <= b))
        fail(ErrorKind::InvariantViolation, "b_prime", "b_prime must lie in (0, b]");
    if (!(theta > 0.5 && theta < 1.0))
        fail(ErrorKind::InvariantViolation, "theta", "theta must lie in (1/2, 1)");
    if (!(theta_prime > 0.5 && theta_prime <= theta))
        fail(ErrorKind::InvariantViolation, "theta_prime", "theta_prime must lie in (1/2, theta]");
    if (s <= -0.75)
        fail(ErrorKind::InvariantViolation, "s", "s must exceed -3/4 for the contraction exponent");
}

std::vector<double> GridSpec::xs() const {
    std::vector<double> out(nx);
    for (std::size_t j = 0; j < nx; ++j) out[j] = x(j);
    return out;
}

std::vector<double> GridSpec::ts() const {
    std::vector<double> out(nt);
    for (std::size_t n = 0; n < nt; ++n) out[n] = t(n);
    return out;
}

void GridSpec::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) fail(ErrorKind::InvariantViolation, "L", "L must be positive");
    if (!(T > 0.0)) fail(ErrorKind::InvariantViolation, "T", "T must be positive");
    if (!(T < 0.5)) fail(ErrorKind::InvariantViolation, "T", "T must be below 1/2");
    if (!(R > 0.0) || !std::isfinite(R)) fail(ErrorKind::InvariantViolation, "R", "R must be positive");
    if (nx < 8) fail(ErrorKind::InvariantViolation, "nx", "nx must be at least 8");
    if (nt < 8) fail(ErrorKind::InvariantViolation, "nt", "nt must be at least 8");
    if (nq < 8) fail(ErrorKind::InvariantViolation, "nq", "nq must be at least 8");
}

std::vector<double> Field2D::column(std::size_t j) const {
    std::vector<double> out(nt_);
    for (std::size_t n = 0; n < nt_; ++n) out[n] = (*this)(j, n);
    return out;
}

bool Field2D::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Field2D::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

ProblemData ProblemData::zeros(const GridSpec& grid) {
    ProblemData d;
    d.u0.assign(grid.nx, 0.0);
    d.v0.assign(grid.nx, 0.0);
    d.bdry_u.assign(grid.nt, 0.0);
    d.bdry_v.assign(grid.nt, 0.0);
    d.f1 = Field2D(grid.nx, grid.nt);
    d.f2 = Field2D(grid.nx, grid.nt);
    return d;
}

void ProblemData::check_shape(const GridSpec& grid) const {
    auto need = [](bool ok, const char* field) {
        if (!ok) fail(ErrorKind::InvariantViolation, field, "sample count does not match the grid");
    };
    need(u0.size() == grid.nx, "u0");
    need(v0.size() == grid.nx, "v0");
    need(bdry_u.size() == grid.nt, "bdry_u");
    need(bdry_v.size() == grid.nt, "bdry_v");
    need(f1.nx() == grid.nx && f1.nt() == grid.nt, "f1");
    need(f2.nx() == grid.nx && f2.nt() == grid.nt, "f2");
}

namespace {

double one_sided_derivative(std::span<const double> f, double dx) {
    return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * dx);
}

}  // namespace

double compatibility_mismatch(const MBParams& p, const GridSpec& grid, const ProblemData& data) {
    if (p.boundary == BoundaryKind::Dirichlet) {
        return std::max(std::abs(data.u0[0] - data.bdry_u[0]), std::abs(data.v0[0] - data.bdry_v[0]));
    }
    const double du = one_sided_derivative(data.u0, grid.dx()) + p.gamma1 * data.u0[0];
    const double dv = one_sided_derivative(data.v0, grid.dx()) + p.gamma2 * data.v0[0];
    return std::max(std::abs(du - data.bdry_u[0]), std::abs(dv - data.bdry_v[0]));
}

namespace {

double bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

// Fixed 16-panel Gauss rule: the bump is flat at both ends, so this is at
// rounding level and about 600x cheaper than adaptive GK.
double bump_integral(double upper) {
    using boost::math::quadrature::gauss;
    constexpr int kPanels = 16;
    const double h = (upper + 1.0) / kPanels;
    double acc = 0.0;
    for (int k = 0; k < kPanels; ++k) acc += gauss<double, 30>::integrate(bump, -1.0 + k * h, -1.0 + (k + 1) * h);
    return acc;
}

}  // namespace

double smooth_step(double z) {
    if (z <= 0.0) return 0.0;
    if (z >= 1.0) return 1.0;
    static const double total = bump_integral(1.0);
    return std::clamp(bump_integral(2.0 * z - 1.0) / total, 0.0, 1.0);
}

double time_localizer(double t, double T_star) {
    const double y = std::abs(t / T_star);
    if (y <= 0.5) return 1.0;
    if (y >= 1.0) return 0.0;
    return 1.0 - smooth_step(2.0 * (y - 0.5));
}

double l2_norm(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double relative_l2(std::span<const double> a, std::span<const double> b) {
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) num += (a[i] - b[i]) * (a[i] - b[i]);
    const double den = l2_norm(b);
    return den > 0.0 ? std::sqrt(num) / den : std::sqrt(num);
}

}  // namespace mb
