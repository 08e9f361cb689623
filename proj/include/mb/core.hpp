#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mb {

enum class BoundaryKind { Dirichlet, Neumann, Robin };

std::string_view to_string(BoundaryKind kind);
BoundaryKind parse_boundary_kind(std::string_view text);

/// Dispersion ratio, Robin coefficients and boundary kind.
struct MBParams {
    double alpha = 1.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    BoundaryKind boundary = BoundaryKind::Dirichlet;

    void validate() const;
};

struct SobolevIndices {
    double s = 0.0;
    double b = 0.45;
    double b_prime = 0.45;
    double theta = 0.55;
    double theta_prime = 0.55;

    /// Contraction exponent of the s >= 0 and -3/4 < s < 0 branches.
    double beta1() const;
    double beta() const;
    void validate() const;
};

struct GridSpec {
    double L = 40.0;
    std::size_t nx = 401;
    double T = 0.1;
    std::size_t nt = 51;
    double R = 8.0;
    std::size_t nq = 64;

    double dx() const { return L / static_cast<double>(nx - 1); }
    double dt() const { return T / static_cast<double>(nt - 1); }
    double x(std::size_t j) const { return dx() * static_cast<double>(j); }
    double t(std::size_t n) const { return dt() * static_cast<double>(n); }
    std::vector<double> xs() const;
    std::vector<double> ts() const;
    void validate() const;
};

/// Real samples on an nx-by-nt space-time grid, stored time-major.
class Field2D {
public:
    Field2D() = default;
    Field2D(std::size_t nx, std::size_t nt, double fill = 0.0)
        : nx_(nx), nt_(nt), data_(nx * nt, fill) {}

    std::size_t nx() const { return nx_; }
    std::size_t nt() const { return nt_; }
    double& operator()(std::size_t j, std::size_t n) { return data_[n * nx_ + j]; }
    double operator()(std::size_t j, std::size_t n) const { return data_[n * nx_ + j]; }
    std::span<double> slice(std::size_t n) { return {data_.data() + n * nx_, nx_}; }
    std::span<const double> slice(std::size_t n) const { return {data_.data() + n * nx_, nx_}; }
    std::vector<double> column(std::size_t j) const;
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    bool all_finite() const;
    double max_abs() const;

private:
    std::size_t nx_ = 0;
    std::size_t nt_ = 0;
    std::vector<double> data_;
};

/// Sampled initial data, boundary data and forcing for both equations.
struct ProblemData {
    std::vector<double> u0, v0;
    std::vector<double> bdry_u, bdry_v;
    Field2D f1, f2;

    static ProblemData zeros(const GridSpec& grid);
    void check_shape(const GridSpec& grid) const;
};

/// Largest Dirichlet corner mismatch |u0(0)-g0(0)|, |v0(0)-h0(0)|, or the
/// Robin analogue using one-sided derivatives of the initial data.
double compatibility_mismatch(const MBParams& p, const GridSpec& grid, const ProblemData& data);

struct SolutionField {
    GridSpec grid;
    Field2D u, v;
    nlohmann::json meta = nlohmann::json::object();
};

/// Smooth step: 0 for z <= 0, 1 for z >= 1, infinitely differentiable.
double smooth_step(double z);

/// psi(t / T_star) with psi = 1 on [-1/2, 1/2] and supported in (-1, 1).
double time_localizer(double t, double T_star);

/// Relative discrete L2 difference ||a - b|| / ||b|| (absolute if b = 0).
double relative_l2(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

}  // namespace mb
