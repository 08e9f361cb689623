#include "mb/contour.hpp"

#include <cmath>
#include <string>

#include "mb/error.hpp"
#include "mb/quadrature.hpp"

namespace mb {

namespace {

ContourQuadrature from_breaks(double R, const std::vector<double>& breaks, double gamma) {
    ContourQuadrature q;
    q.R = R;
    const auto ns = quad::composite_gl8(breaks);
    q.nodes = ns.nodes;
    q.weights = ns.weights;
    if (gamma > 0.0) q.pole = cplx(0.0, gamma);
    return q;
}

}  // namespace

ContourQuadrature build_contour(double R, std::size_t nq, double gamma) {
    const std::size_t panels = std::max<std::size_t>(1, (nq + 7) / 8);
    std::vector<double> breaks(panels + 1);
    for (std::size_t p = 0; p <= panels; ++p) breaks[p] = R * static_cast<double>(p) / static_cast<double>(panels);
    return from_breaks(R, breaks, gamma);
}

ContourQuadrature build_contour(double R, std::size_t nq, double gamma,
                                const std::function<double(double)>& rate, double budget) {
    const std::size_t panels = std::max<std::size_t>(1, (nq + 7) / 8);
    return from_breaks(R, quad::phase_graded_breaks(0.0, R, rate, budget, panels), gamma);
}

cplx integrate_boundary(const std::function<cplx(cplx)>& F, const ContourQuadrature& quad) {
    const cplx a = ContourConstants::a();
    const cplx a2 = a * a;
    cplx acc(0.0);
    for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
        const double r = quad.nodes[k];
        const cplx right = F(a * r);
        const cplx left = F(a2 * r);
        if (!std::isfinite(right.real()) || !std::isfinite(right.imag()))
            throw Error(ErrorKind::NonFiniteIntegrand, "right ray r=" + std::to_string(r), "integrand not finite");
        if (!std::isfinite(left.real()) || !std::isfinite(left.imag()))
            throw Error(ErrorKind::NonFiniteIntegrand, "left ray r=" + std::to_string(r), "integrand not finite");
        acc += quad.weights[k] * (right * a - left * a2);
    }
    return acc;
}

cplx residue_term(double gamma, double alpha, const ResidueTransforms& d, double x, double t) {
    if (!(gamma > 0.0)) throw Error(ErrorKind::InvariantViolation, "gamma", "residue needs gamma > 0");
    const cplx sigma = ContourConstants::sigma();
    const double growth = -gamma * x + alpha * gamma * gamma * gamma * t;
    if (growth > quad::kOverflowGuard)
        throw Error(ErrorKind::DivergentIntegrand, "gamma", "residue exponential overflows");
    const double e = std::exp(growth);
    const cplx bracket = d.data_at_sigma2 + d.forcing_at_sigma2 - d.data_at_sigma - d.forcing_at_sigma;
    return -((2.0 + sigma) * gamma / sigma) * bracket * e - 3.0 * alpha * gamma * gamma * d.boundary * e;
}

}  // namespace mb
