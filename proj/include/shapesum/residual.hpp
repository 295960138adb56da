#pragma once

#include <cmath>
#include <vector>

#include "shapesum/common.hpp"
#include "shapesum/eisenstein.hpp"
#include "shapesum/lattice_sum.hpp"
#include "shapesum/quadrature.hpp"
#include "shapesum/shapes.hpp"

namespace shapesum {

// E(K, tau): the shape-dependent offset between the lattice evaluation of the
// weight-2 series over dilations of K and its reference value.
struct ResidualValue {
    cplx value;
    Method method;
    double error_estimate = 0.0;
};

namespace detail {

inline std::vector<double> integration_seeds(const ShapeSpec& s) {
    switch (s.kind()) {
        case ShapeKind::Rectangle:
        case ShapeKind::Diamond:
            return {};  // integrand smooth on the open interval
        case ShapeKind::Disk:
            // Square-root behavior at the right endpoint; pre-split panels
            // approaching it dyadically so refinement starts near the blow-up
            // of the derivative.
            return {0.75, 0.9375, 0.984375, 0.99609375};
        case ShapeKind::Custom: {
            const auto& xs = s.grid_x();
            if (xs.size() < 3) return {};
            return {xs.begin() + 1, xs.end() - 1};
        }
    }
    return {};
}

inline double closed_form_ulp_bound(cplx v) {
    return 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(v));
}

}  // namespace detail

// Boundary integral representation
//
//   E(K, tau) = 4 * int_0^A h(x) / (tau^2 x^2 - h(x)^2) dx.
//
// The denominator cannot vanish on the upper half plane, so the integrand is
// bounded; kinks of h are passed to the quadrature as panel seeds.
inline ResidualValue residual_integral(const ShapeSpec& shape, const TauPoint& tau,
                                       const QuadratureConfig& cfg = {}) {
    ensure_valid(shape);
    const double a = support(shape);
    const cplx t2 = tau.value() * tau.value();
    const auto integrand = [&](double x) -> cplx {
        const double h = height(shape, x);
        return 4.0 * h / (t2 * (x * x) - h * h);
    };
    const auto seeds = detail::integration_seeds(shape);
    const auto q = integrate(integrand, 0.0, a, cfg, seeds);
    return {q.value, Method::Integral, q.error_estimate};
}

// Closed forms for the builtin shapes. All logarithms stay on the principal
// branch: Im(c tau) > 0 keeps 1 +- c tau off the negative real axis, and
// Re(-i tau) = Im(tau) > 0 does the same for the diamond.
inline ResidualValue residual_closed_form(const ShapeSpec& shape,
                                          const TauPoint& tau) {
    const cplx t = tau.value();
    cplx v;
    switch (shape.kind()) {
        case ShapeKind::Rectangle: {
            const double c = shape.aspect();
            v = -(2.0 / t) * (std::log(1.0 + c * t) - std::log(1.0 - c * t));
            break;
        }
        case ShapeKind::Disk:
            v = cplx(0.0, -2.0 * pi) / (t + cplx(0.0, 1.0));
            break;
        case ShapeKind::Diamond:
            v = (4.0 * std::log(cplx(0.0, -1.0) * t) + cplx(0.0, 2.0 * pi) * t) /
                (1.0 - t * t);
            break;
        case ShapeKind::Custom:
            throw domain_error(
                "no closed form for custom shapes; use the integral method");
    }
    return {v, Method::ClosedForm, detail::closed_form_ulp_bound(v)};
}

// Lattice evaluation: difference of the shape summation and the reference
// series. Slowest path, but it exercises the defining limit directly.
inline ResidualValue residual_lattice(const ShapeSpec& shape, const TauPoint& tau,
                                      const SumConfig& config = {},
                                      double ref_tol = 1e-12) {
    const auto lattice = g2_shape(shape, tau, config);
    const auto ref = g2_ref(tau, ref_tol);
    return {lattice.value - ref.value, Method::Lattice,
            lattice.error_estimate + ref.error_estimate};
}

// Best available evaluation: closed form when the shape has one, boundary
// integral otherwise.
inline ResidualValue residual_auto(const ShapeSpec& shape, const TauPoint& tau,
                                   const QuadratureConfig& cfg = {}) {
    if (shape.kind() == ShapeKind::Custom) {
        return residual_integral(shape, tau, cfg);
    }
    return residual_closed_form(shape, tau);
}

// E(K^T, tau) - [tau^-2 E(K, -1/tau) - 2 pi i / tau]; zero up to quadrature
// error for every admissible shape.
inline cplx residual_functional_defect(const ShapeSpec& shape, const TauPoint& tau,
                                       const QuadratureConfig& cfg = {}) {
    const cplx t = tau.value();
    const auto lhs = residual_integral(transpose(shape), tau, cfg);
    const auto rhs = residual_integral(shape, tau.inverted(), cfg);
    return lhs.value - (rhs.value / (t * t) - cplx(0.0, 2.0 * pi) / t);
}

// E(s K, tau) - E(K, tau); the boundary integral is invariant under dilation
// of K, so this vanishes up to quadrature error. Exact piecewise-linear
// scaling exists for every shape except the Disk.
inline cplx residual_scaling_defect(const ShapeSpec& shape, double scale,
                                    const TauPoint& tau,
                                    const QuadratureConfig& cfg = {}) {
    const auto base = residual_integral(shape, tau, cfg);
    const auto dilated = residual_integral(scaled(shape, scale), tau, cfg);
    return dilated.value - base.value;
}

}  // namespace shapesum
