#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "shapesum/common.hpp"
#include "shapesum/eisenstein.hpp"
#include "shapesum/lattice_sum.hpp"
#include "shapesum/quadrature.hpp"
#include "shapesum/residual.hpp"
#include "shapesum/shapes.hpp"

namespace shapesum {

struct WeierstrassValue {
    cplx value;
    Method method;
    double error_estimate = 0.0;
};

// z written against the lattice basis: original z = reduced + m*tau + n.
struct ReducedPoint {
    cplx reduced;
    std::int64_t m = 0;
    std::int64_t n = 0;
};

// Shifts z by lattice vectors into the fundamental cell centered at the
// origin (|Im z'| <= Im(tau)/2, and the tau-adjusted real part in [-1/2,
// 1/2]). Exact half ties round to even so the reduction has no directional
// bias.
inline ReducedPoint reduce_to_fundamental(cplx z, const TauPoint& tau) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw domain_error("z must be finite");
    }
    const cplx t = tau.value();
    const double m = round_half_even(z.imag() / tau.im());
    const cplx after_m = z - m * t;
    const double n = round_half_even(after_m.real());
    return {after_m - n, static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)};
}

// Distance from an already reduced point to the nearest lattice point. The
// reduction bounds the offsets, so only the immediate neighbors can compete.
inline double lattice_distance(cplx reduced, const TauPoint& tau) {
    const cplx t = tau.value();
    double best = std::abs(reduced);
    for (int m = -1; m <= 1; ++m) {
        for (int n = -1; n <= 1; ++n) {
            const cplx w = static_cast<double>(m) * t + static_cast<double>(n);
            best = std::min(best, std::abs(reduced - w));
        }
    }
    return best;
}

inline constexpr double pole_guard = 1e-9;

namespace detail {

inline cplx require_off_lattice(cplx z, const TauPoint& tau) {
    const auto red = reduce_to_fundamental(z, tau);
    const double dist = lattice_distance(red.reduced, tau);
    if (dist < pole_guard) {
        throw domain_error("z is within " + std::to_string(pole_guard) +
                           " of a lattice point (distance " +
                           std::to_string(dist) + ")");
    }
    return red.reduced;
}

}  // namespace detail

// Reference evaluation of the elliptic function through its column form
//
//   p(z) = pi^2/sin^2(pi z) - pi^2/3
//        + sum_{m >= 1} pi^2 [ 1/sin^2(pi(z + m tau)) + 1/sin^2(pi(z - m tau))
//                              - 2/sin^2(pi m tau) ],
//
// evaluated after reduction of z, where the bracket decays geometrically.
inline WeierstrassValue wp_ref(cplx z, const TauPoint& tau, double tol = 1e-12) {
    if (!(tol >= 1e-14)) {
        throw config_error("series tolerance must be >= 1e-14");
    }
    const cplx zr = detail::require_off_lattice(z, tau);
    const cplx t = tau.value();

    const double r = std::exp(-2.0 * pi * tau.im());
    const double ratio = r / (1.0 - r);
    const double stop_mag = 0.25 * tol / std::max(ratio, 1e-3);

    CompensatedSum acc;
    acc.add(pi * pi * inv_sin_sq(pi * zr) - cplx(pi * pi / 3.0, 0.0));
    int consecutive = 0;
    double tail = 0.0;
    for (std::int64_t m = 1;; ++m) {
        const cplx mt = static_cast<double>(m) * t;
        const cplx bracket = pi * pi *
            (inv_sin_sq(pi * (zr + mt)) + inv_sin_sq(pi * (zr - mt)) -
             2.0 * inv_sin_sq(pi * mt));
        acc.add(bracket);
        const double mag = std::abs(bracket);
        if (mag < stop_mag) {
            if (++consecutive >= 3) {
                tail = mag * ratio;
                break;
            }
        } else {
            consecutive = 0;
        }
    }
    return {acc.value(), Method::Reference, tail};
}

// a_{m,n} = 1/(z + m tau + n)^2. Not even in (m, n); every column is
// evaluated explicitly.
struct ShiftedInverseSquareTerm {
    cplx z;
    cplx tau;
    cplx operator()(std::int64_t m, std::int64_t n) const {
        const cplx w = z + static_cast<double>(m) * tau + static_cast<double>(n);
        return 1.0 / (w * w);
    }
};

// Direct absolutely convergent evaluation over the square |m|, |n| <= radius:
//
//   p(z) = 1/z^2 + sum_{(m,n) != 0} [ 1/(z + m tau + n)^2 - 1/(m tau + n)^2 ].
//
// Symmetric truncation cancels the odd tail, leaving an O(1/radius^2) error.
// Slow but independent of every series identity used elsewhere; serves as a
// cross-check oracle.
inline WeierstrassValue wp_abs_direct(cplx z, const TauPoint& tau,
                                      std::int64_t radius = 400) {
    if (radius < 10) {
        throw config_error("direct summation radius must be >= 10");
    }
    const cplx zr = detail::require_off_lattice(z, tau);
    const cplx t = tau.value();

    CompensatedSum acc;
    acc.add(1.0 / (zr * zr));

    // Deterministic column sweep m = 0, +1, -1, ..., n ascending.
    for (std::int64_t j = 0; j <= 2 * radius; ++j) {
        const std::int64_t m = (j == 0) ? 0 : ((j % 2 == 1) ? (j + 1) / 2 : -(j / 2));
        CompensatedSum col;
        for (std::int64_t n = -radius; n <= radius; ++n) {
            if (m == 0 && n == 0) continue;
            const cplx w = static_cast<double>(m) * t + static_cast<double>(n);
            const cplx u = zr + w;
            col.add(1.0 / (u * u) - 1.0 / (w * w));
        }
        acc.add(col.value());
    }

    const double rho = static_cast<double>(radius) * std::min(1.0, tau.im());
    const double err = 32.0 * (1.0 + std::norm(zr)) / (tau.im() * rho * rho);
    return {acc.value(), Method::AbsSeries, err};
}

// Shape-summation evaluation: the full double sum over lambda * K including
// the origin term (z is off the lattice, so every term is finite). The limit
// is periodic in z, and reduction keeps partial sums well conditioned.
inline WeierstrassValue wp_shape(const ShapeSpec& shape, cplx z,
                                 const TauPoint& tau, SumConfig config = {}) {
    const cplx zr = detail::require_off_lattice(z, tau);
    config.zero_origin = false;
    config.exclude_m_zero = false;
    const auto sum = shape_sum_limit(
        shape, ShiftedInverseSquareTerm{zr, tau.value()}, config);
    return {sum.value, Method::Lattice, sum.error_estimate};
}

// wp_shape(K, z) - [wp_ref(z) + g2_ref + E(K)]; the shape dependence of the
// double sum is carried entirely by the weight-2 residual.
inline cplx wp_decomposition_defect(const ShapeSpec& shape, cplx z, const TauPoint& tau,
                            const SumConfig& config = {},
                            const QuadratureConfig& qcfg = {}) {
    const auto lhs = wp_shape(shape, z, tau, config);
    const auto rhs = wp_ref(z, tau).value + g2_ref(tau).value +
                     residual_auto(shape, tau, qcfg).value;
    return lhs.value - rhs;
}

// Iterated sums of 1/(z + m tau + n)^2 in both nesting orders. Each inner sum
// has a sine closed form, so both orders reduce to geometrically convergent
// single series; their difference is 2 pi i / tau independent of z. Returns
// the defect against that constant, using n_terms and 2*n_terms outer terms
// with one extrapolation step.
inline cplx wp_iterated_defect(cplx z, const TauPoint& tau,
                               std::int64_t n_terms = 2000) {
    if (n_terms < 10) {
        throw config_error("iterated evaluation needs at least 10 outer terms");
    }
    detail::require_off_lattice(z, tau);
    const cplx t = tau.value();
    const cplx inv_t2 = 1.0 / (t * t);

    // Rows first: sum_m pi^2 / sin^2(pi(z + m tau)).
    const auto rows_partial = [&](std::int64_t count) {
        CompensatedSum acc;
        acc.add(pi * pi * inv_sin_sq(pi * z));
        for (std::int64_t m = 1; m <= count; ++m) {
            const cplx mt = static_cast<double>(m) * t;
            acc.add(pi * pi * inv_sin_sq(pi * (z + mt)));
            acc.add(pi * pi * inv_sin_sq(pi * (z - mt)));
        }
        return acc.value();
    };
    // Columns first: sum_n (pi^2/tau^2) / sin^2(pi(z + n)/tau).
    const auto cols_partial = [&](std::int64_t count) {
        CompensatedSum acc;
        acc.add(pi * pi * inv_t2 * inv_sin_sq(pi * z / t));
        for (std::int64_t n = 1; n <= count; ++n) {
            const double nd = static_cast<double>(n);
            acc.add(pi * pi * inv_t2 * inv_sin_sq(pi * (z + nd) / t));
            acc.add(pi * pi * inv_t2 * inv_sin_sq(pi * (z - nd) / t));
        }
        return acc.value();
    };

    const cplx rows = 2.0 * rows_partial(2 * n_terms) - rows_partial(n_terms);
    const cplx cols = 2.0 * cols_partial(2 * n_terms) - cols_partial(n_terms);
    return rows - cols - cplx(0.0, 2.0 * pi) / t;
}

}  // namespace shapesum
