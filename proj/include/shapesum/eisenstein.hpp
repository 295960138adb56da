#pragma once

#include <cstdint>
#include <string>

#include "shapesum/common.hpp"
#include "shapesum/lattice_sum.hpp"
#include "shapesum/shapes.hpp"

namespace shapesum {

struct EisensteinValue {
    cplx value;
    Method method;
    double error_estimate = 0.0;
};

// a_{m,n} = 1/(m tau + n)^2. Even in (m, n) jointly.
struct InverseSquareTerm {
    cplx tau;
    static constexpr bool is_even = true;
    cplx operator()(std::int64_t m, std::int64_t n) const {
        const cplx w = static_cast<double>(m) * tau + static_cast<double>(n);
        return 1.0 / (w * w);
    }
};

// Reference value of the weight-2 series via its column closed form
//
//   pi^2/3 + 2 pi^2 sum_{m >= 1} 1/sin^2(pi m tau),
//
// which converges geometrically at rate exp(-2 pi Im tau). The stopping rule
// compares each term against the geometric tail it controls, so the bound
// stays honest even close to the Im(tau) guard where the rate approaches 1.
inline EisensteinValue g2_ref(const TauPoint& tau, double tol = 1e-12) {
    if (!(tol >= 1e-14)) {
        throw config_error("series tolerance must be >= 1e-14");
    }
    const cplx t = tau.value();
    const double r = std::exp(-2.0 * pi * tau.im());
    const double ratio = r / (1.0 - r);
    const double stop_mag = 0.25 * tol / std::max(ratio, 1e-3);

    CompensatedSum acc;
    acc.add(cplx(pi * pi / 3.0, 0.0));
    int consecutive = 0;
    double tail = 0.0;
    for (std::int64_t m = 1;; ++m) {
        const cplx term =
            2.0 * pi * pi * inv_sin_sq(pi * static_cast<double>(m) * t);
        acc.add(term);
        const double mag = std::abs(term);
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

// Absolutely convergent rearrangement: the residual against pi^2/3 is summed
// as sum_{m != 0} sum_n 1/((m tau + n)^2 (m tau + n + 1)), whose terms decay
// cubically along each column. Column m is truncated where its tail drops
// below tol/(8 m^2); whole-column magnitudes decay geometrically in m, which
// drives the outer stop. The term budget guards against configurations near
// the Im(tau) floor whose honest cost would be astronomically large.
inline EisensteinValue g2_abs_series(const TauPoint& tau, double tol = 1e-8) {
    if (!(tol >= 1e-10)) {
        throw config_error("abs-series tolerance must be >= 1e-10");
    }
    constexpr std::uint64_t term_budget = 1'000'000'000;
    const cplx t = tau.value();
    const double b = tau.im();
    const double abs_re = std::abs(tau.re());
    const double r = std::exp(-2.0 * pi * b);
    const double ratio = r / (1.0 - r);
    const double pair_stop = 0.25 * tol / std::max(ratio, 1e-3);

    CompensatedSum acc;
    acc.add(cplx(pi * pi / 3.0, 0.0));
    std::uint64_t used = 0;
    double err = 0.0;
    int consecutive = 0;
    double last_pair_mag = 0.0;

    for (std::int64_t m = 1;; ++m) {
        const double md = static_cast<double>(m);
        const double col_tol = tol / (8.0 * md * md);
        const double a = md * b;
        const double br = md * abs_re;
        const double need = 2.0 / col_tol - a * a;
        const auto n_max = static_cast<std::int64_t>(
            need <= 1.0 ? std::ceil(br + 1.0) : std::ceil(br + std::sqrt(need)));

        const std::uint64_t cost = 2 * (2 * static_cast<std::uint64_t>(n_max) + 1);
        if (used + cost > term_budget) {
            throw resource_error(
                "abs-series term budget exhausted at column m=" +
                std::to_string(m) + "; achieved bound ~" +
                std::to_string(err + last_pair_mag * ratio));
        }
        used += cost;

        cplx pair(0.0, 0.0);
        for (const double sign : {1.0, -1.0}) {
            const cplx w0 = sign * md * t;
            CompensatedSum col;
            for (std::int64_t n = -n_max; n <= n_max; ++n) {
                const cplx w = w0 + static_cast<double>(n);
                col.add(1.0 / (w * w * (w + 1.0)));
            }
            pair += col.value();
        }
        acc.add(pair);
        err += 2.0 * col_tol;

        last_pair_mag = std::abs(pair);
        if (last_pair_mag < pair_stop) {
            if (++consecutive >= 2) break;
        } else {
            consecutive = 0;
        }
    }
    err += last_pair_mag * ratio;
    return {acc.value(), Method::AbsSeries, err};
}

// Shape-summation evaluation (the conditionally convergent double sum, summed
// over dilations of K). The definition fixes the origin handling, so those
// two switches are overridden here.
inline EisensteinValue g2_shape(const ShapeSpec& shape, const TauPoint& tau,
                                SumConfig config = {}) {
    config.zero_origin = true;
    config.exclude_m_zero = false;
    const auto sum =
        shape_sum_limit(shape, InverseSquareTerm{tau.value()}, config);
    return {sum.value, Method::Lattice, sum.error_estimate};
}

// tau^-2 G(-1/tau) - G(tau) + 2 pi i / tau; zero up to series truncation.
inline cplx g2_quasimodularity_defect(const TauPoint& tau, double tol = 1e-12) {
    const TauPoint inverted = tau.inverted();
    const cplx t = tau.value();
    return g2_ref(inverted, tol).value / (t * t) - g2_ref(tau, tol).value +
           cplx(0.0, 2.0 * pi) / t;
}

// The double sum with the summation order exchanged (n outside, m inside).
// Inner sums collapse to the same sine closed form in 1/tau; the result
// differs from g2_ref by exactly -2 pi i / tau. Partial sums over n converge
// geometrically; the pairwise extrapolation step is kept for symmetry with
// the lattice path.
inline cplx g2_reversed_order(const TauPoint& tau, std::int64_t n_terms = 2000) {
    if (n_terms < 10) {
        throw config_error("reversed-order evaluation needs at least 10 terms");
    }
    const cplx t = tau.value();
    const cplx inv_t2 = 1.0 / (t * t);

    const auto partial = [&](std::int64_t count) {
        CompensatedSum acc;
        acc.add(pi * pi / 3.0 * inv_t2);
        for (std::int64_t n = 1; n <= count; ++n) {
            acc.add(2.0 * pi * pi * inv_t2 *
                    inv_sin_sq(pi * static_cast<double>(n) / t));
        }
        return acc.value();
    };

    const cplx s1 = partial(n_terms);
    const cplx s2 = partial(2 * n_terms);
    return 2.0 * s2 - s1;
}

}  // namespace shapesum
