#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "shapesum/common.hpp"
#include "shapesum/parallel.hpp"
#include "shapesum/shapes.hpp"

namespace shapesum {

// Boundary nudge for floating-point column heights. Membership is closed
// (boundary lattice points count), so a height that lands within 1e-9 of an
// integer from below is treated as reaching it. Builtin Disk and Diamond use
// exact integer arithmetic and never need this.
inline constexpr double boundary_nudge = 1e-9;

struct SumConfig {
    // Dilation schedule. Strictly increasing; with extrapolation enabled each
    // entry must double the previous one.
    std::vector<std::int64_t> schedule = {250, 500, 1000, 2000};
    bool extrapolate = true;
    // Skip the single lattice point at the origin (m = n = 0).
    bool zero_origin = true;
    // Skip the entire m = 0 column (used by telescoping sums).
    bool exclude_m_zero = false;
};

struct SumResult {
    cplx value;
    double error_estimate = 0.0;
    std::vector<std::int64_t> lambdas;
    std::vector<cplx> partials;      // one per schedule entry
    std::vector<cplx> extrapolants;  // pairwise Richardson values, if enabled
    std::uint64_t terms_evaluated = 0;
};

// Inclusive n-range [-n_max, n_max] of lattice column m inside the dilated
// region lambda * K, or nullopt when the column misses the region entirely.
struct ColumnSpan {
    std::int64_t n_max;
};

namespace detail {

inline void check_lambda(std::int64_t lambda) {
    if (lambda < 1) {
        throw config_error("dilation parameter must be a positive integer");
    }
}

}  // namespace detail

inline std::optional<ColumnSpan> column_range(const ShapeSpec& s,
                                              std::int64_t lambda,
                                              std::int64_t m) {
    detail::check_lambda(lambda);
    const std::int64_t am = m < 0 ? -m : m;
    switch (s.kind()) {
        case ShapeKind::Rectangle: {
            const double limit = static_cast<double>(lambda) * s.aspect();
            if (static_cast<double>(am) > limit + boundary_nudge) return std::nullopt;
            return ColumnSpan{lambda};
        }
        case ShapeKind::Disk: {
            if (am > lambda) return std::nullopt;
            return ColumnSpan{isqrt_i64(lambda * lambda - am * am)};
        }
        case ShapeKind::Diamond: {
            if (am > lambda) return std::nullopt;
            return ColumnSpan{lambda - am};
        }
        case ShapeKind::Custom: {
            const double a = support(s);
            const double x = static_cast<double>(am);
            if (x > static_cast<double>(lambda) * a + boundary_nudge) {
                return std::nullopt;
            }
            const double h =
                height(s, x / static_cast<double>(lambda)) * static_cast<double>(lambda);
            return ColumnSpan{static_cast<std::int64_t>(std::floor(h + boundary_nudge))};
        }
    }
    return std::nullopt;
}

// Largest |m| whose column intersects lambda * K.
inline std::int64_t column_extent(const ShapeSpec& s, std::int64_t lambda) {
    detail::check_lambda(lambda);
    switch (s.kind()) {
        case ShapeKind::Rectangle: {
            const double limit = static_cast<double>(lambda) * s.aspect();
            return static_cast<std::int64_t>(std::floor(limit + boundary_nudge));
        }
        case ShapeKind::Disk:
        case ShapeKind::Diamond:
            return lambda;
        case ShapeKind::Custom:
            return static_cast<std::int64_t>(std::floor(
                static_cast<double>(lambda) * support(s) + boundary_nudge));
    }
    return 0;
}

// A term family is a callable cplx(std::int64_t m, std::int64_t n). Families
// with term(-m, -n) == term(m, n) may declare `static constexpr bool is_even
// = true`; mirrored columns are then reused instead of re-evaluated.
template <typename Term>
constexpr bool term_is_even() {
    if constexpr (requires { { Term::is_even } -> std::convertible_to<bool>; }) {
        return Term::is_even;
    } else {
        return false;
    }
}

// Telescoping column increment, sums to 1/(m tau - N) - 1/(m tau + N + 1)
// over a column window [-N, N].
struct TelescopeTerm {
    cplx tau;
    cplx operator()(std::int64_t m, std::int64_t n) const {
        const cplx w = static_cast<double>(m) * tau + static_cast<double>(n);
        return 1.0 / w - 1.0 / (w + 1.0);
    }
};

struct ConstantTerm {
    cplx c;
    static constexpr bool is_even = true;
    cplx operator()(std::int64_t, std::int64_t) const { return c; }
};

struct PartialSum {
    cplx value;
    std::uint64_t terms = 0;
};

namespace detail {

[[noreturn]] inline void rethrow_with_term_context(std::int64_t m, std::int64_t n) {
    const std::string ctx =
        " [while evaluating lattice term m=" + std::to_string(m) +
        ", n=" + std::to_string(n) + "]";
    try {
        throw;
    } catch (const config_error& e) {
        throw config_error(std::string(e.what()) + ctx);
    } catch (const domain_error& e) {
        throw domain_error(std::string(e.what()) + ctx);
    } catch (const resource_error& e) {
        throw resource_error(std::string(e.what()) + ctx);
    } catch (const std::exception& e) {
        throw error(std::string(e.what()) + ctx);
    }
}

template <typename Term>
PartialSum sum_column(const ShapeSpec& shape, const Term& term,
                      std::int64_t lambda, std::int64_t m, bool zero_origin) {
    const auto span = column_range(shape, lambda, m);
    if (!span) return {cplx(0.0, 0.0), 0};

    CompensatedSum acc;
    std::uint64_t count = 0;
    std::int64_t n = -span->n_max;
    try {
        for (; n <= span->n_max; ++n) {
            if (zero_origin && m == 0 && n == 0) continue;
            acc.add(term(m, n));
            ++count;
        }
    } catch (...) {
        rethrow_with_term_context(m, n);
    }
    return {acc.value(), count};
}

}  // namespace detail

// Sum of term(m, n) over all integer points of lambda * K, in the fixed
// column order m = 0, +1, -1, +2, -2, ... with n ascending inside each
// column. Columns are evaluated in parallel but reduced sequentially in that
// order, so the result does not depend on the thread budget.
template <typename Term>
PartialSum shape_partial_sum(const ShapeSpec& shape, const Term& term,
                             std::int64_t lambda, const SumConfig& config = {}) {
    detail::check_lambda(lambda);
    const std::int64_t extent = column_extent(shape, lambda);

    // Slot layout: [0] = column 0, [2k-1] = column +k, [2k] = column -k.
    std::vector<PartialSum> slots(static_cast<std::size_t>(2 * extent + 1));

    parallel_for(static_cast<std::size_t>(extent) + 1, [&](std::size_t k) {
        const auto mk = static_cast<std::int64_t>(k);
        if (mk == 0) {
            if (!config.exclude_m_zero) {
                slots[0] = detail::sum_column(shape, term, lambda, 0,
                                              config.zero_origin);
            }
            return;
        }
        slots[static_cast<std::size_t>(2 * mk - 1)] =
            detail::sum_column(shape, term, lambda, mk, config.zero_origin);
        if constexpr (term_is_even<Term>()) {
            // Mirrored column: identical n-range, termwise equal values.
            // Copying costs no term evaluations, so none are counted.
            slots[static_cast<std::size_t>(2 * mk)] = {
                slots[static_cast<std::size_t>(2 * mk - 1)].value, 0};
        } else {
            slots[static_cast<std::size_t>(2 * mk)] =
                detail::sum_column(shape, term, lambda, -mk, config.zero_origin);
        }
    });

    CompensatedSum acc;
    std::uint64_t terms = 0;
    for (const auto& slot : slots) {
        acc.add(slot.value);
        terms += slot.terms;
    }
    return {acc.value(), terms};
}

inline void validate_schedule(const SumConfig& config) {
    if (config.schedule.empty()) {
        throw config_error("summation schedule must not be empty");
    }
    for (std::size_t i = 0; i < config.schedule.size(); ++i) {
        if (config.schedule[i] < 1) {
            throw config_error("schedule entries must be positive integers");
        }
        if (i > 0 && config.schedule[i] <= config.schedule[i - 1]) {
            throw config_error("schedule must be strictly increasing");
        }
    }
    if (config.extrapolate) {
        if (config.schedule.size() < 2) {
            throw config_error("extrapolation needs at least two schedule entries");
        }
        for (std::size_t i = 1; i < config.schedule.size(); ++i) {
            if (config.schedule[i] != 2 * config.schedule[i - 1]) {
                throw config_error(
                    "extrapolation assumes a doubling schedule (entry " +
                    std::to_string(i) + " breaks it)");
            }
        }
    }
}

// Shape-summation limit estimate. Partial sums follow the schedule; with
// extrapolation on, consecutive partial pairs are combined as 2*S(2L) - S(L),
// which cancels the leading 1/L boundary defect. The error estimate is the
// difference of the last two estimates of whichever sequence is reported.
template <typename Term>
SumResult shape_sum_limit(const ShapeSpec& shape, const Term& term,
                          const SumConfig& config = {}) {
    validate_schedule(config);

    SumResult res;
    res.lambdas = config.schedule;
    for (const auto lambda : config.schedule) {
        const auto p = shape_partial_sum(shape, term, lambda, config);
        res.partials.push_back(p.value);
        res.terms_evaluated += p.terms;
    }

    if (config.extrapolate) {
        for (std::size_t i = 1; i < res.partials.size(); ++i) {
            res.extrapolants.push_back(2.0 * res.partials[i] - res.partials[i - 1]);
        }
        res.value = res.extrapolants.back();
        const std::size_t ne = res.extrapolants.size();
        res.error_estimate =
            ne >= 2 ? std::abs(res.extrapolants[ne - 1] - res.extrapolants[ne - 2])
                    : std::abs(res.extrapolants.back() - res.partials.back());
    } else {
        res.value = res.partials.back();
        const std::size_t np = res.partials.size();
        res.error_estimate =
            np >= 2 ? std::abs(res.partials[np - 1] - res.partials[np - 2]) : 0.0;
    }
    return res;
}

// Closed column evaluation of the telescoping family: each column m != 0
// collapses to 1/(m tau - N_m) - 1/(m tau + N_m + 1). Matches
// shape_partial_sum(shape, TelescopeTerm{tau}, lambda, {exclude_m_zero})
// termwise, at O(extent) cost instead of O(area).
inline cplx telescope_sum(const ShapeSpec& shape, const TauPoint& tau,
                          std::int64_t lambda) {
    detail::check_lambda(lambda);
    const std::int64_t extent = column_extent(shape, lambda);
    const cplx t = tau.value();

    CompensatedSum acc;
    for (std::int64_t k = 1; k <= extent; ++k) {
        for (const std::int64_t m : {k, -k}) {
            const auto span = column_range(shape, lambda, m);
            if (!span) continue;
            const double nmax = static_cast<double>(span->n_max);
            const cplx mt = static_cast<double>(m) * t;
            acc.add(1.0 / (mt - nmax) - 1.0 / (mt + nmax + 1.0));
        }
    }
    return acc.value();
}

}  // namespace shapesum
