#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "shapesum/common.hpp"

namespace shapesum {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // Total panel budget across the whole interval.
    int max_subdivisions = 2000;
};

struct QuadratureResult {
    cplx value;
    double error_estimate = 0.0;
    int panels = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1]. xgk holds the positive
// Kronrod abscissae (descending) plus the center; the odd-indexed entries are
// the embedded 7-point Gauss nodes.
inline constexpr double gk_xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

inline constexpr double gk_wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    cplx kronrod;
    double error;
};

template <typename F>
Panel gk15_panel(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const cplx fc = f(center);
    cplx resk = gk_wgk[7] * fc;
    cplx resg = gk_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk_xgk[j];
        const cplx f1 = f(center - dx);
        const cplx f2 = f(center + dx);
        resk += gk_wgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += gk_wg[j / 2] * (f1 + f2);
    }
    resk *= half;
    resg *= half;
    return {resk, std::abs(resk - resg)};
}

template <typename F>
struct AdaptiveState {
    F& f;
    const QuadratureConfig& cfg;
    CompensatedSum value;
    double error = 0.0;
    int panels = 0;

    void refine(double a, double b, double tol, int depth) {
        if (panels >= cfg.max_subdivisions) {
            throw resource_error(
                "quadrature panel budget (" +
                std::to_string(cfg.max_subdivisions) +
                ") exhausted before reaching the requested tolerance");
        }
        ++panels;
        const auto panel = gk15_panel(f, a, b);
        const double mid = 0.5 * (a + b);
        // Accept on tolerance, or when bisection has hit the resolution of
        // double (the remaining error is then below anything resolvable).
        if (panel.error <= tol || depth >= 64 || !(a < mid && mid < b)) {
            value.add(panel.kronrod);
            error += panel.error;
            return;
        }
        refine(a, mid, 0.5 * tol, depth + 1);
        refine(mid, b, 0.5 * tol, depth + 1);
    }
};

}  // namespace detail

// Adaptive complex-valued integration of f over [a, b]. Interior breakpoints
// seed the initial panel edges (useful when the integrand has kinks at known
// abscissae). Panels are refined depth-first left to right and accumulated in
// that fixed order, so results are reproducible run to run.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureConfig& cfg = {},
                           std::span<const double> breakpoints = {}) {
    if (!(a < b)) throw config_error("integration interval must satisfy a < b");
    if (!(cfg.rel_tol >= 1e-14) || !(cfg.abs_tol >= 0.0)) {
        throw config_error("quadrature tolerances out of range");
    }
    if (cfg.max_subdivisions < 1) {
        throw config_error("quadrature panel budget must be positive");
    }

    std::vector<double> edges;
    edges.push_back(a);
    for (const double p : breakpoints) {
        if (p > a && p < b) edges.push_back(p);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // First sweep fixes the magnitude scale for the relative tolerance.
    double rough = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        rough += std::abs(detail::gk15_panel(f, edges[i - 1], edges[i]).kronrod);
    }
    const double tol_total = std::max(cfg.abs_tol, cfg.rel_tol * rough);
    const double tol_segment = tol_total / static_cast<double>(edges.size() - 1);

    detail::AdaptiveState<std::remove_reference_t<F>> state{f, cfg};
    for (std::size_t i = 1; i < edges.size(); ++i) {
        state.refine(edges[i - 1], edges[i], tol_segment, 0);
    }
    return {state.value.value(), state.error, state.panels};
}

}  // namespace shapesum
