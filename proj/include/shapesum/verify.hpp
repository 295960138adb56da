#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "shapesum/common.hpp"
#include "shapesum/eisenstein.hpp"
#include "shapesum/lattice_sum.hpp"
#include "shapesum/quadrature.hpp"
#include "shapesum/residual.hpp"
#include "shapesum/shapes.hpp"
#include "shapesum/weierstrass.hpp"

namespace shapesum {

// One verification check: an internal cross-consistency statement evaluated
// numerically. `observed` is the worst defect found, `values` records the
// raw complex quantities that went into it (the CLI serializes them, which
// lets independent runs be compared bit for bit).
struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double tolerance = 0.0;
    std::string detail;
    std::vector<std::pair<std::string, cplx>> values;
};

namespace verify_detail {

inline std::string cstr(cplx v) {
    return std::to_string(v.real()) + (v.imag() < 0 ? "" : "+") +
           std::to_string(v.imag()) + "i";
}

inline std::vector<TauPoint> random_taus(std::uint64_t seed, int count,
                                         double im_lo, double im_hi) {
    SplitMix64 rng(seed);
    std::vector<TauPoint> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double re = rng.uniform(-1.0, 1.0);
        const double im = rng.uniform(im_lo, im_hi);
        out.emplace_back(cplx(re, im));
    }
    return out;
}

struct ShapeCase {
    ShapeSpec shape;
    std::string label;
};

inline std::vector<ShapeCase> standard_shapes() {
    return {
        {ShapeSpec::rectangle(0.25), "rect(0.25)"},
        {ShapeSpec::rectangle(1.0), "rect(1)"},
        {ShapeSpec::rectangle(4.0), "rect(4)"},
        {ShapeSpec::disk(), "disk"},
        {ShapeSpec::diamond(), "diamond"},
    };
}

inline std::vector<TauPoint> standard_taus() {
    return {TauPoint(cplx(0.0, 1.0)), TauPoint(cplx(0.0, 2.0)),
            TauPoint(cplx(0.3, 1.2)), TauPoint(cplx(-0.5, 0.8))};
}

using Check = std::function<CheckResult()>;

inline CheckResult check_g2_fixed_point() {
    CheckResult r{.name = "g2-fixed-point", .tolerance = 1e-10};
    const auto v = g2_ref(TauPoint(cplx(0.0, 1.0))).value;
    r.observed = std::abs(v - cplx(pi, 0.0));
    r.values.emplace_back("g2(i)", v);
    r.detail = "reference series at the square lattice against pi";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_quasimodularity() {
    CheckResult r{.name = "quasimodularity", .tolerance = 1e-9};
    const auto taus = random_taus(0x51AB1E5EEDull, 10, 0.5, 2.0);
    for (const auto& tau : taus) {
        const cplx d = g2_quasimodularity_defect(tau);
        r.observed = std::max(r.observed, std::abs(d));
    }
    r.detail = "inversion defect over 10 random tau";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_abs_series() {
    CheckResult r{.name = "abs-series", .tolerance = 1e-6};
    const auto taus = random_taus(0xAB5C0FFEEull, 10, 0.3, 3.0);
    int idx = 0;
    for (const auto& tau : taus) {
        const auto a = g2_abs_series(tau, 1e-7);
        const auto ref = g2_ref(tau);
        r.observed = std::max(r.observed, std::abs(a.value - ref.value));
        r.values.emplace_back("abs[" + std::to_string(idx++) + "]", a.value);
    }
    r.detail = "absolutely convergent rearrangement against the reference series";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_reversed_order() {
    CheckResult r{.name = "reversed-order", .tolerance = 1e-4};
    for (const auto& tau : {TauPoint(cplx(0.0, 1.0)), TauPoint(cplx(0.0, 2.0)),
                            TauPoint(cplx(0.3, 1.2))}) {
        const cplx rev = g2_reversed_order(tau, 2000);
        const cplx expected =
            g2_ref(tau).value - cplx(0.0, 2.0 * pi) / tau.value();
        r.observed = std::max(r.observed, std::abs(rev - expected));
    }
    r.detail = "exchanged summation order against the shifted reference";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_closed_vs_integral() {
    CheckResult r{.name = "closed-vs-integral", .tolerance = 1e-8};
    for (const auto& sc : standard_shapes()) {
        for (const auto& tau : standard_taus()) {
            const auto ci = residual_integral(sc.shape, tau);
            const auto cf = residual_closed_form(sc.shape, tau);
            r.observed = std::max(r.observed, std::abs(ci.value - cf.value));
            r.values.emplace_back(sc.label + "@" + cstr(tau.value()), ci.value);
        }
    }
    r.detail = "boundary integral against closed forms, 20 shape/tau combos";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_residual_fixed_point() {
    CheckResult r{.name = "residual-fixed-point", .tolerance = 1e-8};
    const TauPoint tau(cplx(0.0, 1.0));
    for (const auto& shape :
         {ShapeSpec::rectangle(1.0), ShapeSpec::disk(), ShapeSpec::diamond()}) {
        const auto e = residual_integral(shape, tau);
        r.observed = std::max(r.observed, std::abs(e.value + cplx(pi, 0.0)));
    }
    r.detail = "transpose-symmetric shapes at tau=i against -pi";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_rectangle_limits() {
    CheckResult r{.name = "rectangle-limits", .tolerance = 5e-4};
    const TauPoint tau(cplx(0.0, 1.0));
    const auto thin = residual_closed_form(ShapeSpec::rectangle(1e-4), tau);
    const auto wide = residual_closed_form(ShapeSpec::rectangle(1e4), tau);
    const cplx wide_limit = cplx(0.0, -2.0 * pi) / tau.value();
    r.observed = std::max(std::abs(thin.value),
                          std::abs(wide.value - wide_limit));
    r.values.emplace_back("thin", thin.value);
    r.values.emplace_back("wide", wide.value);
    r.detail = "extreme aspect ratios against the limits 0 and -2*pi*i/tau";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_functional_equation() {
    CheckResult r{.name = "functional-equation", .tolerance = 1e-8};
    const std::vector<ShapeCase> shapes = {
        {ShapeSpec::rectangle(1.0), "rect(1)"},
        {ShapeSpec::rectangle(2.0), "rect(2)"},
        {ShapeSpec::disk(), "disk"},
        {ShapeSpec::diamond(), "diamond"},
    };
    for (const auto& sc : shapes) {
        for (const auto& tau :
             {TauPoint(cplx(0.0, 1.0)), TauPoint(cplx(0.4, 1.1))}) {
            const cplx d = residual_functional_defect(sc.shape, tau);
            r.observed = std::max(r.observed, std::abs(d));
        }
    }
    r.detail = "transpose residual against the inverted-parameter relation";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_scaling_invariance() {
    CheckResult r{.name = "scaling-invariance", .tolerance = 1e-9};
    const auto shapes = {as_custom(ShapeSpec::diamond()),
                         as_custom(ShapeSpec::rectangle(1.0))};
    for (const auto& shape : shapes) {
        for (const double s : {0.5, 3.0}) {
            for (const auto& tau :
                 {TauPoint(cplx(0.0, 1.0)), TauPoint(cplx(0.0, 2.0))}) {
                const cplx d = residual_scaling_defect(shape, s, tau);
                r.observed = std::max(r.observed, std::abs(d));
            }
        }
    }
    r.detail = "residual invariance under profile dilation";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_conjugation() {
    CheckResult r{.name = "conjugation-symmetry", .tolerance = 1e-10};
    const auto taus = random_taus(0xC0417A7E5ull, 5, 0.6, 1.8);
    for (const auto& tau : taus) {
        const TauPoint mirrored(-std::conj(tau.value()));
        const cplx g_here = g2_ref(tau).value;
        const cplx g_there = g2_ref(mirrored).value;
        r.observed = std::max(r.observed, std::abs(g_there - std::conj(g_here)));
        const cplx e_here = residual_closed_form(ShapeSpec::disk(), tau).value;
        const cplx e_there =
            residual_closed_form(ShapeSpec::disk(), mirrored).value;
        r.observed = std::max(r.observed, std::abs(e_there - std::conj(e_here)));
    }
    r.detail = "values at -conj(tau) against conjugated values at tau";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_wp_special_values() {
    CheckResult r{.name = "wp-special-values", .tolerance = 1e-10};
    const TauPoint tau_i(cplx(0.0, 1.0));

    // Square lattice: the value at the center of the cell vanishes, and the
    // value at the real half period is Gamma(1/4)^4 / (8 pi).
    const cplx at_center = wp_ref(cplx(0.5, 0.5), tau_i).value;
    const double g14 = std::tgamma(0.25);
    const double lemniscatic = g14 * g14 * g14 * g14 / (8.0 * pi);
    const cplx at_half = wp_ref(cplx(0.5, 0.0), tau_i).value;
    r.observed = std::max(std::abs(at_center),
                          std::abs(at_half - cplx(lemniscatic, 0.0)) /
                              lemniscatic);
    r.values.emplace_back("center", at_center);
    r.values.emplace_back("half", at_half);

    // Evenness and double periodicity at random points.
    SplitMix64 rng(0x3E11191Cull);
    for (int i = 0; i < 6; ++i) {
        const TauPoint tau(cplx(rng.uniform(-1.0, 1.0), rng.uniform(0.6, 1.8)));
        const cplx z = cplx(rng.uniform(0.05, 0.45), 0.0) +
                       tau.value() * rng.uniform(0.05, 0.45);
        const cplx base = wp_ref(z, tau).value;
        const double scale = 1.0 + std::abs(base);
        r.observed = std::max(
            r.observed, std::abs(wp_ref(-z, tau).value - base) / scale);
        r.observed = std::max(
            r.observed, std::abs(wp_ref(z + 1.0, tau).value - base) / scale);
        r.observed = std::max(
            r.observed,
            std::abs(wp_ref(z + tau.value(), tau).value - base) / scale);
    }
    r.detail = "special values, evenness, and periodicity of the reference";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_wp_direct(const char* name, std::int64_t radius,
                                   double tol) {
    CheckResult r{.name = name, .tolerance = tol};
    SplitMix64 rng(0xD12EC7ull);
    for (int i = 0; i < 10; ++i) {
        const TauPoint tau(cplx(rng.uniform(-1.0, 1.0), rng.uniform(0.7, 1.6)));
        const cplx z = cplx(rng.uniform(0.1, 0.45), 0.0) +
                       tau.value() * rng.uniform(0.1, 0.45);
        const auto direct = wp_abs_direct(z, tau, radius);
        const auto ref = wp_ref(z, tau);
        r.observed = std::max(r.observed, std::abs(direct.value - ref.value));
        if (i < 4) {
            r.values.emplace_back("direct[" + std::to_string(i) + "]",
                                  direct.value);
        }
    }
    r.detail = "direct lattice truncation against the reference evaluation";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_iterated_order_swap() {
    CheckResult r{.name = "iterated-order-swap", .tolerance = 1e-4};
    const cplx d1 =
        wp_iterated_defect(cplx(0.3, 0.0), TauPoint(cplx(0.0, 1.0)), 1000);
    const cplx d2 =
        wp_iterated_defect(cplx(0.5, 0.25), TauPoint(cplx(0.0, 2.0)), 1000);
    r.observed = std::max(std::abs(d1), std::abs(d2));
    r.detail = "nesting-order difference against 2*pi*i/tau";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_telescope_columns() {
    CheckResult r{.name = "telescope-columns", .tolerance = 1e-10};
    const TauPoint tau(cplx(0.3, 1.2));
    SumConfig cfg;
    cfg.exclude_m_zero = true;
    cfg.zero_origin = false;
    for (const auto& shape :
         {ShapeSpec::disk(), ShapeSpec::diamond(), ShapeSpec::rectangle(0.5)}) {
        const cplx closed = telescope_sum(shape, tau, 50);
        const cplx direct =
            shape_partial_sum(shape, TelescopeTerm{tau.value()}, 50, cfg).value;
        r.observed = std::max(r.observed, std::abs(closed - direct));
    }
    r.detail = "collapsed columns against termwise summation at lambda=50";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_lattice_probe() {
    CheckResult r{.name = "lattice-probe", .tolerance = 0.02};
    SumConfig cfg;
    cfg.schedule = {50, 100, 200, 400};

    struct Probe {
        ShapeSpec shape;
        TauPoint tau;
        std::string label;
    };
    const std::vector<Probe> probes = {
        {ShapeSpec::disk(), TauPoint(cplx(0.0, 2.0)), "disk@2i"},
        {ShapeSpec::rectangle(0.5), TauPoint(cplx(0.3, 1.2)), "rect(0.5)"},
        {as_custom(ShapeSpec::diamond()), TauPoint(cplx(0.0, 2.0)), "customdiamond"},
    };
    for (const auto& probe : probes) {
        const auto lat = residual_lattice(probe.shape, probe.tau, cfg);
        const auto ref = residual_integral(probe.shape, probe.tau);
        r.observed = std::max(r.observed, std::abs(lat.value - ref.value));
        r.values.emplace_back(probe.label, lat.value);
    }
    r.detail = "short-schedule lattice residuals against the integral";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_lattice_default() {
    CheckResult r{.name = "lattice-default", .tolerance = 5e-3};
    for (const auto& sc : standard_shapes()) {
        for (const auto& tau : standard_taus()) {
            const auto lat = residual_lattice(sc.shape, tau);
            const auto cf = residual_closed_form(sc.shape, tau);
            r.observed = std::max(r.observed, std::abs(lat.value - cf.value));
            r.values.emplace_back(sc.label + "@" + cstr(tau.value()), lat.value);
        }
    }
    r.detail = "default-schedule lattice residuals, 20 shape/tau combos";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_telescope_lemma() {
    CheckResult r{.name = "telescope-lemma", .tolerance = 5e-3};
    for (const auto& sc : standard_shapes()) {
        for (const auto& tau :
             {TauPoint(cplx(0.0, 1.0)), TauPoint(cplx(0.3, 1.2))}) {
            const cplx tele = telescope_sum(sc.shape, tau, 2000);
            const auto ref = residual_integral(sc.shape, tau);
            r.observed = std::max(r.observed, std::abs(tele - ref.value));
        }
    }
    r.detail = "collapsed column sums at lambda=2000 against the integral";
    r.pass = r.observed <= r.tolerance;
    return r;
}

inline CheckResult check_shifted_sum_decomposition() {
    CheckResult r{.name = "shifted-sum-decomposition", .tolerance = 5e-3};
    const cplx d1 = wp_decomposition_defect(ShapeSpec::disk(), cplx(0.3, 0.0),
                                    TauPoint(cplx(0.0, 1.0)));
    const cplx d2 = wp_decomposition_defect(ShapeSpec::rectangle(2.0), cplx(0.4, 0.2),
                                    TauPoint(cplx(0.3, 1.2)));
    r.observed = std::max(std::abs(d1), std::abs(d2));
    r.detail = "shape-summed shifted series against reference + offset";
    r.pass = r.observed <= r.tolerance;
    return r;
}

}  // namespace verify_detail

// Runs the verification suite. Quick mode covers every identity with light
// workloads; full mode adds the heavy lattice schedules. Unexpected
// exceptions are converted into failing checks rather than aborting the run.
inline std::vector<CheckResult> run_verification(bool quick) {
    using namespace verify_detail;
    std::vector<std::pair<std::string, Check>> registry = {
        {"g2-fixed-point", check_g2_fixed_point},
        {"quasimodularity", check_quasimodularity},
        {"abs-series", check_abs_series},
        {"reversed-order", check_reversed_order},
        {"closed-vs-integral", check_closed_vs_integral},
        {"residual-fixed-point", check_residual_fixed_point},
        {"rectangle-limits", check_rectangle_limits},
        {"functional-equation", check_functional_equation},
        {"scaling-invariance", check_scaling_invariance},
        {"conjugation-symmetry", check_conjugation},
        {"wp-special-values", check_wp_special_values},
        {"wp-direct-oracle",
         [] { return check_wp_direct("wp-direct-oracle", 150, 1e-4); }},
        {"iterated-order-swap", check_iterated_order_swap},
        {"telescope-columns", check_telescope_columns},
        {"lattice-probe", check_lattice_probe},
    };
    if (!quick) {
        registry.emplace_back("lattice-default", check_lattice_default);
        registry.emplace_back("telescope-lemma", check_telescope_lemma);
        registry.emplace_back("shifted-sum-decomposition",
                              check_shifted_sum_decomposition);
        registry.emplace_back("wp-direct-strong", [] {
            return check_wp_direct("wp-direct-strong", 400, 5e-3);
        });
    }

    std::vector<CheckResult> results;
    results.reserve(registry.size());
    for (const auto& [name, fn] : registry) {
        try {
            results.push_back(fn());
        } catch (const std::exception& e) {
            CheckResult r;
            r.name = name;
            r.pass = false;
            r.observed = std::numeric_limits<double>::infinity();
            r.detail = std::string("exception: ") + e.what();
            results.push_back(std::move(r));
        }
    }
    return results;
}

}  // namespace shapesum
