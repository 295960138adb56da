#pragma once

#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "shapesum/common.hpp"
#include "shapesum/eisenstein.hpp"
#include "shapesum/residual.hpp"
#include "shapesum/shape_io.hpp"
#include "shapesum/shapes.hpp"
#include "shapesum/verify.hpp"
#include "shapesum/weierstrass.hpp"

namespace shapesum::cli {

using json = nlohmann::ordered_json;

// Complex argument grammar: "a+bi" with no spaces, e.g. "0+1i", "-0.5+0.8i",
// "2i", "1.5", "-i". Exponents are fine ("1e-3+2.5e-2i").
inline cplx parse_complex(const std::string& arg) {
    if (arg.empty()) throw config_error("empty complex literal");
    for (const char ch : arg) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            throw config_error("complex literal must not contain spaces: '" +
                               arg + "'");
        }
    }

    const auto parse_real = [&](const std::string& tok, const char* what) {
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &consumed);
        } catch (const std::exception&) {
            throw config_error(std::string("cannot parse ") + what + " part of '" +
                               arg + "'");
        }
        if (consumed != tok.size()) {
            throw config_error(std::string("trailing characters in ") + what +
                               " part of '" + arg + "'");
        }
        return v;
    };

    if (arg.back() != 'i') {
        return {parse_real(arg, "real"), 0.0};
    }

    const std::string body = arg.substr(0, arg.size() - 1);
    // Split at the last sign that is not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < body.size(); ++k) {
        if ((body[k] == '+' || body[k] == '-') &&
            body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
        }
    }

    const auto parse_imag = [&](const std::string& tok) {
        if (tok.empty() || tok == "+") return 1.0;
        if (tok == "-") return -1.0;
        return parse_real(tok, "imaginary");
    };

    if (split == std::string::npos) {
        return {0.0, parse_imag(body)};
    }
    return {parse_real(body.substr(0, split), "real"),
            parse_imag(body.substr(split))};
}

// Canonical text form, exact under parse_complex round-trips.
inline std::string format_complex(cplx v) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", v.real(), v.imag());
    return buf;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline json complex_json(cplx v) {
    return json{{"re", v.real()}, {"im", v.imag()}};
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
    std::string target;  // g2 | residual | wp
    std::string tau_arg;
    std::string shape_arg;            // empty when absent
    std::string z_arg;                // wp only
    std::string method = "auto";
    std::optional<double> tol;        // per-method default when absent
    std::vector<std::int64_t> schedule;
    bool extrapolate = true;
    std::int64_t radius = 400;        // wp direct method
};

namespace detail {

struct Outcome {
    cplx value;
    Method method;
    double error_estimate;
};

inline SumConfig sum_config(const EvalOptions& opt) {
    SumConfig cfg;
    if (!opt.schedule.empty()) cfg.schedule = opt.schedule;
    cfg.extrapolate = opt.extrapolate;
    return cfg;
}

inline ShapeSpec require_shape(const EvalOptions& opt, const char* why) {
    if (opt.shape_arg.empty()) {
        throw config_error(std::string(why) + " requires --shape");
    }
    return parse_shape_arg(opt.shape_arg);
}

inline Outcome eval_g2(const EvalOptions& opt, const TauPoint& tau) {
    if (opt.method == "auto" || opt.method == "reference") {
        const auto r = g2_ref(tau, opt.tol.value_or(1e-12));
        return {r.value, r.method, r.error_estimate};
    }
    if (opt.method == "abs-series") {
        const auto r = g2_abs_series(tau, opt.tol.value_or(1e-8));
        return {r.value, r.method, r.error_estimate};
    }
    if (opt.method == "lattice") {
        const auto shape = require_shape(opt, "g2 lattice evaluation");
        const auto r = g2_shape(shape, tau, sum_config(opt));
        return {r.value, r.method, r.error_estimate};
    }
    throw config_error("method '" + opt.method +
                       "' not applicable to g2 (use auto, reference, "
                       "abs-series, or lattice)");
}

inline Outcome eval_residual(const EvalOptions& opt, const TauPoint& tau) {
    const auto shape = require_shape(opt, "residual evaluation");
    if (opt.method == "auto") {
        const auto r = residual_auto(shape, tau);
        return {r.value, r.method, r.error_estimate};
    }
    if (opt.method == "closed") {
        const auto r = residual_closed_form(shape, tau);
        return {r.value, r.method, r.error_estimate};
    }
    if (opt.method == "integral") {
        const auto r = residual_integral(shape, tau);
        return {r.value, r.method, r.error_estimate};
    }
    if (opt.method == "lattice") {
        const auto r =
            residual_lattice(shape, tau, sum_config(opt), opt.tol.value_or(1e-12));
        return {r.value, r.method, r.error_estimate};
    }
    throw config_error("method '" + opt.method +
                       "' not applicable to residual (use auto, closed, "
                       "integral, or lattice)");
}

inline Outcome eval_wp(const EvalOptions& opt, const TauPoint& tau) {
    if (opt.z_arg.empty()) {
        throw config_error("wp evaluation requires --z");
    }
    const cplx z = parse_complex(opt.z_arg);
    if (opt.method == "auto" || opt.method == "reference") {
        const auto r = wp_ref(z, tau, opt.tol.value_or(1e-12));
        return {r.value, r.method, r.error_estimate};
    }
    if (opt.method == "direct") {
        const auto r = wp_abs_direct(z, tau, opt.radius);
        return {r.value, r.method, r.error_estimate};
    }
    if (opt.method == "lattice") {
        const auto shape = require_shape(opt, "wp lattice evaluation");
        const auto r = wp_shape(shape, z, tau, sum_config(opt));
        return {r.value, r.method, r.error_estimate};
    }
    throw config_error("method '" + opt.method +
                       "' not applicable to wp (use auto, reference, direct, "
                       "or lattice)");
}

}  // namespace detail

inline json run_eval(const EvalOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();

    if (opt.tau_arg.empty()) throw config_error("eval requires --tau");
    const TauPoint tau(parse_complex(opt.tau_arg));

    detail::Outcome out{};
    if (opt.target == "g2") {
        out = detail::eval_g2(opt, tau);
    } else if (opt.target == "residual") {
        out = detail::eval_residual(opt, tau);
    } else if (opt.target == "wp") {
        out = detail::eval_wp(opt, tau);
    } else {
        throw config_error("unknown eval target '" + opt.target +
                           "' (use g2, residual, or wp)");
    }

    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  t0)
            .count();

    json inputs;
    inputs["tau"] = complex_json(tau.value());
    if (!opt.z_arg.empty()) inputs["z"] = complex_json(parse_complex(opt.z_arg));
    if (!opt.shape_arg.empty()) inputs["shape"] = opt.shape_arg;
    inputs["method"] = opt.method;
    if (opt.tol) inputs["tol"] = *opt.tol;
    if (out.method == Method::Lattice) {
        inputs["schedule"] = detail::sum_config(opt).schedule;
        inputs["extrapolate"] = opt.extrapolate;
    }
    if (opt.target == "wp" && opt.method == "direct") {
        inputs["radius"] = opt.radius;
    }

    json doc;
    doc["command"] = "eval";
    doc["target"] = opt.target;
    doc["inputs"] = inputs;
    doc["method"] = to_string(out.method);
    doc["value"] = complex_json(out.value);
    doc["error_estimate"] = out.error_estimate;
    doc["wall_time_ms"] = ms;
    return doc;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    std::string shape_arg;
    std::string method = "auto";  // auto | closed | integral | lattice
    double re_min = 0.0, re_max = 0.0;
    int re_steps = 1;
    double im_min = 1.0, im_max = 1.0;
    int im_steps = 1;
};

inline std::string run_sweep(const SweepOptions& opt) {
    if (opt.shape_arg.empty()) throw config_error("sweep requires --shape");
    const auto shape = parse_shape_arg(opt.shape_arg);
    if (opt.re_steps < 1 || opt.im_steps < 1) {
        throw config_error("sweep step counts must be >= 1");
    }
    if (opt.re_steps > 1 && !(opt.re_min < opt.re_max)) {
        throw config_error("sweep needs re-min < re-max when re-steps > 1");
    }
    if (opt.im_steps > 1 && !(opt.im_min < opt.im_max)) {
        throw config_error("sweep needs im-min < im-max when im-steps > 1");
    }
    if (opt.im_min < TauPoint::im_guard) {
        throw config_error("sweep grid must satisfy im-min >= 1e-6");
    }

    const auto grid_value = [](double lo, double hi, int steps, int k) {
        if (steps == 1) return lo;
        return lo + (hi - lo) * static_cast<double>(k) /
                        static_cast<double>(steps - 1);
    };

    const auto evaluate = [&](const TauPoint& tau) -> ResidualValue {
        if (opt.method == "auto") return residual_auto(shape, tau);
        if (opt.method == "closed") return residual_closed_form(shape, tau);
        if (opt.method == "integral") return residual_integral(shape, tau);
        if (opt.method == "lattice") return residual_lattice(shape, tau);
        throw config_error("unknown sweep method '" + opt.method + "'");
    };

    std::ostringstream os;
    os << "re_tau,im_tau,re_E,im_E,error_estimate\n";
    for (int ki = 0; ki < opt.im_steps; ++ki) {
        const double im = grid_value(opt.im_min, opt.im_max, opt.im_steps, ki);
        for (int kr = 0; kr < opt.re_steps; ++kr) {
            const double re = grid_value(opt.re_min, opt.re_max, opt.re_steps, kr);
            const TauPoint tau(cplx(re, im));
            const auto r = evaluate(tau);
            os << format_double(re) << ',' << format_double(im) << ','
               << format_double(r.value.real()) << ','
               << format_double(r.value.imag()) << ','
               << format_double(r.error_estimate) << '\n';
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
    bool quick = false;
    bool as_json = false;
};

struct VerifyOutput {
    std::string text;
    int exit_code = 0;
};

inline VerifyOutput run_verify(const VerifyOptions& opt) {
    const auto results = run_verification(opt.quick);
    int failed = 0;
    for (const auto& r : results) {
        if (!r.pass) ++failed;
    }

    if (opt.as_json) {
        json doc;
        doc["command"] = "verify";
        doc["mode"] = opt.quick ? "quick" : "full";
        json checks = json::array();
        for (const auto& r : results) {
            json c;
            c["name"] = r.name;
            c["pass"] = r.pass;
            c["observed"] = r.observed;
            c["tolerance"] = r.tolerance;
            c["detail"] = r.detail;
            json vals;
            for (const auto& [label, v] : r.values) vals[label] = complex_json(v);
            c["values"] = vals;
            checks.push_back(std::move(c));
        }
        doc["checks"] = std::move(checks);
        doc["passed"] = static_cast<int>(results.size()) - failed;
        doc["failed"] = failed;
        return {doc.dump(2) + "\n", failed == 0 ? 0 : 1};
    }

    std::ostringstream os;
    for (const auto& r : results) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-4s %-26s observed %-12.4g tol %-10.3g %s\n",
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.observed,
                      r.tolerance, r.detail.c_str());
        os << line;
    }
    os << (results.size() - failed) << "/" << results.size() << " checks passed ("
       << (opt.quick ? "quick" : "full") << " mode)\n";
    return {os.str(), failed == 0 ? 0 : 1};
}

// ---------------------------------------------------------------------------
// shapes

inline std::string run_shapes(const std::string& shape_arg) {
    std::ostringstream os;
    if (shape_arg.empty()) {
        os << "builtin shapes:\n"
           << "  disk             unit disk, support 1\n"
           << "  diamond          |x| + |y| <= 1, support 1\n"
           << "  rect:c=<float>   [-c, c] x [-1, 1], support c\n"
           << "custom profiles:\n"
           << "  file:<path>      JSON array of [x, h] breakpoints, e.g.\n"
           << "                   [[0.0, 1.0], [0.5, 0.8], [1.0, 0.0]]\n";
        return os.str();
    }
    const auto shape = parse_shape_arg(shape_arg);
    os << "shape: " << shape.describe() << "\n"
       << "support: " << format_double(support(shape)) << "\n"
       << "area: " << format_double(area(shape)) << "\n"
       << "height(0): " << format_double(height(shape, 0.0)) << "\n"
       << "transpose: " << transpose(shape).describe() << "\n";
    if (shape.kind() == ShapeKind::Custom) {
        os << "breakpoints: " << shape.grid_x().size() << "\n";
    }
    return os.str();
}

}  // namespace shapesum::cli
