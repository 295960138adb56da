#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shapesum {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Error taxonomy, mirrored by the CLI exit codes:
//   config_error   -> 2 (bad arguments, bad schedules, invalid shapes)
//   domain_error   -> 3 (pole proximity, half-plane guard, unsupported shape)
//   resource_error -> 4 (term budget or subdivision budget exhausted)
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class config_error : public error {
public:
    using error::error;
};

class domain_error : public error {
public:
    using error::error;
};

class resource_error : public error {
public:
    using error::error;
};

// Neumaier-compensated accumulator, applied to the real and imaginary parts
// separately. Summation order fixes the result bit-for-bit.
class CompensatedSum {
public:
    void add(cplx v) {
        add_part(re_, re_c_, v.real());
        add_part(im_, im_c_, v.imag());
    }

    void add(double v) { add_part(re_, re_c_, v); }

    cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_part(double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x)) {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }

    double re_ = 0.0, re_c_ = 0.0;
    double im_ = 0.0, im_c_ = 0.0;
};

// How a value was produced. Carried alongside results so callers and the CLI
// can report which evaluation path ran.
enum class Method { Reference, AbsSeries, Lattice, Telescope, Integral, ClosedForm };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::Reference: return "reference";
        case Method::AbsSeries: return "abs-series";
        case Method::Lattice: return "lattice";
        case Method::Telescope: return "telescope";
        case Method::Integral: return "integral";
        case Method::ClosedForm: return "closed";
    }
    return "?";
}

// Round half to even (std::round rounds half away from zero, which would make
// the fundamental-domain reduction depend on the sign of the input).
inline double round_half_even(double x) {
    const double f = std::floor(x);
    const double frac = x - f;
    if (frac > 0.5) return f + 1.0;
    if (frac < 0.5) return f;
    return (std::fmod(f, 2.0) == 0.0) ? f : f + 1.0;
}

inline std::int64_t isqrt_i64(std::int64_t v) {
    if (v < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// 1/sin^2(w), safe for arbitrarily large |Im w|. Beyond the switchover the
// single exponential term is already accurate to machine precision and the
// naive form would overflow sinh.
inline cplx inv_sin_sq(cplx w) {
    if (w.imag() < 0.0) w = -w;
    if (w.imag() > 19.0) {
        return -4.0 * std::exp(cplx(0.0, 2.0) * w);
    }
    const cplx s = std::sin(w);
    return 1.0 / (s * s);
}

// Deterministic 64-bit generator (splitmix64). Sampling grids for checks and
// tests must not depend on the standard library's distribution internals,
// which vary between implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform draw from [lo, hi).
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

private:
    std::uint64_t state_;
};

// The modular parameter. Construction enforces the upper-half-plane guard;
// every consumer can then assume Im tau >= im_guard.
class TauPoint {
public:
    static constexpr double im_guard = 1e-6;

    explicit TauPoint(cplx v) : v_(v) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw domain_error("tau must be finite");
        }
        if (v.imag() < im_guard) {
            throw domain_error("tau must satisfy Im(tau) >= 1e-6, got Im = " +
                               std::to_string(v.imag()));
        }
    }

    cplx value() const { return v_; }
    double re() const { return v_.real(); }
    double im() const { return v_.imag(); }

    // -1/tau, re-guarded (Im(-1/tau) = Im(tau)/|tau|^2 can fall below the
    // guard for large |tau|).
    TauPoint inverted() const { return TauPoint(-1.0 / v_); }

private:
    cplx v_;
};

}  // namespace shapesum
