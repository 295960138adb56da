#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "shapesum/common.hpp"

namespace shapesum {

/// Convex, compact, axis-symmetric summation region, described by its upper
/// height profile h on x >= 0: the region is {(x, y) : |y| <= h(|x|)}.
///
/// Builtin profiles:
///   Rectangle(c)  h(x) = 1 on [0, c]   (region [-c, c] x [-1, 1])
///   Disk          h(x) = sqrt(1 - x^2) on [0, 1]
///   Diamond       h(x) = 1 - x on [0, 1]
///   Custom        piecewise-linear through breakpoints (x_i, h_i)
enum class ShapeKind { Rectangle, Disk, Diamond, Custom };

class ShapeSpec {
public:
    static ShapeSpec rectangle(double half_width) {
        if (!std::isfinite(half_width) || half_width <= 0.0) {
            throw config_error("rectangle half-width must be a positive finite real");
        }
        ShapeSpec s;
        s.kind_ = ShapeKind::Rectangle;
        s.aspect_ = half_width;
        return s;
    }

    static ShapeSpec disk() {
        ShapeSpec s;
        s.kind_ = ShapeKind::Disk;
        return s;
    }

    static ShapeSpec diamond() {
        ShapeSpec s;
        s.kind_ = ShapeKind::Diamond;
        return s;
    }

    /// Builds a piecewise-linear profile from (x, h) breakpoints. Structural
    /// problems are not rejected here; validate() reports them so callers can
    /// surface every violation at once.
    static ShapeSpec custom(std::vector<std::pair<double, double>> profile) {
        ShapeSpec s;
        s.kind_ = ShapeKind::Custom;
        s.xs_.reserve(profile.size());
        s.hs_.reserve(profile.size());
        for (const auto& [x, h] : profile) {
            s.xs_.push_back(x);
            s.hs_.push_back(h);
        }
        return s;
    }

    ShapeKind kind() const { return kind_; }

    /// Rectangle half-width; meaningful only for ShapeKind::Rectangle.
    double aspect() const { return aspect_; }

    const std::vector<double>& grid_x() const { return xs_; }
    const std::vector<double>& grid_h() const { return hs_; }

    std::string describe() const {
        switch (kind_) {
            case ShapeKind::Rectangle: {
                std::ostringstream os;
                os << "rect:c=" << aspect_;
                return os.str();
            }
            case ShapeKind::Disk:
                return "disk";
            case ShapeKind::Diamond:
                return "diamond";
            case ShapeKind::Custom:
                return "custom[" + std::to_string(xs_.size()) + " points]";
        }
        return "?";
    }

private:
    ShapeSpec() = default;

    ShapeKind kind_ = ShapeKind::Disk;
    double aspect_ = 0.0;
    std::vector<double> xs_, hs_;
};

struct Violation {
    enum class Kind {
        GridOrder,        // abscissae not finite / not strictly increasing / x0 != 0
        EmptyProfile,     // fewer than two breakpoints
        NegativeHeight,   // some h_i < 0
        ZeroAtOrigin,     // h(0) <= 0 (interior would be empty)
        ZeroSupport,      // support A <= 0
        NotMonotone,      // h increases somewhere
        NotConcave,       // midpoint concavity test failed
        NonFinite,        // NaN or infinity among heights
    };

    Kind kind;
    int index;  // offending breakpoint, or -1 when not tied to one
    std::string message;
};

/// Checks a Custom profile against every structural requirement and returns
/// all violations (empty for builtin shapes, which satisfy them by
/// construction).
inline std::vector<Violation> validate(const ShapeSpec& s) {
    std::vector<Violation> out;
    if (s.kind() != ShapeKind::Custom) return out;

    const auto& xs = s.grid_x();
    const auto& hs = s.grid_h();
    const int n = static_cast<int>(xs.size());

    if (n < 2) {
        out.push_back({Violation::Kind::EmptyProfile, -1,
                       "profile needs at least two breakpoints"});
        return out;
    }

    bool grid_ok = true;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(hs[i])) {
            out.push_back({Violation::Kind::NonFinite, i,
                           "non-finite coordinate at index " + std::to_string(i)});
            grid_ok = false;
        }
    }
    if (!grid_ok) return out;

    if (xs[0] != 0.0) {
        out.push_back({Violation::Kind::GridOrder, 0,
                       "profile must start at x = 0"});
        grid_ok = false;
    }
    for (int i = 1; i < n; ++i) {
        if (!(xs[i] > xs[i - 1])) {
            out.push_back({Violation::Kind::GridOrder, i,
                           "abscissae must be strictly increasing (index " +
                               std::to_string(i) + ")"});
            grid_ok = false;
        }
    }
    if (!grid_ok) return out;

    if (hs[0] <= 0.0) {
        out.push_back({Violation::Kind::ZeroAtOrigin, 0,
                       "h(0) must be positive, got " + std::to_string(hs[0])});
    }
    if (xs[n - 1] <= 0.0) {
        out.push_back({Violation::Kind::ZeroSupport, n - 1,
                       "support must be positive"});
    }
    for (int i = 0; i < n; ++i) {
        if (hs[i] < 0.0) {
            out.push_back({Violation::Kind::NegativeHeight, i,
                           "negative height at index " + std::to_string(i)});
        }
    }
    for (int i = 1; i < n; ++i) {
        if (hs[i] > hs[i - 1]) {
            out.push_back({Violation::Kind::NotMonotone, i,
                           "height increases at index " + std::to_string(i)});
        }
    }
    // Concavity of the piecewise-linear interpolant is equivalent to
    // nonincreasing segment slopes.
    for (int i = 1; i + 1 < n; ++i) {
        const double left = (hs[i] - hs[i - 1]) / (xs[i] - xs[i - 1]);
        const double right = (hs[i + 1] - hs[i]) / (xs[i + 1] - xs[i]);
        if (right > left + 1e-12) {
            out.push_back({Violation::Kind::NotConcave, i,
                           "profile not concave at index " + std::to_string(i)});
        }
    }
    return out;
}

inline void ensure_valid(const ShapeSpec& s) {
    const auto v = validate(s);
    if (v.empty()) return;
    std::string msg = "invalid shape profile:";
    for (const auto& viol : v) msg += " [" + viol.message + "]";
    throw config_error(msg);
}

/// Half-width of the support interval: the region is contained in
/// [-A, A] x [-h(0), h(0)] with A = support(s).
inline double support(const ShapeSpec& s) {
    switch (s.kind()) {
        case ShapeKind::Rectangle: return s.aspect();
        case ShapeKind::Disk:
        case ShapeKind::Diamond: return 1.0;
        case ShapeKind::Custom: return s.grid_x().empty() ? 0.0 : s.grid_x().back();
    }
    return 0.0;
}

/// Upper boundary height at |x|; zero outside the support.
inline double height(const ShapeSpec& s, double x) {
    x = std::abs(x);
    switch (s.kind()) {
        case ShapeKind::Rectangle:
            return x <= s.aspect() ? 1.0 : 0.0;
        case ShapeKind::Disk:
            return x <= 1.0 ? std::sqrt(std::max(0.0, 1.0 - x * x)) : 0.0;
        case ShapeKind::Diamond:
            return x <= 1.0 ? 1.0 - x : 0.0;
        case ShapeKind::Custom: {
            const auto& xs = s.grid_x();
            const auto& hs = s.grid_h();
            if (xs.empty() || x > xs.back()) return 0.0;
            if (x <= xs.front()) return hs.front();
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t j = static_cast<std::size_t>(it - xs.begin());
            const double x0 = xs[j - 1], x1 = xs[j];
            const double h0 = hs[j - 1], h1 = hs[j];
            const double t = (x - x0) / (x1 - x0);
            return h0 + t * (h1 - h0);
        }
    }
    return 0.0;
}

/// Closed-region membership test for the point (x, y).
inline bool contains(const ShapeSpec& s, double x, double y) {
    x = std::abs(x);
    y = std::abs(y);
    switch (s.kind()) {
        case ShapeKind::Rectangle:
            return x <= s.aspect() && y <= 1.0;
        case ShapeKind::Disk:
            return x * x + y * y <= 1.0;
        case ShapeKind::Diamond:
            return x + y <= 1.0;
        case ShapeKind::Custom:
            return x <= support(s) && y <= height(s, x);
    }
    return false;
}

/// Area of the full region, 4 * integral of h over [0, A].
inline double area(const ShapeSpec& s) {
    switch (s.kind()) {
        case ShapeKind::Rectangle: return 4.0 * s.aspect();
        case ShapeKind::Disk: return pi;
        case ShapeKind::Diamond: return 2.0;
        case ShapeKind::Custom: {
            const auto& xs = s.grid_x();
            const auto& hs = s.grid_h();
            double acc = 0.0;
            for (std::size_t i = 1; i < xs.size(); ++i) {
                acc += 0.5 * (hs[i] + hs[i - 1]) * (xs[i] - xs[i - 1]);
            }
            return 4.0 * acc;
        }
    }
    return 0.0;
}

/// Reflection across the diagonal: K^T = {(x, y) : (y, x) in K}.
///
/// Disk and Diamond are their own transposes. Rectangle(c) maps to the
/// normalized Rectangle(1/c), which describes the same region up to the
/// overall scale factor c. A Custom profile is inverted exactly: since the
/// interpolant is piecewise linear and strictly decreasing past any leading
/// plateau, swapping the coordinates of its breakpoints yields the transposed
/// profile with no resampling error. A leading plateau of the input becomes
/// the terminal jump of the output and vice versa.
inline ShapeSpec transpose(const ShapeSpec& s) {
    switch (s.kind()) {
        case ShapeKind::Rectangle: return ShapeSpec::rectangle(1.0 / s.aspect());
        case ShapeKind::Disk:
        case ShapeKind::Diamond: return s;
        case ShapeKind::Custom: break;
    }
    ensure_valid(s);

    const auto& xs = s.grid_x();
    const auto& hs = s.grid_h();
    const int n = static_cast<int>(xs.size());

    // Plateau at the top: indices [0, p] share the maximal height.
    int p = 0;
    while (p + 1 < n && hs[p + 1] == hs[0]) ++p;

    // Inversion needs strict decrease beyond the plateau.
    for (int i = p; i + 1 < n; ++i) {
        if (!(hs[i + 1] < hs[i])) {
            throw domain_error(
                "transpose requires a strictly decreasing profile past the "
                "plateau (offending index " + std::to_string(i + 1) + ")");
        }
    }

    std::vector<std::pair<double, double>> flipped;
    flipped.reserve(static_cast<std::size_t>(n) + 1);
    if (hs[n - 1] > 0.0) {
        // The profile ends above the axis, so the transpose starts with a
        // plateau of width h_last at height x_last.
        flipped.emplace_back(0.0, xs[n - 1]);
        flipped.emplace_back(hs[n - 1], xs[n - 1]);
    } else {
        flipped.emplace_back(0.0, xs[n - 1]);
    }
    for (int i = n - 2; i >= p; --i) {
        flipped.emplace_back(hs[i], xs[i]);
    }
    return ShapeSpec::custom(std::move(flipped));
}

/// Dilation by a positive factor: scaled(s, f) describes f * K. Rectangle and
/// Diamond are converted to exact Custom profiles first; the Disk boundary is
/// not piecewise linear, so a dilated Disk has no exact representation here.
inline ShapeSpec scaled(const ShapeSpec& s, double factor) {
    if (!std::isfinite(factor) || factor < 1e-3 || factor > 1e3) {
        throw config_error("scale factor must lie in [1e-3, 1e3]");
    }
    std::vector<std::pair<double, double>> pts;
    switch (s.kind()) {
        case ShapeKind::Rectangle:
            pts = {{0.0, 1.0}, {s.aspect(), 1.0}};
            break;
        case ShapeKind::Diamond:
            pts = {{0.0, 1.0}, {1.0, 0.0}};
            break;
        case ShapeKind::Disk:
            throw domain_error("scaled disk has no exact piecewise-linear profile");
        case ShapeKind::Custom:
            ensure_valid(s);
            for (std::size_t i = 0; i < s.grid_x().size(); ++i) {
                pts.emplace_back(s.grid_x()[i], s.grid_h()[i]);
            }
            break;
    }
    for (auto& [x, h] : pts) {
        x *= factor;
        h *= factor;
    }
    return ShapeSpec::custom(std::move(pts));
}

/// Custom rendition of a shape. Rectangle and Diamond convert exactly; the
/// Disk is sampled at `samples` + 1 uniformly spaced abscissae (an inscribed
/// approximation, useful for demos and convergence studies).
inline ShapeSpec as_custom(const ShapeSpec& s, int samples = 64) {
    switch (s.kind()) {
        case ShapeKind::Rectangle:
            return ShapeSpec::custom({{0.0, 1.0}, {s.aspect(), 1.0}});
        case ShapeKind::Diamond:
            return ShapeSpec::custom({{0.0, 1.0}, {1.0, 0.0}});
        case ShapeKind::Custom:
            return s;
        case ShapeKind::Disk: {
            if (samples < 2) throw config_error("disk sampling needs >= 2 segments");
            std::vector<std::pair<double, double>> pts;
            pts.reserve(static_cast<std::size_t>(samples) + 1);
            for (int i = 0; i <= samples; ++i) {
                const double x = static_cast<double>(i) / samples;
                pts.emplace_back(x, std::sqrt(std::max(0.0, 1.0 - x * x)));
            }
            return ShapeSpec::custom(std::move(pts));
        }
    }
    return s;
}

}  // namespace shapesum
