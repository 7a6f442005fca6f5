#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "radv/errors.hpp"

namespace radv {

/// Effective recognition F(w) for the nonlinear variant of the transformed
/// game. Every curve must satisfy F(0) = 0, be nondecreasing and stay in [0, 1].
class RecognitionCurve {
public:
    struct LinearClamped {
        bool operator==(const LinearClamped&) const = default;
    };

    /// F(w) = 1 - exp(-rate w). Concave: diminishing empathy.
    struct SaturatingExponential {
        double rate = 1.0;
        bool operator==(const SaturatingExponential&) const = default;
    };

    /// Logistic step centred at `midpoint`, renormalised so that F(0) = 0 and
    /// F(inf) = 1. Convex below the midpoint: tipping-point behaviour.
    struct LogisticShifted {
        double steepness = 1.0;
        double midpoint = 0.0;
        bool operator==(const LogisticShifted&) const = default;
    };

    /// Piecewise-linear through (w_k, F_k); held constant past the last knot.
    struct Tabulated {
        std::vector<double> w;
        std::vector<double> f;
        bool operator==(const Tabulated&) const = default;
    };

    using Shape = std::variant<LinearClamped, SaturatingExponential, LogisticShifted, Tabulated>;

    RecognitionCurve() = default;

    explicit RecognitionCurve(Shape shape) : shape_(std::move(shape)) { validate_parameters(); }

    static RecognitionCurve linear_clamped() { return RecognitionCurve(LinearClamped{}); }
    static RecognitionCurve saturating_exponential(double rate) {
        return RecognitionCurve(SaturatingExponential{rate});
    }
    static RecognitionCurve logistic_shifted(double steepness, double midpoint) {
        return RecognitionCurve(LogisticShifted{steepness, midpoint});
    }
    static RecognitionCurve tabulated(std::vector<double> w, std::vector<double> f) {
        return RecognitionCurve(Tabulated{std::move(w), std::move(f)});
    }

    const Shape& shape() const noexcept { return shape_; }

    bool operator==(const RecognitionCurve&) const = default;

    std::string name() const {
        return std::visit(
            [](const auto& s) -> std::string {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, LinearClamped>) return "linear_clamped";
                else if constexpr (std::is_same_v<S, SaturatingExponential>) return "saturating_exponential";
                else if constexpr (std::is_same_v<S, LogisticShifted>) return "logistic_shifted";
                else return "tabulated";
            },
            shape_);
    }

    double operator()(double w) const {
        return std::visit([w](const auto& s) { return evaluate(s, w); }, shape_);
    }

    /// Dense-sampling check of the curve invariants on [0, upper]. Throws
    /// CurveError naming the first violation found.
    void check_sampled(double upper, std::size_t samples = 257) const {
        if (samples < 2) samples = 2;
        const double f0 = (*this)(0.0);
        if (f0 != 0.0) fail("F(0) = 0", 0.0, f0);
        // A tabulated curve is exactly its knots, so check all of them whatever the range.
        if (const auto* t = std::get_if<Tabulated>(&shape_))
            for (std::size_t i = 0; i < t->w.size(); ++i) {
                if (!(t->f[i] >= 0.0 && t->f[i] <= 1.0)) fail("0 <= F(w) <= 1", t->w[i], t->f[i]);
                if (i > 0 && t->f[i] < t->f[i - 1]) fail("F nondecreasing", t->w[i], t->f[i]);
            }
        double previous = f0;
        for (std::size_t i = 1; i < samples; ++i) {
            const double w = upper * static_cast<double>(i) / static_cast<double>(samples - 1);
            const double f = (*this)(w);
            if (!(f >= 0.0 && f <= 1.0)) fail("0 <= F(w) <= 1", w, f);
            if (f < previous) fail("F nondecreasing", w, f);
            previous = f;
        }
    }

private:
    static double evaluate(const LinearClamped&, double w) { return std::clamp(w, 0.0, 1.0); }

    static double evaluate(const SaturatingExponential& s, double w) { return -std::expm1(-s.rate * w); }

    static double evaluate(const LogisticShifted& s, double w) {
        const auto sigma = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
        const double base = sigma(-s.steepness * s.midpoint);
        return (sigma(s.steepness * (w - s.midpoint)) - base) / (1.0 - base);
    }

    static double evaluate(const Tabulated& t, double w) {
        if (w <= t.w.front()) return t.f.front();
        if (w >= t.w.back()) return t.f.back();
        const auto hi = std::upper_bound(t.w.begin(), t.w.end(), w);
        const auto j = static_cast<std::size_t>(hi - t.w.begin());
        const double lambda = (w - t.w[j - 1]) / (t.w[j] - t.w[j - 1]);
        return t.f[j - 1] + lambda * (t.f[j] - t.f[j - 1]);
    }

    [[noreturn]] static void fail(const char* invariant, double w, double f) {
        std::ostringstream os;
        os.precision(17);
        os << "recognition curve violates \"" << invariant << "\" at w=" << w << " (F=" << f << ")";
        throw CurveError(os.str());
    }

    void validate_parameters() const {
        std::visit(
            [](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, SaturatingExponential>) {
                    detail::require(s.rate > 0.0 && std::isfinite(s.rate), "saturating_exponential: rate > 0");
                } else if constexpr (std::is_same_v<S, LogisticShifted>) {
                    detail::require(s.steepness > 0.0 && std::isfinite(s.steepness),
                                    "logistic_shifted: steepness > 0");
                    detail::require(std::isfinite(s.midpoint), "logistic_shifted: midpoint finite");
                } else if constexpr (std::is_same_v<S, Tabulated>) {
                    detail::require(s.w.size() >= 2 && s.w.size() == s.f.size(),
                                    "tabulated: at least two knots, equal lengths");
                    detail::require(s.w.front() == 0.0, "tabulated: first knot at w = 0");
                    for (std::size_t i = 1; i < s.w.size(); ++i)
                        detail::require(s.w[i] > s.w[i - 1], "tabulated: knots strictly ascending");
                    // Monotonicity and range of the values are left to check_sampled.
                }
            },
            shape_);
    }

    Shape shape_ = LinearClamped{};
};

} // namespace radv
