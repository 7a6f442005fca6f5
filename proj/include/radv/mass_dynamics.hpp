#pragma once

// Mean-field praise/attack dynamics and their local stability.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "radv/errors.hpp"
#include "radv/reference_payoff.hpp"
#include "radv/shape.hpp"

namespace radv {

struct MassParams {
    double eta = 1.0;   ///< response sensitivity
    double c_bar = 0.0; ///< representative participation cost
    double kappa = 1.0; ///< diffusion gain
    double rho = 0.5;   ///< damping toward the baseline
    double x_bar = 0.0; ///< baseline
    double beta_plus = 0.0;
    double beta_minus = 0.0;
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    ShapeFn g2;
    ShapeFn g3;

    void validate() const {
        detail::require(eta > 0.0 && std::isfinite(eta), "mass: eta > 0");
        detail::require(kappa >= 0.0 && std::isfinite(kappa), "mass: kappa >= 0");
        detail::require(rho > 0.0 && std::isfinite(rho), "mass: rho > 0");
        detail::require(std::isfinite(c_bar) && std::isfinite(x_bar), "mass: c_bar and x_bar finite");
        for (double w : {beta_plus, beta_minus, gamma_plus, gamma_minus})
            detail::require(w >= 0.0 && std::isfinite(w), "mass: beta and gamma weights >= 0");
    }

    bool operator==(const MassParams&) const = default;
};

struct MassState {
    double x = 0.0;
    double forecast = 0.0;
    double reference = 0.0;

    double surprise() const { return x - forecast; }
    double deviation() const { return x - reference; }

    bool operator==(const MassState&) const = default;
};

inline double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline double logistic_derivative(double z) {
    const double s = logistic(z);
    return s * (1.0 - s);
}

struct ResponseRates {
    double praise; ///< P_t
    double attack; ///< N_t
};

namespace detail {

inline double praise_signal(const MassParams& p, double surprise, double deviation) {
    return p.eta * (p.beta_plus * p.g2(positive_part(surprise)) + p.gamma_plus * p.g3(positive_part(deviation))) -
           p.c_bar;
}

inline double attack_signal(const MassParams& p, double surprise, double deviation) {
    return p.eta * (p.beta_minus * p.g2(negative_part(surprise)) + p.gamma_minus * p.g3(negative_part(deviation))) -
           p.c_bar;
}

} // namespace detail

inline ResponseRates response_rates(const MassParams& p, double surprise, double deviation) {
    return {logistic(detail::praise_signal(p, surprise, deviation)),
            logistic(detail::attack_signal(p, surprise, deviation))};
}

/// x' = x + kappa (P - N) - rho (x - x_bar), forecast and reference held fixed.
inline double step(const MassState& s, const MassParams& p) {
    const auto r = response_rates(p, s.surprise(), s.deviation());
    return s.x + p.kappa * (r.praise - r.attack) - p.rho * (s.x - p.x_bar);
}

/// d/dx of kappa (P - N). A difference sitting exactly at zero contributes
/// nothing (strict indicators).
///
/// Below the forecast or reference, raising x shrinks the shortfall and so the
/// attack rate, which pushes P - N up: d(z)_-/dz = -1 and the minus in front
/// of N cancel, so both sides enter with a plus sign and G >= 0.
inline double local_gain(const MassParams& p, double surprise, double deviation) {
    double up = 0.0;
    if (surprise > 0.0) up += p.beta_plus * p.g2.derivative(surprise);
    if (deviation > 0.0) up += p.gamma_plus * p.g3.derivative(deviation);
    double down = 0.0;
    if (surprise < 0.0) down += p.beta_minus * p.g2.derivative(-surprise);
    if (deviation < 0.0) down += p.gamma_minus * p.g3.derivative(-deviation);
    return p.kappa * p.eta *
           (logistic_derivative(detail::praise_signal(p, surprise, deviation)) * up +
            logistic_derivative(detail::attack_signal(p, surprise, deviation)) * down);
}

inline double jacobian(double gain, double rho) { return 1.0 + gain - rho; }

enum class StabilityLabel : std::uint8_t { Stable, Buzz, Backlash, Boundary };

inline const char* to_string(StabilityLabel l) {
    switch (l) {
    case StabilityLabel::Stable: return "Stable";
    case StabilityLabel::Buzz: return "Buzz";
    case StabilityLabel::Backlash: return "Backlash";
    case StabilityLabel::Boundary: return "Boundary";
    }
    return "?";
}

inline StabilityLabel classify_stability(double j, double tol = 1e-9) {
    detail::require(tol >= 0.0, "stability: tol >= 0");
    if (std::abs(j) < 1.0 - tol) return StabilityLabel::Stable;
    if (j > 1.0 + tol) return StabilityLabel::Buzz;
    if (j < -1.0 - tol) return StabilityLabel::Backlash;
    return StabilityLabel::Boundary;
}

/// Root of step(x) - x nearest (by bracket growth) to `start.x`. The drift is
/// bounded by kappa, so a root always exists in [x_bar - kappa/rho, x_bar + kappa/rho];
/// bisection finds unstable roots too.
inline double find_fixed_point(const MassState& start, const MassParams& p, std::size_t budget = 200) {
    const auto drift = [&](double x) { return step({x, start.forecast, start.reference}, p) - x; };
    const double x0 = start.x;
    const double h0 = drift(x0);
    if (h0 == 0.0) return x0;

    const auto bisect = [&](double lo, double hi, double h_lo) {
        for (std::size_t i = 0; i < 2000; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double h = drift(mid);
            if (h == 0.0) return mid;
            if ((h > 0.0) == (h_lo > 0.0)) {
                lo = mid;
                h_lo = h;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    double width = 1e-9 * std::max(1.0, std::abs(x0));
    for (std::size_t i = 0; i < budget; ++i, width *= 2.0) {
        const double left = x0 - width;
        const double h_left = drift(left);
        if (!std::isfinite(h_left)) break;
        if ((h_left > 0.0) != (h0 > 0.0) || h_left == 0.0) return bisect(left, x0, h_left);
        const double right = x0 + width;
        const double h_right = drift(right);
        if ((h_right > 0.0) != (h0 > 0.0) || h_right == 0.0) return bisect(x0, right, h0);
    }
    throw NoFixedPointFound("no fixed point of the mass dynamics found near the initial state");
}

struct MassRow {
    std::size_t t;
    double x;
    double surprise;
    double deviation;
    double praise;
    double attack;
    double gain;
    double jacobian;
    StabilityLabel label;
};

struct MassSimulation {
    double fixed_point;
    double gain;     ///< G at the fixed point
    double jacobian; ///< J at the fixed point
    StabilityLabel analytic;
    StabilityLabel empirical;
    /// Per-step growth factor of |x - x*| over the observation window.
    double growth_factor;
    std::vector<MassRow> rows;
};

namespace detail {

inline MassRow mass_row(std::size_t t, const MassState& s, const MassParams& p) {
    const auto r = response_rates(p, s.surprise(), s.deviation());
    const double g = local_gain(p, s.surprise(), s.deviation());
    const double j = jacobian(g, p.rho);
    return {t, s.x, s.surprise(), s.deviation(), r.praise, r.attack, g, j, classify_stability(j)};
}

} // namespace detail

/// Iterates the map from its fixed point displaced by `perturbation` and
/// labels what the deviation does. The window ends early once the deviation
/// grows past 100x or shrinks below 1e-6 of its starting size, which keeps the
/// label about local behaviour and clear of rounding noise.
inline MassSimulation simulate_mass(const MassState& state0, const MassParams& p, std::size_t steps,
                                    double perturbation) {
    p.validate();
    detail::require(steps >= 2, "mass: steps >= 2");
    detail::require(perturbation != 0.0 && std::isfinite(perturbation), "mass: perturbation nonzero");

    MassSimulation out{};
    out.fixed_point = find_fixed_point(state0, p);
    const MassState fixed{out.fixed_point, state0.forecast, state0.reference};
    out.gain = local_gain(p, fixed.surprise(), fixed.deviation());
    out.jacobian = jacobian(out.gain, p.rho);
    out.analytic = classify_stability(out.jacobian);

    MassState s{out.fixed_point + perturbation, state0.forecast, state0.reference};
    std::vector<double> deviation{s.x - out.fixed_point};
    out.rows.push_back(detail::mass_row(0, s, p));
    std::size_t window = steps;
    for (std::size_t t = 1; t <= steps; ++t) {
        s.x = step(s, p);
        out.rows.push_back(detail::mass_row(t, s, p));
        deviation.push_back(s.x - out.fixed_point);
        const double ratio = std::abs(deviation.back()) / std::abs(deviation.front());
        if (window == steps && (ratio > 100.0 || ratio < 1e-6)) window = t;
    }

    const double d0 = deviation.front();
    const double dt = deviation[window];
    out.growth_factor = std::pow(std::abs(dt) / std::abs(d0), 1.0 / static_cast<double>(window));
    if (out.growth_factor < 1.0 - 1e-3) {
        out.empirical = StabilityLabel::Stable;
    } else if (out.growth_factor > 1.0 + 1e-3) {
        bool same_sign = true;
        bool alternating = true;
        for (std::size_t t = 1; t <= window; ++t) {
            if ((deviation[t] > 0.0) != (d0 > 0.0)) same_sign = false;
            if ((deviation[t] > 0.0) == (deviation[t - 1] > 0.0)) alternating = false;
        }
        out.empirical = same_sign     ? StabilityLabel::Buzz
                        : alternating ? StabilityLabel::Backlash
                                      : StabilityLabel::Boundary;
    } else {
        out.empirical = StabilityLabel::Boundary;
    }
    return out;
}

} // namespace radv
