#pragma once

// Reference-dependent stage payoff built from three differences of an
// observable state: change, surprise against a forecast, and deviation from
// a reference level. Positive and negative parts carry separate weights.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "radv/errors.hpp"
#include "radv/shape.hpp"
#include "radv/stopping.hpp"

namespace radv {

inline double positive_part(double z) { return std::max(z, 0.0); }
inline double negative_part(double z) { return std::max(-z, 0.0); }

/// Bounded level term h(x).
struct LevelFn {
    enum class Kind { Identity, Clamped };
    Kind kind = Kind::Identity;
    double lower = -1e6;
    double upper = 1e6;

    double operator()(double x) const {
        if (kind == Kind::Clamped) return std::clamp(x, lower, upper);
        detail::require(x >= lower && x <= upper, "reference: h evaluated inside its declared domain");
        return x;
    }

    bool operator==(const LevelFn&) const = default;
};

struct ReferenceParams {
    double alpha = 0.0;
    double beta_plus = 0.0;
    double beta_minus = 0.0;
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    double delta_weight = 0.0; ///< weight on h, not a discount factor
    double cost = 0.0;
    ShapeFn g1;
    ShapeFn g2;
    ShapeFn g3;
    LevelFn h;

    void validate() const {
        for (double v : {alpha, beta_plus, beta_minus, gamma_plus, gamma_minus, delta_weight, cost})
            detail::require(std::isfinite(v), "reference: coefficients finite");
        detail::require(h.lower <= h.upper, "reference: h domain lower <= upper");
    }

    bool operator==(const ReferenceParams&) const = default;
};

struct Observation {
    double x = 0.0;
    double x_prev = 0.0;
    double forecast = 0.0;
    double reference = 0.0;
};

struct Differences {
    double change;    ///< x - x_prev
    double surprise;  ///< x - forecast
    double deviation; ///< x - reference
};

inline Differences differences(const Observation& obs) {
    return {obs.x - obs.x_prev, obs.x - obs.forecast, obs.x - obs.reference};
}

inline double eval_reference_payoff(const ReferenceParams& p, const Observation& obs) {
    const Differences d = differences(obs);
    return p.alpha * p.g1(d.change) + p.beta_plus * p.g2(positive_part(d.surprise)) +
           p.beta_minus * p.g2(negative_part(d.surprise)) + p.gamma_plus * p.g3(positive_part(d.deviation)) +
           p.gamma_minus * p.g3(negative_part(d.deviation)) + p.delta_weight * p.h(obs.x) - p.cost;
}

/// Worst-case change in any discounted value when the reference moves by
/// kappa: max|gamma| * L * |kappa| / (1 - delta).
inline double ref_shift_bound(double gamma_plus, double gamma_minus, double lipschitz, double kappa,
                              double delta) {
    detail::require(delta > 0.0 && delta < 1.0, "0 < delta < 1");
    detail::require(lipschitz >= 0.0, "L >= 0");
    return std::max(std::abs(gamma_plus), std::abs(gamma_minus)) * lipschitz * std::abs(kappa) / (1.0 - delta);
}

/// Discounted problem whose stage payoff is eval_reference_payoff. The
/// observable x follows a Markov chain on `levels`; the DP state is the pair
/// (previous level, current level) so the change term is well defined, and
/// the forecast is the conditional mean of x given the previous level.
/// The decision-maker may stop at any time (collecting the current payoff).
struct ReferenceDP {
    ReferenceParams params;
    std::vector<double> levels;
    std::vector<std::vector<double>> transition;
    double reference = 0.0;
    double discount = 0.9;
    bool reference_dependent_dynamics = false;
    double tolerance = 1e-12;
    std::size_t max_iterations = 1'000'000;

    bool operator==(const ReferenceDP&) const = default;

    void validate() const {
        params.validate();
        detail::require(!levels.empty(), "reference: at least one level");
        detail::require(discount > 0.0 && discount < 1.0, "reference: 0 < discount < 1");
        detail::require(transition.size() == levels.size(), "reference: transition is square");
        for (const auto& row : transition) {
            detail::require(row.size() == levels.size(), "reference: transition is square");
            double total = 0.0;
            for (double p : row) {
                if (!(p >= 0.0)) throw InvalidProcess("reference: transition probabilities must be >= 0");
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-12) throw InvalidProcess("reference: transition rows must sum to 1");
        }
    }

    std::size_t states() const noexcept { return levels.size() * levels.size(); }

    double forecast(std::size_t prev) const {
        double e = 0.0;
        for (std::size_t k = 0; k < levels.size(); ++k) e += transition[prev][k] * levels[k];
        return e;
    }

    Observation observation(std::size_t state, double ref) const {
        const std::size_t n = levels.size();
        const std::size_t prev = state / n;
        const std::size_t cur = state % n;
        return {levels[cur], levels[prev], forecast(prev), ref};
    }

    Transitions pair_transitions() const {
        const std::size_t n = levels.size();
        std::vector<Transitions::Row> rows(states());
        for (std::size_t s = 0; s < states(); ++s) {
            const std::size_t cur = s % n;
            for (std::size_t k = 0; k < n; ++k)
                if (transition[cur][k] > 0.0) rows[s].push_back({cur * n + k, transition[cur][k]});
        }
        return Transitions(std::move(rows));
    }

    StoppingRewards rewards(double ref) const {
        StoppingRewards rw;
        for (std::size_t s = 0; s < states(); ++s) {
            const double u = eval_reference_payoff(params, observation(s, ref));
            rw.stop.push_back(u);
            rw.cont.push_back(u);
        }
        return rw;
    }
};

struct ShiftCheck {
    double gap_fixed;   ///< sup |V^kappa - V^0| under the always-continue policy
    double gap_optimal; ///< same for the optimised stopping policy
    double empirical_gap;
    double lipschitz;   ///< L of g3 on the visited |deviation| range
    double bound;
    bool holds;
};

/// Solves the reference DP at x* and x* + kappa and compares both value
/// functions against the shift bound.
inline ShiftCheck verify_shift_stability(const ReferenceDP& dp, double kappa) {
    if (dp.reference_dependent_dynamics)
        throw HypothesisViolation("shift stability requires dynamics and forecasts independent of the reference");
    dp.validate();

    double reach = 0.0;
    for (double x : dp.levels)
        reach = std::max({reach, std::abs(x - dp.reference), std::abs(x - dp.reference - kappa)});

    const Transitions tr = dp.pair_transitions();
    const StoppingRewards base = dp.rewards(dp.reference);
    const StoppingRewards shifted = dp.rewards(dp.reference + kappa);

    const std::vector<Decision> keep_going(dp.states(), Decision::Continue);
    const auto v0 = evaluate_policy(tr, base, dp.discount, keep_going, dp.tolerance, dp.max_iterations);
    const auto v1 = evaluate_policy(tr, shifted, dp.discount, keep_going, dp.tolerance, dp.max_iterations);
    const auto o0 = solve_stopping(tr, base, dp.discount, dp.tolerance, dp.max_iterations);
    const auto o1 = solve_stopping(tr, shifted, dp.discount, dp.tolerance, dp.max_iterations);

    ShiftCheck out{};
    out.gap_fixed = detail::sup_distance(v0, v1);
    out.gap_optimal = detail::sup_distance(o0.value, o1.value);
    out.empirical_gap = std::max(out.gap_fixed, out.gap_optimal);
    out.lipschitz = dp.params.g3.lipschitz(reach);
    out.bound = ref_shift_bound(dp.params.gamma_plus, dp.params.gamma_minus, out.lipschitz, kappa, dp.discount);
    out.holds = out.empirical_gap <= out.bound + 1e-9;
    return out;
}

} // namespace radv
