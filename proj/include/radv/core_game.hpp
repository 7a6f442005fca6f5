#pragma once

// Static analysis of the Prisoner's Dilemma under mutual recognition:
// transformed utilities, pure equilibria, phase classification and the
// adversary's one-shot optimum.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/math/distributions/normal.hpp>

#include "radv/errors.hpp"
#include "radv/random.hpp"
#include "radv/recognition_curve.hpp"

namespace radv {

/// Objective payoffs, strictly ordered temptation > reward > punishment > sucker.
class PayoffMatrix {
public:
    PayoffMatrix(double temptation, double reward, double punishment, double sucker)
        : t_(temptation), r_(reward), p_(punishment), s_(sucker) {
        detail::require(std::isfinite(t_) && std::isfinite(r_) && std::isfinite(p_) && std::isfinite(s_),
                        "payoff_matrix: all values finite");
        detail::require(t_ > r_ && r_ > p_ && p_ > s_, "payoff_matrix: T > R > P > S");
    }

    double temptation() const noexcept { return t_; }
    double reward() const noexcept { return r_; }
    double punishment() const noexcept { return p_; }
    double sucker() const noexcept { return s_; }

    bool operator==(const PayoffMatrix&) const = default;

private:
    double t_, r_, p_, s_;
};

/// Weights on own (a > 0) and other's (b >= 0) payoff. Only the ratio b/a
/// affects best responses.
class Recognition {
public:
    Recognition(double own_weight, double other_weight) : own_(own_weight), other_(other_weight) {
        detail::require(own_ > 0.0 && std::isfinite(own_), "recognition: a > 0");
        detail::require(other_ >= 0.0 && std::isfinite(other_), "recognition: b >= 0");
    }

    static Recognition from_ratio(double w) { return Recognition(1.0, w); }

    double own_weight() const noexcept { return own_; }
    double other_weight() const noexcept { return other_; }
    double ratio() const noexcept { return other_ / own_; }

private:
    double own_, other_;
};

enum class Action : std::uint8_t { Cooperate, Defect };

struct StrategyProfile {
    Action a;
    Action b;

    bool operator==(const StrategyProfile&) const = default;

    /// Position in the canonical order CC, CD, DC, DD.
    std::size_t index() const noexcept {
        return (a == Action::Defect ? 2u : 0u) + (b == Action::Defect ? 1u : 0u);
    }

    std::string to_string() const {
        std::string s;
        s += a == Action::Cooperate ? 'C' : 'D';
        s += b == Action::Cooperate ? 'C' : 'D';
        return s;
    }
};

inline constexpr std::array<StrategyProfile, 4> all_profiles{{
    {Action::Cooperate, Action::Cooperate},
    {Action::Cooperate, Action::Defect},
    {Action::Defect, Action::Cooperate},
    {Action::Defect, Action::Defect},
}};

inline constexpr StrategyProfile mutual_cooperation = all_profiles[0];
inline constexpr StrategyProfile mutual_defection = all_profiles[3];

enum class Phase : std::uint8_t { Distrust, FragileBand, Cooperation, AsymmetricOnly };

inline constexpr std::array<Phase, 4> all_phases{Phase::Distrust, Phase::FragileBand, Phase::Cooperation,
                                                 Phase::AsymmetricOnly};

inline const char* to_string(Phase p) {
    switch (p) {
    case Phase::Distrust: return "Distrust";
    case Phase::FragileBand: return "FragileBand";
    case Phase::Cooperation: return "Cooperation";
    case Phase::AsymmetricOnly: return "AsymmetricOnly";
    }
    return "?";
}

/// Subset of the four pure profiles.
class EquilibriumSet {
public:
    void insert(StrategyProfile p) noexcept { bits_ |= static_cast<std::uint8_t>(1u << p.index()); }
    bool contains(StrategyProfile p) const noexcept { return (bits_ >> p.index()) & 1u; }
    bool empty() const noexcept { return bits_ == 0; }
    std::size_t size() const noexcept {
        std::size_t n = 0;
        for (auto p : all_profiles) n += contains(p);
        return n;
    }
    bool operator==(const EquilibriumSet&) const = default;

    /// "CC|DD" style listing in canonical order.
    std::string to_string() const {
        std::string s;
        for (auto p : all_profiles) {
            if (!contains(p)) continue;
            if (!s.empty()) s += '|';
            s += p.to_string();
        }
        return s.empty() ? "-" : s;
    }

private:
    std::uint8_t bits_ = 0;
};

struct FragileBand {
    double w_min;
    double w_max;
    bool exists;
    /// Both sides of the existence criterion (T-R)(T-P) <= (P-S)(R-S).
    double lhs;
    double rhs;
};

// ---------------------------------------------------------------------------

inline std::pair<double, double> objective_payoffs(const PayoffMatrix& pd, StrategyProfile profile) {
    const auto payoff = [&](Action mine, Action theirs) {
        if (mine == Action::Cooperate)
            return theirs == Action::Cooperate ? pd.reward() : pd.sucker();
        return theirs == Action::Cooperate ? pd.temptation() : pd.punishment();
    };
    return {payoff(profile.a, profile.b), payoff(profile.b, profile.a)};
}

inline std::pair<double, double> transform_utilities(const PayoffMatrix& pd, const Recognition& rec,
                                                     StrategyProfile profile) {
    const auto [ua, ub] = objective_payoffs(pd, profile);
    const double a = rec.own_weight();
    const double b = rec.other_weight();
    return {a * ua + b * ub, a * ub + b * ua};
}

/// Potential loss: ideal total 2R minus the realised objective total.
inline double adversary_utility(const PayoffMatrix& pd, StrategyProfile profile) {
    const auto [ua, ub] = objective_payoffs(pd, profile);
    return 2.0 * pd.reward() - (ua + ub);
}

inline FragileBand band(const PayoffMatrix& pd) {
    const double t = pd.temptation(), r = pd.reward(), p = pd.punishment(), s = pd.sucker();
    FragileBand out{};
    out.w_min = (t - r) / (r - s);
    out.w_max = (p - s) / (t - p);
    out.lhs = (t - r) * (t - p);
    out.rhs = (p - s) * (r - s);
    out.exists = out.w_min <= out.w_max;
    return out;
}

/// Brute-force enumeration of pure Nash equilibria of the transformed game.
/// A profile survives unless some player strictly gains by deviating.
inline EquilibriumSet nash_equilibria(const PayoffMatrix& pd, const Recognition& rec) {
    const auto flip = [](Action x) { return x == Action::Cooperate ? Action::Defect : Action::Cooperate; };
    EquilibriumSet out;
    for (auto profile : all_profiles) {
        const auto [ua, ub] = transform_utilities(pd, rec, profile);
        const double dev_a = transform_utilities(pd, rec, {flip(profile.a), profile.b}).first;
        const double dev_b = transform_utilities(pd, rec, {profile.a, flip(profile.b)}).second;
        if (dev_a <= ua && dev_b <= ub) out.insert(profile);
    }
    return out;
}

/// Maps an equilibrium set to its phase. Exact boundaries can add asymmetric
/// equilibria to a symmetric one; the symmetric profiles decide the label.
inline Phase phase_from_equilibria(const EquilibriumSet& eq) {
    const bool cc = eq.contains(mutual_cooperation);
    const bool dd = eq.contains(mutual_defection);
    if (cc && dd) return Phase::FragileBand;
    if (dd) return Phase::Distrust;
    if (cc) return Phase::Cooperation;
    return Phase::AsymmetricOnly;
}

namespace detail {

inline Phase classify_effective(const FragileBand& b, double effective_w) {
    const bool cc = effective_w >= b.w_min;
    const bool dd = effective_w <= b.w_max;
    if (cc && dd) return Phase::FragileBand;
    if (dd) return Phase::Distrust;
    if (cc) return Phase::Cooperation;
    return Phase::AsymmetricOnly;
}

} // namespace detail

/// Closed-form phase from the band thresholds (boundaries inclusive).
inline Phase classify_phase(const PayoffMatrix& pd, double w) {
    detail::require(w >= 0.0, "w >= 0");
    return detail::classify_effective(band(pd), w);
}

/// Same thresholds applied to F(w). The curve is sample-checked on [0, max(w, 1)].
inline Phase classify_phase_nonlinear(const PayoffMatrix& pd, double w, const RecognitionCurve& curve) {
    detail::require(w >= 0.0, "w >= 0");
    curve.check_sampled(std::max(w, 1.0));
    return detail::classify_effective(band(pd), curve(w));
}

struct StaticOptimum {
    StrategyProfile profile;
    double total;
};

/// Profile minimising the objective total, i.e. maximising the adversary's
/// one-shot utility. Ties 2P = T+S go to the symmetric (D,D).
inline StaticOptimum min_total_payoff_profile(const PayoffMatrix& pd) {
    const double mutual = 2.0 * pd.punishment();
    const double split = pd.temptation() + pd.sucker();
    if (mutual <= split) return {mutual_defection, mutual};
    return {all_profiles[1], split};
}

struct PhaseProbabilities {
    std::array<double, 4> p{};

    double operator[](Phase ph) const noexcept { return p[static_cast<std::size_t>(ph)]; }
    double& operator[](Phase ph) noexcept { return p[static_cast<std::size_t>(ph)]; }
};

/// Monte Carlo phase probabilities when w ~ Normal(w_mean, w_sd) truncated to
/// w >= 0. Sampling is by inverse CDF on the upper tail, so heavy truncation
/// costs nothing extra.
inline PhaseProbabilities tipping_band_probability(const PayoffMatrix& pd, double w_mean, double w_sd,
                                                   std::size_t samples, std::uint64_t seed) {
    detail::require(w_sd > 0.0 && std::isfinite(w_sd), "tipping: w_sd > 0");
    detail::require(samples >= 1, "tipping: samples >= 1");
    detail::require(std::isfinite(w_mean), "tipping: w_mean finite");

    namespace bm = boost::math;
    const bm::normal standard;
    const double cut = -w_mean / w_sd;
    const double kept = bm::cdf(bm::complement(standard, cut));
    detail::require(kept > 0.0, "tipping: truncated distribution has mass on w >= 0");

    const FragileBand b = band(pd);
    std::array<std::size_t, 4> counts{};
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        const double tail = rng.uniform() * kept;
        const double z = bm::quantile(bm::complement(standard, tail));
        const double w = std::max(0.0, w_mean + w_sd * z);
        ++counts[static_cast<std::size_t>(detail::classify_effective(b, w))];
    }
    PhaseProbabilities out;
    for (std::size_t k = 0; k < 4; ++k)
        out.p[k] = static_cast<double>(counts[k]) / static_cast<double>(samples);
    return out;
}

} // namespace radv
