#pragma once

// The adversary's stop/continue problem. Stopping collapses the game into
// permanent mutual defection and harvests the cooperative surplus
// 2R - 2P minus the collapse cost; continuing pays the maintenance cost and
// keeps the option open.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "radv/errors.hpp"
#include "radv/random.hpp"
#include "radv/stopping.hpp"

namespace radv {

// --------------------------------------------------------------------------
// Surplus dynamics
// --------------------------------------------------------------------------

/// Surplus grows by the factor (1 + growth) every period.
struct Deterministic {
    double growth = 0.0;
    bool operator==(const Deterministic&) const = default;
};

struct Shock {
    double growth;
    double probability;
    bool operator==(const Shock&) const = default;
};

/// Surplus grows by (1 + g_k) with probability p_k, independently each period.
struct DiscreteShocks {
    std::vector<Shock> shocks;
    bool operator==(const DiscreteShocks&) const = default;
};

/// Explicit chain over cooperative-payoff levels.
struct MarkovGrid {
    std::vector<double> levels;
    std::vector<std::vector<double>> transition;
    bool operator==(const MarkovGrid&) const = default;
};

using SurplusDynamics = std::variant<Deterministic, DiscreteShocks, MarkovGrid>;

inline std::string dynamics_name(const SurplusDynamics& d) {
    switch (d.index()) {
    case 0: return "deterministic";
    case 1: return "discrete_shocks";
    default: return "markov_grid";
    }
}

struct SurplusProcess {
    SurplusDynamics dynamics;
    double punishment = 0.0;     ///< P, the post-collapse payoff per player
    double initial_reward = 1.0; ///< R_0 > P

    bool operator==(const SurplusProcess&) const = default;

    void validate() const {
        detail::require(std::isfinite(punishment) && std::isfinite(initial_reward), "dp: P and initial_R finite");
        detail::require(initial_reward > punishment, "dp: initial_R > P");
        std::visit(
            [&](const auto& d) {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, Deterministic>) {
                    detail::require(d.growth > -1.0 && std::isfinite(d.growth), "dp: growth > -1");
                } else if constexpr (std::is_same_v<D, DiscreteShocks>) {
                    detail::require(!d.shocks.empty(), "dp: at least one shock");
                    double total = 0.0;
                    for (const auto& s : d.shocks) {
                        detail::require(s.growth > -1.0 && std::isfinite(s.growth), "dp: growth > -1");
                        if (!(s.probability >= 0.0)) throw InvalidProcess("shock probabilities must be >= 0");
                        total += s.probability;
                    }
                    if (std::abs(total - 1.0) > 1e-12) throw InvalidProcess("shock probabilities must sum to 1");
                } else {
                    detail::require(!d.levels.empty(), "dp: grid has at least one level");
                    for (std::size_t i = 0; i < d.levels.size(); ++i) {
                        detail::require(d.levels[i] > punishment, "dp: grid levels > P");
                        if (i > 0) detail::require(d.levels[i] > d.levels[i - 1], "dp: grid levels strictly ascending");
                    }
                    if (d.transition.size() != d.levels.size())
                        throw InvalidProcess("transition matrix must be square with one row per level");
                    for (std::size_t i = 0; i < d.transition.size(); ++i) {
                        if (d.transition[i].size() != d.levels.size())
                            throw InvalidProcess("transition matrix must be square with one row per level");
                        double total = 0.0;
                        for (double p : d.transition[i]) {
                            if (!(p >= 0.0)) throw InvalidProcess("transition probabilities must be >= 0");
                            total += p;
                        }
                        if (std::abs(total - 1.0) > 1e-12) {
                            std::ostringstream os;
                            os << "transition row " << i << " is not stochastic";
                            throw InvalidProcess(os.str());
                        }
                    }
                }
            },
            dynamics);
    }

    /// E[R_{t+1} | R_t] >= R_t in every state.
    bool cooperative_learning() const {
        return std::visit(
            [&](const auto& d) {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, Deterministic>) {
                    return d.growth >= 0.0;
                } else if constexpr (std::is_same_v<D, DiscreteShocks>) {
                    double mean = 0.0;
                    for (const auto& s : d.shocks) mean += s.probability * s.growth;
                    return mean >= -1e-12;
                } else {
                    for (std::size_t i = 0; i < d.levels.size(); ++i) {
                        double e = 0.0;
                        for (std::size_t j = 0; j < d.levels.size(); ++j) e += d.transition[i][j] * d.levels[j];
                        if (e < d.levels[i] - 1e-12 * std::max(1.0, std::abs(d.levels[i]))) return false;
                    }
                    return true;
                }
            },
            dynamics);
    }

    /// True if some transition can raise the surplus, so a cap is needed.
    bool can_grow() const {
        if (const auto* d = std::get_if<Deterministic>(&dynamics)) return d->growth > 0.0;
        if (const auto* s = std::get_if<DiscreteShocks>(&dynamics))
            return std::any_of(s->shocks.begin(), s->shocks.end(),
                               [](const Shock& k) { return k.growth > 0.0 && k.probability > 0.0; });
        return false;
    }

    bool can_shrink() const {
        if (const auto* d = std::get_if<Deterministic>(&dynamics)) return d->growth < 0.0;
        if (const auto* s = std::get_if<DiscreteShocks>(&dynamics))
            return std::any_of(s->shocks.begin(), s->shocks.end(),
                               [](const Shock& k) { return k.growth < 0.0 && k.probability > 0.0; });
        return false;
    }
};

// --------------------------------------------------------------------------
// Costs
// --------------------------------------------------------------------------

/// Nonnegative cost indexed by period and, optionally, by grid state.
/// Each row is one period; the last row holds for every later period. A row
/// has either one entry (all states) or one entry per state.
class CostSeries {
public:
    CostSeries() : rows_(1, std::vector<double>{0.0}) {}

    explicit CostSeries(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
        detail::require(!rows_.empty(), "costs: at least one period");
        for (const auto& r : rows_) {
            detail::require(!r.empty(), "costs: rows are nonempty");
            for (double c : r) detail::require(c >= 0.0 && std::isfinite(c), "costs: nonnegative everywhere");
        }
    }

    static CostSeries constant(double c) { return CostSeries(std::vector<std::vector<double>>{{c}}); }

    static CostSeries by_period(const std::vector<double>& per_period) {
        std::vector<std::vector<double>> rows;
        for (double c : per_period) rows.push_back({c});
        return CostSeries(std::move(rows));
    }

    static CostSeries by_state(std::vector<double> per_state) {
        return CostSeries(std::vector<std::vector<double>>{std::move(per_state)});
    }

    double at(std::size_t period, std::size_t state) const {
        const auto& r = rows_[std::min(period, rows_.size() - 1)];
        return r.size() == 1 ? r[0] : r[state];
    }

    std::size_t periods() const noexcept { return rows_.size(); }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

    void check_states(std::size_t n) const {
        for (const auto& r : rows_)
            if (r.size() != 1 && r.size() != n) {
                std::ostringstream os;
                os << "costs: per-state rows must have one entry per grid state (" << n << ")";
                throw ValidationError(os.str());
            }
    }

    bool operator==(const CostSeries&) const = default;

private:
    std::vector<std::vector<double>> rows_;
};

struct CostSchedule {
    CostSeries collapse;    ///< C_c, paid when stopping
    CostSeries maintenance; ///< C_m, paid on every Continue step

    static CostSchedule constant(double collapse_cost, double maintenance_cost) {
        return {CostSeries::constant(collapse_cost), CostSeries::constant(maintenance_cost)};
    }

    std::size_t periods() const noexcept { return std::max(collapse.periods(), maintenance.periods()); }

    bool operator==(const CostSchedule&) const = default;
};

struct DPConfig {
    double delta = 0.95;
    double tolerance = 1e-9;
    std::size_t max_iterations = 1'000'000;
    /// Upper truncation of R for processes that can grow.
    std::optional<double> r_cap;
    /// Approximate node count of the interpolation grid for DiscreteShocks.
    std::size_t grid_points = 101;
    /// Lower truncation for shrinking processes, as a fraction of the initial surplus.
    double floor_fraction = 0.01;
    std::size_t max_states = 5000;

    void validate() const {
        detail::require(delta > 0.0 && delta < 1.0, "dp: 0 < delta < 1");
        detail::require(tolerance > 0.0, "dp: tolerance > 0");
        detail::require(max_iterations >= 1, "dp: max_iterations >= 1");
        detail::require(grid_points >= 2, "dp: grid_points >= 2");
        detail::require(floor_fraction > 0.0 && floor_fraction < 1.0, "dp: 0 < floor_fraction < 1");
    }

    bool operator==(const DPConfig&) const = default;
};

// --------------------------------------------------------------------------
// Discretised chain
// --------------------------------------------------------------------------

/// Finite state space the DP runs on. States are surplus levels; successors
/// falling between nodes are split by linear interpolation, and successors
/// beyond the truncation bounds are clamped to the boundary node.
struct SurplusChain {
    double punishment = 0.0;
    std::vector<double> surplus; ///< 2R - 2P per state
    Transitions transitions;
    /// True where some successor was clamped at a truncation bound.
    std::vector<bool> clamped;
    std::size_t initial = 0;

    std::size_t size() const noexcept { return surplus.size(); }
    double reward_level(std::size_t i) const { return punishment + 0.5 * surplus[i]; }
};

namespace detail {

inline void check_grid_size(std::size_t n, const DPConfig& config) {
    if (n > config.max_states) {
        std::ostringstream os;
        os << "surplus grid needs more than max_states = " << config.max_states << " nodes";
        throw InvalidProcess(os.str());
    }
}

inline SurplusChain deterministic_chain(double phi0, double growth, double phi_cap, double phi_floor,
                                        const DPConfig& config) {
    SurplusChain c;
    std::vector<Transitions::Row> rows;
    if (growth == 0.0) {
        c.surplus = {phi0};
        c.clamped = {false};
        c.transitions = Transitions({{{0, 1.0}}});
        return c;
    }
    const double factor = 1.0 + growth;
    const bool up = growth > 0.0;
    const double bound = up ? phi_cap : phi_floor;
    for (std::size_t k = 0;; ++k) {
        const double phi = phi0 * std::pow(factor, static_cast<double>(k));
        if (up ? phi >= bound : phi <= bound) break;
        c.surplus.push_back(phi);
        check_grid_size(c.surplus.size() + 1, config);
    }
    c.surplus.push_back(bound);
    const std::size_t n = c.surplus.size();
    c.clamped.assign(n, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        rows.push_back({{i + 1, 1.0}});
        if (i + 2 == n && c.surplus[i] * factor != bound) c.clamped[i] = true;
    }
    rows.push_back({{n - 1, 1.0}});
    c.clamped[n - 1] = true;
    c.transitions = Transitions(std::move(rows));
    return c;
}

inline SurplusChain shock_chain(double phi0, const DiscreteShocks& d, double phi_cap, double phi_floor,
                                const DPConfig& config) {
    SurplusChain c;
    const double span_log = std::log(phi_cap) - std::log(phi_floor);
    const double step = span_log > 0.0 ? span_log / static_cast<double>(config.grid_points - 1) : 1.0;
    const auto count = [&](double lo, double hi) -> std::size_t {
        if (hi <= lo) return 0;
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround((std::log(hi) - std::log(lo)) / step)));
    };
    const std::size_t below = count(phi_floor, phi0);
    const std::size_t above = count(phi0, phi_cap);
    check_grid_size(below + above + 1, config);
    for (std::size_t k = below; k >= 1; --k) {
        const double frac = static_cast<double>(k) / static_cast<double>(below);
        c.surplus.push_back(k == below ? phi_floor : phi0 * std::exp(frac * (std::log(phi_floor) - std::log(phi0))));
    }
    c.initial = c.surplus.size();
    c.surplus.push_back(phi0);
    for (std::size_t k = 1; k <= above; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(above);
        c.surplus.push_back(k == above ? phi_cap : phi0 * std::exp(frac * (std::log(phi_cap) - std::log(phi0))));
    }

    const std::size_t n = c.surplus.size();
    const double lo = c.surplus.front();
    const double hi = c.surplus.back();
    c.clamped.assign(n, false);
    std::vector<Transitions::Row> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> weight(n, 0.0);
        for (const auto& s : d.shocks) {
            if (s.probability == 0.0) continue;
            double next = c.surplus[i] * (1.0 + s.growth);
            if (next > hi || next < lo) {
                c.clamped[i] = true;
                next = std::clamp(next, lo, hi);
            }
            const auto upper = std::lower_bound(c.surplus.begin(), c.surplus.end(), next);
            const auto j = static_cast<std::size_t>(upper - c.surplus.begin());
            if (c.surplus[j] == next || j == 0) {
                weight[j] += s.probability;
            } else {
                const double lambda = (next - c.surplus[j - 1]) / (c.surplus[j] - c.surplus[j - 1]);
                weight[j - 1] += s.probability * (1.0 - lambda);
                weight[j] += s.probability * lambda;
            }
        }
        for (std::size_t j = 0; j < n; ++j)
            if (weight[j] > 0.0) rows[i].push_back({j, weight[j]});
    }
    c.transitions = Transitions(std::move(rows));
    return c;
}

inline SurplusChain grid_chain(const MarkovGrid& g, double punishment, double initial_reward) {
    SurplusChain c;
    const std::size_t n = g.levels.size();
    bool found = false;
    std::vector<Transitions::Row> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.surplus.push_back(2.0 * g.levels[i] - 2.0 * punishment);
        if (std::abs(g.levels[i] - initial_reward) <= 1e-12 * std::max(1.0, std::abs(initial_reward))) {
            c.initial = i;
            found = true;
        }
        for (std::size_t j = 0; j < n; ++j)
            if (g.transition[i][j] > 0.0) rows[i].push_back({j, g.transition[i][j]});
    }
    detail::require(found, "dp: initial_R is one of the grid levels");
    c.clamped.assign(n, false);
    c.transitions = Transitions(std::move(rows));
    return c;
}

} // namespace detail

inline SurplusChain build_chain(const SurplusProcess& process, const DPConfig& config) {
    process.validate();
    config.validate();
    const double phi0 = 2.0 * process.initial_reward - 2.0 * process.punishment;
    double phi_cap = phi0;
    if (process.can_grow()) {
        detail::require(config.r_cap.has_value(), "dp: R_cap required for growing processes");
        detail::require(*config.r_cap > process.initial_reward, "dp: R_cap > initial_R");
        phi_cap = 2.0 * *config.r_cap - 2.0 * process.punishment;
    }
    const double phi_floor = process.can_shrink() ? phi0 * config.floor_fraction : phi0;

    SurplusChain chain = std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, Deterministic>)
                return detail::deterministic_chain(phi0, d.growth, phi_cap, phi_floor, config);
            else if constexpr (std::is_same_v<D, DiscreteShocks>)
                return detail::shock_chain(phi0, d, phi_cap, phi_floor, config);
            else
                return detail::grid_chain(d, process.punishment, process.initial_reward);
        },
        process.dynamics);
    chain.punishment = process.punishment;
    chain.transitions.validate();
    return chain;
}

// --------------------------------------------------------------------------
// Bellman pieces
// --------------------------------------------------------------------------

/// Immediate harvest from collapsing the game: (2R - 2P) - C_c.
inline double stop_value(double reward, double punishment, double collapse_cost) {
    detail::require(reward > punishment, "stop_value: R > P");
    return (2.0 * reward - 2.0 * punishment) - collapse_cost;
}

namespace detail {

inline StoppingRewards period_rewards(const SurplusChain& chain, const CostSchedule& costs, std::size_t period) {
    StoppingRewards rw;
    rw.stop.resize(chain.size());
    rw.cont.resize(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) {
        rw.stop[i] = chain.surplus[i] - costs.collapse.at(period, i);
        rw.cont[i] = -costs.maintenance.at(period, i);
    }
    return rw;
}

} // namespace detail

/// max{ stop value, delta E[V(successor)] - C_m } at one state.
inline double bellman_backup(const SurplusChain& chain, const CostSchedule& costs, double delta,
                             std::span<const double> values, std::size_t state, std::size_t period = 0) {
    const double stop = chain.surplus[state] - costs.collapse.at(period, state);
    const double cont = delta * chain.transitions.expectation(state, values) - costs.maintenance.at(period, state);
    return std::max(stop, cont);
}

// --------------------------------------------------------------------------
// Regimes
// --------------------------------------------------------------------------

enum class Regime : std::uint8_t { ImmediateDestruction, RationalStagnation, InterventionAbandonment };

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::ImmediateDestruction: return "ImmediateDestruction";
    case Regime::RationalStagnation: return "RationalStagnation";
    case Regime::InterventionAbandonment: return "InterventionAbandonment";
    }
    return "?";
}

/// Regime from the continuation advantage `advantage` = delta E[V'] - (2R - 2P)
/// and the cost differential C_m - C_c. Abandonment (|advantage| <= |dC|)
/// takes precedence; the rest splits on the strict stagnation inequality.
inline Regime classify_regime(double advantage, double cost_differential) {
    if (std::abs(advantage) <= std::abs(cost_differential)) return Regime::InterventionAbandonment;
    if (advantage > cost_differential) return Regime::RationalStagnation;
    return Regime::ImmediateDestruction;
}

/// Sufficient condition for stagnation with zero costs: delta > 1 / (1 + g).
inline bool stagnation_sufficient(double delta, double growth) {
    detail::require(delta > 0.0 && delta < 1.0, "0 < delta < 1");
    detail::require(growth > -1.0, "growth > -1");
    return delta > 1.0 / (1.0 + growth);
}

// --------------------------------------------------------------------------
// Solvers
// --------------------------------------------------------------------------

struct ValueSolution {
    SurplusChain chain;
    std::vector<double> value;           ///< V at t = 0
    std::vector<Decision> policy;        ///< greedy decision at t = 0
    std::vector<double> stop_value;      ///< stop branch at t = 0
    std::vector<double> continue_value;  ///< continue branch at t = 0
    std::vector<double> advantage;       ///< delta E[V_1] - (2R - 2P)
    std::vector<double> cost_differential; ///< C_m(0) - C_c(0)
    std::vector<Regime> regime;
    /// Greedy decisions for periods 0..k; the last entry applies afterwards.
    std::vector<std::vector<Decision>> policy_by_period;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::vector<double> residuals;

    double initial_value() const { return value[chain.initial]; }
    Decision initial_decision() const { return policy[chain.initial]; }

    Decision decision(std::size_t period, std::size_t state) const {
        return policy_by_period[std::min(period, policy_by_period.size() - 1)][state];
    }
};

/// Solves the Bellman fixed point. With period-dependent costs the tail from
/// the last tabulated period is stationary and solved by value iteration;
/// earlier periods follow by backward induction.
inline ValueSolution value_iteration(const SurplusProcess& process, const CostSchedule& costs,
                                     const DPConfig& config) {
    ValueSolution sol;
    sol.chain = build_chain(process, config);
    const auto& chain = sol.chain;
    costs.collapse.check_states(chain.size());
    costs.maintenance.check_states(chain.size());

    const std::size_t periods = costs.periods();
    const double delta = config.delta;
    StoppingSolution tail = solve_stopping(chain.transitions, detail::period_rewards(chain, costs, periods - 1),
                                           delta, config.tolerance, config.max_iterations);
    sol.iterations = tail.iterations;
    sol.residual = tail.residual;
    sol.residuals = std::move(tail.residuals);

    sol.policy_by_period.assign(periods, {});
    sol.policy_by_period[periods - 1] = tail.policy;
    std::vector<double> next = tail.value; // V_{t+1}
    std::vector<double> current = tail.value;
    for (std::size_t t = periods - 1; t-- > 0;) {
        next = current;
        current = stopping_backup(chain.transitions, detail::period_rewards(chain, costs, t), delta, next,
                                  &sol.policy_by_period[t]);
    }

    const std::size_t n = chain.size();
    sol.value = current;
    sol.policy = sol.policy_by_period.front();
    sol.stop_value.resize(n);
    sol.continue_value.resize(n);
    sol.advantage.resize(n);
    sol.cost_differential.resize(n);
    sol.regime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double expected = delta * chain.transitions.expectation(i, next);
        const double c_c = costs.collapse.at(0, i);
        const double c_m = costs.maintenance.at(0, i);
        sol.stop_value[i] = chain.surplus[i] - c_c;
        sol.continue_value[i] = expected - c_m;
        sol.advantage[i] = expected - chain.surplus[i];
        sol.cost_differential[i] = c_m - c_c;
        sol.regime[i] = classify_regime(sol.advantage[i], sol.cost_differential[i]);
    }
    return sol;
}

/// Exact backward induction over `horizon` periods from terminal value 0.
/// Independent check on value_iteration: the gap is at most delta^H * max|V|.
inline std::vector<double> finite_horizon_oracle(const SurplusProcess& process, const CostSchedule& costs,
                                                 const DPConfig& config, std::size_t horizon) {
    detail::require(horizon >= 1, "oracle: horizon >= 1");
    const SurplusChain chain = build_chain(process, config);
    costs.collapse.check_states(chain.size());
    costs.maintenance.check_states(chain.size());
    std::vector<double> v(chain.size(), 0.0);
    for (std::size_t t = horizon; t-- > 0;) {
        std::vector<double> prev(chain.size());
        for (std::size_t i = 0; i < chain.size(); ++i) prev[i] = bellman_backup(chain, costs, config.delta, v, i, t);
        v = std::move(prev);
    }
    return v;
}

/// Smallest H with delta^H * v_max < tolerance.
inline std::size_t oracle_horizon(double delta, double v_max, double tolerance) {
    if (v_max <= tolerance) return 1;
    return static_cast<std::size_t>(std::ceil(std::log(tolerance / v_max) / std::log(delta))) + 1;
}

/// Change in V(initial) when the surplus cap is doubled. Large values mean
/// the truncation, not the dynamics, is driving the solution.
inline double cap_sensitivity(const SurplusProcess& process, const CostSchedule& costs, const DPConfig& config) {
    if (!process.can_grow()) return 0.0;
    DPConfig doubled = config;
    detail::require(config.r_cap.has_value(), "dp: R_cap required for growing processes");
    doubled.r_cap = process.punishment + 2.0 * (*config.r_cap - process.punishment);
    const double base = value_iteration(process, costs, config).initial_value();
    const double wide = value_iteration(process, costs, doubled).initial_value();
    return std::abs(wide - base);
}

// --------------------------------------------------------------------------
// Simulation
// --------------------------------------------------------------------------

using PathPolicy = std::function<Decision(std::size_t period, std::size_t state)>;

inline PathPolicy always_stop() {
    return [](std::size_t, std::size_t) { return Decision::Stop; };
}

inline PathPolicy never_stop() {
    return [](std::size_t, std::size_t) { return Decision::Continue; };
}

/// Greedy rule from a solved problem. Keeps a reference to `solution`.
inline PathPolicy greedy(const ValueSolution& solution) {
    return [&solution](std::size_t t, std::size_t s) { return solution.decision(t, s); };
}

enum class StepAction : std::uint8_t { Stop, Continue, Absorbed };

inline const char* to_string(StepAction a) {
    switch (a) {
    case StepAction::Stop: return "Stop";
    case StepAction::Continue: return "Continue";
    case StepAction::Absorbed: return "Absorbed";
    }
    return "?";
}

struct PathStep {
    std::size_t period;
    std::size_t state;
    double reward_level;   ///< R_t
    double surplus;        ///< 2R_t - 2P
    StepAction action;
    double stage_payoff;   ///< adversary's payoff this period
    double objective_total; ///< players' total objective payoff
    double discounted_cumulative;
};

struct Trajectory {
    std::vector<PathStep> steps;
    std::optional<std::size_t> stop_time;
    double realized_payoff = 0.0; ///< discounted sum of stage payoffs
};

/// One realisation of the chain under `policy`. After the first Stop the game
/// sits in mutual defection: total objective payoff 2P, adversary payoff 0.
inline Trajectory simulate_path(const SurplusChain& chain, const CostSchedule& costs, const PathPolicy& policy,
                                double delta, std::size_t horizon, std::uint64_t seed) {
    detail::require(horizon >= 1, "simulate: horizon >= 1");
    detail::require(delta > 0.0 && delta < 1.0, "dp: 0 < delta < 1");
    Rng rng(seed);
    Trajectory out;
    std::size_t state = chain.initial;
    double discount = 1.0;
    double total = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        PathStep step{};
        step.period = t;
        step.state = state;
        step.reward_level = chain.reward_level(state);
        step.surplus = chain.surplus[state];
        if (out.stop_time) {
            step.action = StepAction::Absorbed;
            step.stage_payoff = 0.0;
            step.objective_total = 2.0 * chain.punishment;
        } else if (policy(t, state) == Decision::Stop) {
            step.action = StepAction::Stop;
            step.stage_payoff = chain.surplus[state] - costs.collapse.at(t, state);
            step.objective_total = 2.0 * chain.punishment;
            out.stop_time = t;
        } else {
            step.action = StepAction::Continue;
            step.stage_payoff = -costs.maintenance.at(t, state);
            step.objective_total = 2.0 * step.reward_level;
        }
        total += discount * step.stage_payoff;
        step.discounted_cumulative = total;
        out.steps.push_back(step);
        discount *= delta;

        if (!out.stop_time) {
            const double u = rng.uniform();
            double acc = 0.0;
            const auto& row = chain.transitions.row(state);
            std::size_t next = row.back().first;
            for (const auto& [j, p] : row) {
                acc += p;
                if (u < acc) {
                    next = j;
                    break;
                }
            }
            state = next;
        }
    }
    out.realized_payoff = total;
    return out;
}

} // namespace radv
