#pragma once

// One function per CLI subcommand. Each takes a validated scenario and returns
// a ResultTable; nothing here touches files or streams.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "radv/core_game.hpp"
#include "radv/dynamic_adversary.hpp"
#include "radv/errors.hpp"
#include "radv/mass_dynamics.hpp"
#include "radv/parallel.hpp"
#include "radv/random.hpp"
#include "radv/reference_payoff.hpp"
#include "radv/result_table.hpp"
#include "radv/scenario.hpp"

namespace radv {

inline constexpr const char* tool_version = "0.1.0";

/// Distance of |J| from 1 below which the mass-sim output carries a warning.
inline constexpr double boundary_warning_margin = 0.05;

namespace detail {

inline void stamp(ResultTable& t, const Scenario& s, const std::string& command) {
    t.set_meta("tool", "radv");
    t.set_meta("version", tool_version);
    t.set_meta("command", command);
    t.set_meta("scenario", s.name);
    t.set_meta("scenario_hash", scenario_hash(s));
    t.set_meta("seed", std::to_string(s.seed));
}

inline const PayoffMatrix& need_matrix(const Scenario& s) {
    require(s.payoff_matrix.has_value(), "scenario: payoff_matrix present");
    return *s.payoff_matrix;
}

inline const DPScenario& need_dp(const Scenario& s) {
    require(s.dp.has_value(), "scenario: dp present");
    return *s.dp;
}

inline void apply_axis(SweepAxis axis, double v, SurplusProcess& process, CostSchedule& costs, DPConfig& config) {
    switch (axis) {
    case SweepAxis::Delta: config.delta = v; break;
    case SweepAxis::Growth: process.dynamics = Deterministic{v}; break;
    case SweepAxis::CollapseCost: costs.collapse = CostSeries::constant(v); break;
    case SweepAxis::MaintenanceCost: costs.maintenance = CostSeries::constant(v); break;
    }
}

/// E[surplus'] / surplus at the initial state: 1 + g for deterministic growth.
inline double growth_factor(const SurplusChain& chain) {
    std::vector<double> phi(chain.surplus.begin(), chain.surplus.end());
    return chain.transitions.expectation(chain.initial, phi) / chain.surplus[chain.initial];
}

} // namespace detail

inline ResultTable cmd_band(const Scenario& s) {
    const FragileBand b = band(detail::need_matrix(s));
    ResultTable t({"w_min", "w_max", "exists", "lhs", "rhs"});
    detail::stamp(t, s, "band");
    t.add_row({b.w_min, b.w_max, b.exists, b.lhs, b.rhs});
    return t;
}

inline ResultTable cmd_phase_sweep(const Scenario& s) {
    const PayoffMatrix& pd = detail::need_matrix(s);
    detail::require(s.recognition && (s.recognition->sweep || s.recognition->w),
                    "phase-sweep: recognition sweep or w present");
    const RecognitionSpec& rec = *s.recognition;
    const std::vector<double> ws = rec.sweep ? rec.sweep->points() : std::vector<double>{*rec.w};

    std::vector<std::string> columns{"w", "phase", "equilibria", "oracle_phase"};
    if (rec.curve) {
        columns.emplace_back("F_w");
        columns.emplace_back("nonlinear_phase");
    }
    if (rec.tipping)
        for (Phase ph : all_phases) columns.push_back(std::string("p_") + to_string(ph));

    ResultTable t(columns);
    detail::stamp(t, s, "phase-sweep");
    const FragileBand b = band(pd);
    t.set_meta("w_min", ResultTable::format_real(b.w_min));
    t.set_meta("w_max", ResultTable::format_real(b.w_max));
    t.set_meta("band_exists", b.exists ? "true" : "false");

    const auto rows = parallel_map(ws.size(), [&](std::size_t i) {
        const double w = ws[i];
        const EquilibriumSet eq = nash_equilibria(pd, Recognition::from_ratio(w));
        std::vector<Cell> row{w, std::string(to_string(classify_phase(pd, w))), eq.to_string(),
                              std::string(to_string(phase_from_equilibria(eq)))};
        if (rec.curve) {
            row.emplace_back((*rec.curve)(w));
            row.emplace_back(std::string(to_string(classify_phase_nonlinear(pd, w, *rec.curve))));
        }
        if (rec.tipping) {
            const auto probs =
                tipping_band_probability(pd, w, rec.tipping->sd, rec.tipping->samples, stream_seed(s.seed, i));
            for (Phase ph : all_phases) row.emplace_back(probs[ph]);
        }
        return row;
    });
    for (const auto& r : rows) t.add_row(r);
    return t;
}

/// Default axes when the scenario names none: delta x growth, 20 x 20.
inline std::pair<AxisSweep, AxisSweep> regime_axes(const DPScenario& dp) {
    if (dp.sweep_x && dp.sweep_y) return {*dp.sweep_x, *dp.sweep_y};
    return {AxisSweep{SweepAxis::Delta, Sweep{0.5, 0.99, 19}}, AxisSweep{SweepAxis::Growth, Sweep{0.0, 0.5, 19}}};
}

inline ResultTable cmd_regime_map(const Scenario& s) {
    const DPScenario& dp = detail::need_dp(s);
    const auto [ax, ay] = regime_axes(dp);
    detail::check_axis(ax, dp);
    detail::check_axis(ay, dp);
    const auto xs = ax.range.points();
    const auto ys = ay.range.points();

    ResultTable t({to_string(ax.axis), to_string(ay.axis), "delta_one_plus_g", "advantage", "cost_differential",
                   "regime", "value_initial", "policy_initial", "iterations"});
    detail::stamp(t, s, "regime-map");

    const auto rows = parallel_map(xs.size() * ys.size(), [&](std::size_t k) {
        const std::size_t i = k / ys.size();
        const std::size_t j = k % ys.size();
        SurplusProcess process = dp.process;
        CostSchedule costs = dp.costs;
        DPConfig config = dp.config;
        detail::apply_axis(ax.axis, xs[i], process, costs, config);
        detail::apply_axis(ay.axis, ys[j], process, costs, config);
        try {
            const ValueSolution sol = value_iteration(process, costs, config);
            const std::size_t s0 = sol.chain.initial;
            return std::vector<Cell>{xs[i],
                                     ys[j],
                                     config.delta * detail::growth_factor(sol.chain),
                                     sol.advantage[s0],
                                     sol.cost_differential[s0],
                                     std::string(to_string(sol.regime[s0])),
                                     sol.value[s0],
                                     std::string(to_string(sol.policy[s0])),
                                     static_cast<std::int64_t>(sol.iterations)};
        } catch (const NonConvergence& e) {
            std::ostringstream os;
            os.precision(17);
            os << e.what() << " at grid cell (" << to_string(ax.axis) << "=" << xs[i] << ", "
               << to_string(ay.axis) << "=" << ys[j] << ")";
            throw NonConvergence(os.str(), e.iterations(), e.residual());
        }
    });
    for (const auto& r : rows) t.add_row(r);
    t.set_meta("cap_sensitivity", ResultTable::format_real(cap_sensitivity(dp.process, dp.costs, dp.config)));
    return t;
}

inline ResultTable cmd_simulate(const Scenario& s) {
    const DPScenario& dp = detail::need_dp(s);
    const SurplusChain chain = build_chain(dp.process, dp.config);
    dp.costs.collapse.check_states(chain.size());
    dp.costs.maintenance.check_states(chain.size());

    std::optional<ValueSolution> solution;
    PathPolicy policy;
    switch (dp.policy) {
    case PolicyKind::Greedy:
        solution = value_iteration(dp.process, dp.costs, dp.config);
        policy = greedy(*solution);
        break;
    case PolicyKind::AlwaysStop: policy = always_stop(); break;
    case PolicyKind::NeverStop: policy = never_stop(); break;
    }

    const auto paths = parallel_map(dp.paths, [&](std::size_t k) {
        return simulate_path(chain, dp.costs, policy, dp.config.delta, dp.horizon, stream_seed(s.seed, k));
    });

    ResultTable t({"t", "R", "surplus", "action", "stage_payoff", "objective_total", "discounted_cumulative"});
    detail::stamp(t, s, "simulate");
    t.set_meta("policy", to_string(dp.policy));
    const Trajectory& first = paths.front();
    t.set_meta("stop_time", first.stop_time ? std::to_string(*first.stop_time) : "none");
    t.set_meta("realized_payoff", ResultTable::format_real(first.realized_payoff));
    double total = 0.0;
    for (const auto& p : paths) total += p.realized_payoff;
    t.set_meta("paths", std::to_string(dp.paths));
    t.set_meta("mean_realized_payoff", ResultTable::format_real(total / static_cast<double>(dp.paths)));
    for (const auto& st : first.steps)
        t.add_row({static_cast<std::int64_t>(st.period), st.reward_level, st.surplus, std::string(to_string(st.action)),
                   st.stage_payoff, st.objective_total, st.discounted_cumulative});
    return t;
}

inline ResultTable cmd_mass_sim(const Scenario& s) {
    detail::require(s.mass.has_value(), "scenario: mass present");
    const MassScenario& m = *s.mass;
    const MassSimulation sim = simulate_mass(m.state, m.params, m.steps, m.perturbation);

    ResultTable t({"t", "x", "surprise", "deviation", "praise", "attack", "gain", "jacobian", "label"});
    detail::stamp(t, s, "mass-sim");
    t.set_meta("fixed_point", ResultTable::format_real(sim.fixed_point));
    t.set_meta("gain", ResultTable::format_real(sim.gain));
    t.set_meta("jacobian", ResultTable::format_real(sim.jacobian));
    t.set_meta("analytic_label", to_string(sim.analytic));
    t.set_meta("empirical_label", to_string(sim.empirical));
    t.set_meta("growth_factor", ResultTable::format_real(sim.growth_factor));
    if (std::abs(std::abs(sim.jacobian) - 1.0) < boundary_warning_margin)
        t.set_meta("warning", "|J| is within 0.05 of 1; the linear prediction is unreliable here");
    for (const auto& r : sim.rows)
        t.add_row({static_cast<std::int64_t>(r.t), r.x, r.surprise, r.deviation, r.praise, r.attack, r.gain,
                   r.jacobian, std::string(to_string(r.label))});
    return t;
}

inline ResultTable cmd_ref_shift_check(const Scenario& s) {
    detail::require(s.reference.has_value(), "scenario: reference present");
    const ReferenceScenario& r = *s.reference;
    const auto checks = parallel_map(r.kappas.size(),
                                     [&](std::size_t i) { return verify_shift_stability(r.problem, r.kappas[i]); });

    ResultTable t({"kappa", "gap_fixed", "gap_optimal", "empirical_gap", "lipschitz", "bound", "holds"});
    detail::stamp(t, s, "ref-shift-check");
    bool all = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const ShiftCheck& c = checks[i];
        all = all && c.holds;
        t.add_row({r.kappas[i], c.gap_fixed, c.gap_optimal, c.empirical_gap, c.lipschitz, c.bound, c.holds});
    }
    t.set_meta("all_hold", all ? "true" : "false");
    return t;
}

} // namespace radv
