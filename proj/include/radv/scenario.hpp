#pragma once

// Scenario documents: one JSON file configures every command. Loading checks
// every module invariant up front so commands can assume valid input.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "radv/core_game.hpp"
#include "radv/dynamic_adversary.hpp"
#include "radv/errors.hpp"
#include "radv/mass_dynamics.hpp"
#include "radv/recognition_curve.hpp"
#include "radv/reference_payoff.hpp"
#include "radv/shape.hpp"

namespace radv {

/// Evenly spaced grid from `from` to `to` inclusive with `steps` intervals.
struct Sweep {
    double from = 0.0;
    double to = 1.0;
    std::size_t steps = 1;

    std::vector<double> points() const {
        std::vector<double> out;
        out.reserve(steps + 1);
        for (std::size_t i = 0; i <= steps; ++i)
            out.push_back(i == steps ? to
                                     : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps));
        return out;
    }

    bool operator==(const Sweep&) const = default;
};

struct TippingSpec {
    double sd = 0.05;
    std::size_t samples = 1000;
    bool operator==(const TippingSpec&) const = default;
};

struct RecognitionSpec {
    std::optional<double> w;
    std::optional<Sweep> sweep;
    std::optional<RecognitionCurve> curve;
    std::optional<TippingSpec> tipping;
    bool operator==(const RecognitionSpec&) const = default;
};

enum class PolicyKind : std::uint8_t { Greedy, AlwaysStop, NeverStop };
enum class SweepAxis : std::uint8_t { Delta, Growth, CollapseCost, MaintenanceCost };

inline const char* to_string(PolicyKind k) {
    switch (k) {
    case PolicyKind::Greedy: return "greedy";
    case PolicyKind::AlwaysStop: return "always_stop";
    case PolicyKind::NeverStop: return "never_stop";
    }
    return "?";
}

inline const char* to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::Delta: return "delta";
    case SweepAxis::Growth: return "growth";
    case SweepAxis::CollapseCost: return "collapse_cost";
    case SweepAxis::MaintenanceCost: return "maintenance_cost";
    }
    return "?";
}

struct AxisSweep {
    SweepAxis axis = SweepAxis::Delta;
    Sweep range;
    bool operator==(const AxisSweep&) const = default;
};

struct DPScenario {
    SurplusProcess process;
    CostSchedule costs;
    DPConfig config;
    std::size_t horizon = 50;
    PolicyKind policy = PolicyKind::Greedy;
    std::size_t paths = 100;
    std::optional<AxisSweep> sweep_x;
    std::optional<AxisSweep> sweep_y;
    bool operator==(const DPScenario&) const = default;
};

struct ReferenceScenario {
    ReferenceDP problem;
    std::vector<double> kappas;
    bool operator==(const ReferenceScenario&) const = default;
};

struct MassScenario {
    MassParams params;
    MassState state;
    std::size_t steps = 50;
    double perturbation = 1e-4;
    bool operator==(const MassScenario&) const = default;
};

struct OutputSpec {
    std::string format = "csv";
    std::optional<std::string> path;
    bool operator==(const OutputSpec&) const = default;
};

struct Scenario {
    std::string name;
    std::string description;
    std::optional<PayoffMatrix> payoff_matrix;
    std::optional<RecognitionSpec> recognition;
    std::optional<DPScenario> dp;
    std::optional<ReferenceScenario> reference;
    std::optional<MassScenario> mass;
    std::uint64_t seed = 0;
    OutputSpec output;
    bool operator==(const Scenario&) const = default;
};

// --------------------------------------------------------------------------
// Reading
// --------------------------------------------------------------------------

namespace detail {

using Json = nlohmann::ordered_json;

/// Field access on one JSON object with path-qualified errors and
/// rejection of unknown keys.
class Fields {
public:
    Fields(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        require(obj_.is_object(), path_ + ": is an object");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const Json& at(const std::string& key) {
        seen_.insert(key);
        if (!obj_.contains(key)) throw ValidationError(where(key) + ": is required");
        return obj_.at(key);
    }

    double number(const std::string& key) { return as_number(at(key), where(key)); }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::uint64_t count(const std::string& key) { return as_count(at(key), where(key)); }
    std::uint64_t count(const std::string& key, std::uint64_t fallback) { return has(key) ? count(key) : fallback; }

    std::string text(const std::string& key) {
        const Json& v = at(key);
        require(v.is_string(), where(key) + ": is a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key, std::string fallback) { return has(key) ? text(key) : fallback; }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const Json& v = at(key);
        require(v.is_boolean(), where(key) + ": is a boolean");
        return v.get<bool>();
    }

    std::vector<double> numbers(const std::string& key) { return as_numbers(at(key), where(key)); }

    std::vector<std::vector<double>> matrix(const std::string& key) {
        const Json& v = at(key);
        require(v.is_array(), where(key) + ": is an array of arrays");
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(as_numbers(v[i], where(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    Fields object(const std::string& key) { return Fields(at(key), where(key)); }

    std::string where(const std::string& key) const { return path_ + "." + key; }
    const std::string& path() const noexcept { return path_; }

    void finish() const {
        for (const auto& [k, v] : obj_.items())
            if (!seen_.count(k)) throw ValidationError(path_ + ": unknown key \"" + k + "\"");
    }

    static double as_number(const Json& v, const std::string& where) {
        require(v.is_number(), where + ": is a number");
        return v.get<double>();
    }

    static std::uint64_t as_count(const Json& v, const std::string& where) {
        require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
                where + ": is a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    static std::vector<double> as_numbers(const Json& v, const std::string& where) {
        require(v.is_array(), where + ": is an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) out.push_back(as_number(x, where + "[]"));
        return out;
    }

private:
    const Json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Sweep read_sweep(Fields f) {
    Sweep s;
    s.from = f.number("from");
    s.to = f.number("to");
    s.steps = f.count("steps");
    f.finish();
    require(s.steps >= 1, f.path() + ": steps >= 1");
    require(std::isfinite(s.from) && std::isfinite(s.to) && s.from <= s.to, f.path() + ": from <= to");
    return s;
}

inline ShapeFn read_shape(const Json& v, const std::string& where) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        require(s == "identity", where + ": kind is identity, power or saturating");
        return ShapeFn::identity();
    }
    Fields f(v, where);
    const auto kind = f.text("kind");
    ShapeFn out;
    if (kind == "identity") out = ShapeFn::identity();
    else if (kind == "power") out = ShapeFn::power(f.number("exponent"));
    else if (kind == "saturating") out = ShapeFn::saturating(f.number("scale"));
    else throw ValidationError(where + ": kind is identity, power or saturating");
    f.finish();
    return out;
}

inline RecognitionCurve read_curve(Fields f) {
    const auto kind = f.text("kind");
    RecognitionCurve out;
    if (kind == "linear_clamped") out = RecognitionCurve::linear_clamped();
    else if (kind == "saturating_exponential") out = RecognitionCurve::saturating_exponential(f.number("rate"));
    else if (kind == "logistic_shifted")
        out = RecognitionCurve::logistic_shifted(f.number("steepness"), f.number("midpoint"));
    else if (kind == "tabulated") out = RecognitionCurve::tabulated(f.numbers("w"), f.numbers("f"));
    else
        throw ValidationError(f.path() +
                              ": kind is linear_clamped, saturating_exponential, logistic_shifted or tabulated");
    f.finish();
    return out;
}

inline RecognitionSpec read_recognition(Fields f) {
    RecognitionSpec r;
    if (f.has("w")) {
        r.w = f.number("w");
        require(*r.w >= 0.0 && std::isfinite(*r.w), "recognition: w >= 0");
    }
    if (f.has("sweep")) {
        r.sweep = read_sweep(f.object("sweep"));
        require(r.sweep->from >= 0.0, "recognition: w >= 0");
    }
    if (f.has("curve")) r.curve = read_curve(f.object("curve"));
    if (f.has("tipping")) {
        Fields t = f.object("tipping");
        TippingSpec tip;
        tip.sd = t.number("sd");
        tip.samples = t.count("samples", tip.samples);
        t.finish();
        require(tip.sd > 0.0 && std::isfinite(tip.sd), "tipping: w_sd > 0");
        require(tip.samples >= 1, "tipping: samples >= 1");
        r.tipping = tip;
    }
    f.finish();
    if (r.curve) {
        double upper = 1.0;
        if (r.w) upper = std::max(upper, *r.w);
        if (r.sweep) upper = std::max(upper, r.sweep->to);
        r.curve->check_sampled(upper);
    }
    return r;
}

inline SurplusDynamics read_dynamics(Fields f) {
    const auto kind = f.text("kind");
    SurplusDynamics out;
    if (kind == "deterministic") {
        out = Deterministic{f.number("growth")};
    } else if (kind == "discrete_shocks") {
        DiscreteShocks d;
        const Json& list = f.at("shocks");
        require(list.is_array(), f.where("shocks") + ": is an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            Fields s(list[i], f.where("shocks") + "[" + std::to_string(i) + "]");
            d.shocks.push_back({s.number("growth"), s.number("probability")});
            s.finish();
        }
        out = d;
    } else if (kind == "markov_grid") {
        out = MarkovGrid{f.numbers("levels"), f.matrix("transition")};
    } else {
        throw ValidationError(f.path() + ": kind is deterministic, discrete_shocks or markov_grid");
    }
    f.finish();
    return out;
}

inline CostSeries read_costs(const Json& v, const std::string& where) {
    if (v.is_number()) return CostSeries::constant(v.get<double>());
    Fields f(v, where);
    CostSeries out;
    if (f.has("by_period")) out = CostSeries::by_period(f.numbers("by_period"));
    else if (f.has("by_state")) out = CostSeries::by_state(f.numbers("by_state"));
    else if (f.has("table")) out = CostSeries(f.matrix("table"));
    else throw ValidationError(where + ": is a number or has by_period, by_state or table");
    f.finish();
    return out;
}

inline AxisSweep read_axis(Fields f) {
    AxisSweep a;
    const auto name = f.text("axis");
    if (name == "delta") a.axis = SweepAxis::Delta;
    else if (name == "growth") a.axis = SweepAxis::Growth;
    else if (name == "collapse_cost") a.axis = SweepAxis::CollapseCost;
    else if (name == "maintenance_cost") a.axis = SweepAxis::MaintenanceCost;
    else throw ValidationError(f.path() + ": axis is delta, growth, collapse_cost or maintenance_cost");
    a.range.from = f.number("from");
    a.range.to = f.number("to");
    a.range.steps = f.count("steps");
    f.finish();
    require(a.range.steps >= 1, f.path() + ": steps >= 1");
    require(std::isfinite(a.range.from) && std::isfinite(a.range.to) && a.range.from <= a.range.to,
            f.path() + ": from <= to");
    return a;
}

inline void check_axis(const AxisSweep& a, const DPScenario& dp) {
    switch (a.axis) {
    case SweepAxis::Delta:
        require(a.range.from > 0.0 && a.range.to < 1.0, "dp: 0 < delta < 1");
        break;
    case SweepAxis::Growth:
        require(std::holds_alternative<Deterministic>(dp.process.dynamics),
                "dp.sweep: growth axis needs a deterministic process");
        require(a.range.from > -1.0, "dp: growth > -1");
        if (a.range.to > 0.0) require(dp.config.r_cap.has_value(), "dp: R_cap required for growing processes");
        break;
    case SweepAxis::CollapseCost:
    case SweepAxis::MaintenanceCost:
        require(a.range.from >= 0.0, "costs: nonnegative everywhere");
        break;
    }
}

inline DPScenario read_dp(Fields f, const std::optional<PayoffMatrix>& pd) {
    require(pd.has_value(), "dp: payoff_matrix present");
    DPScenario d;
    d.process.dynamics = read_dynamics(f.object("process"));
    d.process.punishment = pd->punishment();
    d.process.initial_reward = f.number("initial_R", pd->reward());
    if (f.has("collapse_cost")) d.costs.collapse = read_costs(f.at("collapse_cost"), f.where("collapse_cost"));
    if (f.has("maintenance_cost"))
        d.costs.maintenance = read_costs(f.at("maintenance_cost"), f.where("maintenance_cost"));
    d.config.delta = f.number("delta", d.config.delta);
    d.config.tolerance = f.number("tolerance", d.config.tolerance);
    d.config.max_iterations = f.count("max_iterations", d.config.max_iterations);
    if (f.has("R_cap")) d.config.r_cap = f.number("R_cap");
    d.config.grid_points = f.count("grid_points", d.config.grid_points);
    d.config.floor_fraction = f.number("floor_fraction", d.config.floor_fraction);
    d.config.max_states = f.count("max_states", d.config.max_states);
    d.horizon = f.count("horizon", d.horizon);
    const auto policy = f.text("policy", "greedy");
    if (policy == "greedy") d.policy = PolicyKind::Greedy;
    else if (policy == "always_stop") d.policy = PolicyKind::AlwaysStop;
    else if (policy == "never_stop") d.policy = PolicyKind::NeverStop;
    else throw ValidationError(f.where("policy") + ": is greedy, always_stop or never_stop");
    d.paths = f.count("paths", d.paths);
    if (f.has("sweep")) {
        Fields s = f.object("sweep");
        d.sweep_x = read_axis(s.object("x"));
        d.sweep_y = read_axis(s.object("y"));
        s.finish();
        require(d.sweep_x->axis != d.sweep_y->axis, "dp.sweep: x and y axes differ");
    }
    f.finish();

    require(d.horizon >= 1, "simulate: horizon >= 1");
    require(d.paths >= 1, "simulate: paths >= 1");
    const SurplusChain chain = build_chain(d.process, d.config);
    d.costs.collapse.check_states(chain.size());
    d.costs.maintenance.check_states(chain.size());
    if (d.sweep_x) check_axis(*d.sweep_x, d);
    if (d.sweep_y) check_axis(*d.sweep_y, d);
    return d;
}

inline LevelFn read_level(Fields f) {
    LevelFn h;
    const auto kind = f.text("kind", "identity");
    if (kind == "identity") h.kind = LevelFn::Kind::Identity;
    else if (kind == "clamped") h.kind = LevelFn::Kind::Clamped;
    else throw ValidationError(f.where("kind") + ": is identity or clamped");
    h.lower = f.number("lower", h.lower);
    h.upper = f.number("upper", h.upper);
    f.finish();
    return h;
}

inline ReferenceScenario read_reference(Fields f) {
    ReferenceScenario r;
    ReferenceParams& p = r.problem.params;
    p.alpha = f.number("alpha", 0.0);
    p.beta_plus = f.number("beta_plus", 0.0);
    p.beta_minus = f.number("beta_minus", 0.0);
    p.gamma_plus = f.number("gamma_plus", 0.0);
    p.gamma_minus = f.number("gamma_minus", 0.0);
    p.delta_weight = f.number("delta_weight", 0.0);
    p.cost = f.number("cost", 0.0);
    if (f.has("g1")) p.g1 = read_shape(f.at("g1"), f.where("g1"));
    if (f.has("g2")) p.g2 = read_shape(f.at("g2"), f.where("g2"));
    if (f.has("g3")) p.g3 = read_shape(f.at("g3"), f.where("g3"));
    if (f.has("h")) p.h = read_level(f.object("h"));
    r.problem.levels = f.numbers("levels");
    r.problem.transition = f.matrix("transition");
    r.problem.reference = f.number("reference", 0.0);
    r.problem.discount = f.number("discount", r.problem.discount);
    r.problem.reference_dependent_dynamics = f.flag("reference_dependent_dynamics", false);
    r.problem.tolerance = f.number("tolerance", r.problem.tolerance);
    r.problem.max_iterations = f.count("max_iterations", r.problem.max_iterations);
    r.kappas = f.numbers("kappas");
    f.finish();
    r.problem.validate();
    require(!r.kappas.empty(), "reference: kappas nonempty");
    for (double k : r.kappas) require(std::isfinite(k), "reference: kappas finite");
    for (double x : r.problem.levels) (void)p.h(x);
    return r;
}

inline MassScenario read_mass(Fields f) {
    MassScenario m;
    MassParams& p = m.params;
    p.eta = f.number("eta", p.eta);
    p.c_bar = f.number("c_bar", p.c_bar);
    p.kappa = f.number("kappa", p.kappa);
    p.rho = f.number("rho", p.rho);
    p.x_bar = f.number("x_bar", p.x_bar);
    p.beta_plus = f.number("beta_plus", 0.0);
    p.beta_minus = f.number("beta_minus", 0.0);
    p.gamma_plus = f.number("gamma_plus", 0.0);
    p.gamma_minus = f.number("gamma_minus", 0.0);
    if (f.has("g2")) p.g2 = read_shape(f.at("g2"), f.where("g2"));
    if (f.has("g3")) p.g3 = read_shape(f.at("g3"), f.where("g3"));
    m.state.x = f.number("x");
    m.state.forecast = f.number("forecast", m.state.x);
    m.state.reference = f.number("reference", m.state.x);
    m.steps = f.count("steps", m.steps);
    m.perturbation = f.number("perturbation", m.perturbation);
    f.finish();
    p.validate();
    require(std::isfinite(m.state.x) && std::isfinite(m.state.forecast) && std::isfinite(m.state.reference),
            "mass: state finite");
    require(m.steps >= 2, "mass: steps >= 2");
    require(m.perturbation != 0.0 && std::isfinite(m.perturbation), "mass: perturbation nonzero");
    return m;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace detail

/// Parses and validates a scenario from JSON text.
inline Scenario parse_scenario(const std::string& text) {
    detail::Json doc;
    try {
        doc = detail::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = detail::line_column(text, e.byte);
        std::ostringstream os;
        os << "malformed scenario at line " << line << ", column " << column << ": " << e.what();
        throw ParseError(os.str(), line, column);
    }

    detail::Fields f(doc, "scenario");
    Scenario s;
    s.name = f.text("name", "");
    s.description = f.text("description", "");
    if (f.has("payoff_matrix")) {
        detail::Fields m = f.object("payoff_matrix");
        s.payoff_matrix.emplace(m.number("T"), m.number("R"), m.number("P"), m.number("S"));
        m.finish();
    }
    if (f.has("recognition")) s.recognition = detail::read_recognition(f.object("recognition"));
    if (f.has("dp")) s.dp = detail::read_dp(f.object("dp"), s.payoff_matrix);
    if (f.has("reference")) s.reference = detail::read_reference(f.object("reference"));
    if (f.has("mass")) s.mass = detail::read_mass(f.object("mass"));
    s.seed = f.count("seed", 0);
    if (f.has("output")) {
        detail::Fields o = f.object("output");
        s.output.format = o.text("format", "csv");
        if (o.has("path")) s.output.path = o.text("path");
        o.finish();
        detail::require(s.output.format == "csv" || s.output.format == "json", "output: format is csv or json");
    }
    f.finish();
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("scenario: file exists and is readable (" + path + ")");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// --------------------------------------------------------------------------
// Writing
// --------------------------------------------------------------------------

namespace detail {

inline Json sweep_json(const Sweep& s) { return {{"from", s.from}, {"to", s.to}, {"steps", s.steps}}; }

inline Json shape_json(const ShapeFn& g) {
    return std::visit(
        [](const auto& k) -> Json {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, ShapeFn::Power>) return {{"kind", "power"}, {"exponent", k.exponent}};
            else if constexpr (std::is_same_v<K, ShapeFn::Saturating>) return {{"kind", "saturating"}, {"scale", k.scale}};
            else return {{"kind", "identity"}};
        },
        g.kind());
}

inline Json curve_json(const RecognitionCurve& c) {
    return std::visit(
        [&](const auto& s) -> Json {
            using S = std::decay_t<decltype(s)>;
            Json out{{"kind", c.name()}};
            if constexpr (std::is_same_v<S, RecognitionCurve::SaturatingExponential>) {
                out["rate"] = s.rate;
            } else if constexpr (std::is_same_v<S, RecognitionCurve::LogisticShifted>) {
                out["steepness"] = s.steepness;
                out["midpoint"] = s.midpoint;
            } else if constexpr (std::is_same_v<S, RecognitionCurve::Tabulated>) {
                out["w"] = s.w;
                out["f"] = s.f;
            }
            return out;
        },
        c.shape());
}

inline Json dynamics_json(const SurplusDynamics& d) {
    return std::visit(
        [](const auto& x) -> Json {
            using D = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<D, Deterministic>) {
                return {{"kind", "deterministic"}, {"growth", x.growth}};
            } else if constexpr (std::is_same_v<D, DiscreteShocks>) {
                Json list = Json::array();
                for (const auto& s : x.shocks) list.push_back({{"growth", s.growth}, {"probability", s.probability}});
                return {{"kind", "discrete_shocks"}, {"shocks", list}};
            } else {
                return {{"kind", "markov_grid"}, {"levels", x.levels}, {"transition", x.transition}};
            }
        },
        d);
}

inline Json costs_json(const CostSeries& c) {
    if (c.rows().size() == 1 && c.rows()[0].size() == 1) return c.rows()[0][0];
    return {{"table", c.rows()}};
}

inline Json axis_json(const AxisSweep& a) {
    return {{"axis", to_string(a.axis)}, {"from", a.range.from}, {"to", a.range.to}, {"steps", a.range.steps}};
}

} // namespace detail

/// Canonical JSON form. parse_scenario(to_json(s).dump()) == s.
inline nlohmann::ordered_json to_json(const Scenario& s) {
    using detail::Json;
    Json out;
    out["name"] = s.name;
    out["description"] = s.description;
    out["seed"] = s.seed;
    if (s.payoff_matrix) {
        const auto& pd = *s.payoff_matrix;
        out["payoff_matrix"] = {
            {"T", pd.temptation()}, {"R", pd.reward()}, {"P", pd.punishment()}, {"S", pd.sucker()}};
    }
    if (s.recognition) {
        const auto& r = *s.recognition;
        Json j = Json::object();
        if (r.w) j["w"] = *r.w;
        if (r.sweep) j["sweep"] = detail::sweep_json(*r.sweep);
        if (r.curve) j["curve"] = detail::curve_json(*r.curve);
        if (r.tipping) j["tipping"] = {{"sd", r.tipping->sd}, {"samples", r.tipping->samples}};
        out["recognition"] = j;
    }
    if (s.dp) {
        const auto& d = *s.dp;
        Json j;
        j["process"] = detail::dynamics_json(d.process.dynamics);
        j["initial_R"] = d.process.initial_reward;
        j["collapse_cost"] = detail::costs_json(d.costs.collapse);
        j["maintenance_cost"] = detail::costs_json(d.costs.maintenance);
        j["delta"] = d.config.delta;
        j["tolerance"] = d.config.tolerance;
        j["max_iterations"] = d.config.max_iterations;
        if (d.config.r_cap) j["R_cap"] = *d.config.r_cap;
        j["grid_points"] = d.config.grid_points;
        j["floor_fraction"] = d.config.floor_fraction;
        j["max_states"] = d.config.max_states;
        j["horizon"] = d.horizon;
        j["policy"] = to_string(d.policy);
        j["paths"] = d.paths;
        if (d.sweep_x && d.sweep_y)
            j["sweep"] = {{"x", detail::axis_json(*d.sweep_x)}, {"y", detail::axis_json(*d.sweep_y)}};
        out["dp"] = j;
    }
    if (s.reference) {
        const auto& r = *s.reference;
        const auto& p = r.problem.params;
        Json j;
        j["alpha"] = p.alpha;
        j["beta_plus"] = p.beta_plus;
        j["beta_minus"] = p.beta_minus;
        j["gamma_plus"] = p.gamma_plus;
        j["gamma_minus"] = p.gamma_minus;
        j["delta_weight"] = p.delta_weight;
        j["cost"] = p.cost;
        j["g1"] = detail::shape_json(p.g1);
        j["g2"] = detail::shape_json(p.g2);
        j["g3"] = detail::shape_json(p.g3);
        j["h"] = {{"kind", p.h.kind == LevelFn::Kind::Clamped ? "clamped" : "identity"},
                  {"lower", p.h.lower},
                  {"upper", p.h.upper}};
        j["levels"] = r.problem.levels;
        j["transition"] = r.problem.transition;
        j["reference"] = r.problem.reference;
        j["discount"] = r.problem.discount;
        j["reference_dependent_dynamics"] = r.problem.reference_dependent_dynamics;
        j["tolerance"] = r.problem.tolerance;
        j["max_iterations"] = r.problem.max_iterations;
        j["kappas"] = r.kappas;
        out["reference"] = j;
    }
    if (s.mass) {
        const auto& m = *s.mass;
        const auto& p = m.params;
        out["mass"] = {{"eta", p.eta},
                       {"c_bar", p.c_bar},
                       {"kappa", p.kappa},
                       {"rho", p.rho},
                       {"x_bar", p.x_bar},
                       {"beta_plus", p.beta_plus},
                       {"beta_minus", p.beta_minus},
                       {"gamma_plus", p.gamma_plus},
                       {"gamma_minus", p.gamma_minus},
                       {"g2", detail::shape_json(p.g2)},
                       {"g3", detail::shape_json(p.g3)},
                       {"x", m.state.x},
                       {"forecast", m.state.forecast},
                       {"reference", m.state.reference},
                       {"steps", m.steps},
                       {"perturbation", m.perturbation}};
    }
    Json o{{"format", s.output.format}};
    if (s.output.path) o["path"] = *s.output.path;
    out["output"] = o;
    return out;
}

/// FNV-1a over the canonical serialisation, as 16 hex digits.
inline std::string scenario_hash(const Scenario& s) {
    const std::string text = to_json(s).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace radv
