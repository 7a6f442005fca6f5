#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "radv/commands.hpp"

using namespace radv;
using Catch::Approx;

namespace {

const char* const presets[] = {"sns",       "metagame",      "band_vanished", "ref_shift",
                               "mass_buzz", "mass_damping",  "mass_boundary"};

std::string preset_path(const std::string& name) { return std::string(RADV_SOURCE_DIR) + "/presets/" + name + ".json"; }

Scenario preset(const std::string& name) { return load_scenario(preset_path(name)); }

double real(const ResultTable& t, std::size_t row, const std::string& col) {
    return std::get<double>(t.rows().at(row).at(t.column(col)));
}

std::string text(const ResultTable& t, std::size_t row, const std::string& col) {
    return ResultTable::format_cell(t.rows().at(row).at(t.column(col)));
}

std::string validation_message(const std::string& doc) {
    try {
        parse_scenario(doc);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

/// Random but valid scenario text covering every section.
std::string random_scenario(oracle::Gen& gen) {
    const auto pd = gen.pd();
    const auto num = [](double v) { return ResultTable::format_real(v); };
    std::ostringstream os;
    os << R"({"name":"r","seed":)" << gen.index(1000) << R"(,"payoff_matrix":{"T":)" << num(pd[0]) << R"(,"R":)"
       << num(pd[1]) << R"(,"P":)" << num(pd[2]) << R"(,"S":)" << num(pd[3]) << "},";
    os << R"("recognition":{"w":)" << num(gen.uniform(0, 2)) << R"(,"sweep":{"from":0,"to":)"
       << num(gen.uniform(0.5, 3)) << R"(,"steps":)" << 1 + gen.index(30) << "}";
    switch (gen.index(3)) {
    case 0: os << R"(,"curve":{"kind":"linear_clamped"})"; break;
    case 1: os << R"(,"curve":{"kind":"saturating_exponential","rate":)" << num(gen.uniform(0.1, 4)) << "}"; break;
    default: os << R"(,"curve":{"kind":"tabulated","w":[0,1,4],"f":[0,0.5,0.75]})"; break;
    }
    if (gen.coin()) os << R"(,"tipping":{"sd":)" << num(gen.uniform(0.01, 0.3)) << R"(,"samples":100})";
    os << "},";
    const double g = gen.uniform(0, 0.1);
    os << R"("dp":{"process":{"kind":"deterministic","growth":)" << num(g) << R"(},"collapse_cost":)"
       << num(gen.uniform(0, 1)) << R"(,"maintenance_cost":)" << num(gen.uniform(0, 0.5)) << R"(,"delta":)"
       << num(gen.uniform(0.5, 0.95)) << R"(,"R_cap":)" << num(pd[1] + gen.uniform(1, 10)) << R"(,"policy":")"
       << (gen.coin() ? "greedy" : "never_stop") << R"("},)";
    os << R"("reference":{"alpha":)" << num(gen.uniform(-1, 1)) << R"(,"gamma_plus":)" << num(gen.uniform(0, 1))
       << R"(,"g2":{"kind":"power","exponent":)" << num(gen.uniform(1, 2))
       << R"(},"levels":[0,1],"transition":[[0.5,0.5],[0.25,0.75]],"reference":)" << num(gen.uniform(-1, 1))
       << R"(,"discount":0.8,"kappas":[)" << num(gen.uniform(-1, 1)) << "]},";
    os << R"("mass":{"eta":)" << num(gen.uniform(0.1, 3)) << R"(,"kappa":)" << num(gen.uniform(0, 2))
       << R"(,"rho":)" << num(gen.uniform(0.1, 1)) << R"(,"x":)" << num(gen.uniform(-1, 1))
       << R"(,"g3":{"kind":"saturating","scale":)" << num(gen.uniform(0.5, 2)) << "}},";
    os << R"("output":{"format":")" << (gen.coin() ? "csv" : "json") << R"("}})";
    return os.str();
}

} // namespace

TEST_CASE("presets load") {
    for (const char* name : presets) {
        INFO(name);
        CHECK_NOTHROW(preset(name));
    }
    const auto sns = preset("sns");
    REQUIRE(sns.payoff_matrix);
    CHECK(band(*sns.payoff_matrix).exists);
    CHECK(sns.seed == 0);
    CHECK(preset("metagame").seed == 7);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_scenario(preset_path("no_such_preset")), ValidationError);
}

TEST_CASE("validation messages") {
    CHECK_THAT(validation_message(R"({"payoff_matrix":{"T":4,"R":4,"P":2,"S":0}})"),
               Catch::Matchers::ContainsSubstring("T > R > P > S"));
    CHECK_THAT(validation_message(R"({"payoff_matrix":{"T":5,"R":4,"P":2,"S":0},"extra":1})"),
               Catch::Matchers::ContainsSubstring("unknown key \"extra\""));
    CHECK_THAT(validation_message(R"({"mass":{"eta":1,"x":0,"rho":"fast"}})"),
               Catch::Matchers::ContainsSubstring("scenario.mass.rho: is a number"));
    CHECK_THAT(validation_message(R"({"dp":{"process":{"kind":"deterministic","growth":0}}})"),
               Catch::Matchers::ContainsSubstring("payoff_matrix present"));
    CHECK_THAT(validation_message(R"({"output":{"format":"xml"}})"),
               Catch::Matchers::ContainsSubstring("csv or json"));
    CHECK_THAT(validation_message(R"({"recognition":{"sweep":{"from":1,"to":0,"steps":3}}})"),
               Catch::Matchers::ContainsSubstring("from <= to"));
    CHECK_THAT(validation_message(R"({"reference":{"levels":[0,1],"transition":[[1,0],[0,1]],"kappas":[]}})"),
               Catch::Matchers::ContainsSubstring("kappas nonempty"));
    CHECK(validation_message(R"({"payoff_matrix":{"T":5,"R":4,"P":2,"S":0}})").empty());
    CHECK(parse_scenario("{}").seed == 0);
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_scenario("{\n  \"name\": \"x\",\n  \"seed\": ,\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 11);
        CHECK_THAT(std::string(e.what()), Catch::Matchers::StartsWith("malformed scenario at line 3, column 11"));
    }
    CHECK_THROWS_AS(parse_scenario(""), ParseError);
}

TEST_CASE("canonical form round trips") {
    for (const char* name : presets) {
        INFO(name);
        const auto s = preset(name);
        const auto again = parse_scenario(to_json(s).dump());
        CHECK(again == s);
        CHECK(scenario_hash(again) == scenario_hash(s));
    }
    oracle::Gen gen(77);
    for (int i = 0; i < 100; ++i) {
        const std::string doc = random_scenario(gen);
        INFO(doc);
        const auto s = parse_scenario(doc);
        CHECK(parse_scenario(to_json(s).dump(2)) == s);
    }
}

TEST_CASE("hash depends on content") {
    auto s = preset("sns");
    const auto h = scenario_hash(s);
    CHECK(h.size() == 16);
    s.seed = 1;
    CHECK(scenario_hash(s) != h);
}

TEST_CASE("band command") {
    const auto t = cmd_band(preset("sns"));
    REQUIRE(t.rows().size() == 1);
    CHECK(real(t, 0, "w_min") == 0.25);
    CHECK(real(t, 0, "w_max") == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(text(t, 0, "exists") == "true");
    CHECK(real(t, 0, "lhs") == 3);
    CHECK(real(t, 0, "rhs") == 8);
    CHECK(*t.meta("command") == "band");
    CHECK(*t.meta("scenario") == "sns");

    const auto v = cmd_band(preset("band_vanished"));
    CHECK(text(v, 0, "exists") == "false");
}

TEST_CASE("phase sweep") {
    const auto t = cmd_phase_sweep(preset("sns"));
    REQUIRE(t.rows().size() == 21);
    for (std::size_t i = 0; i < t.rows().size(); ++i) {
        const double w = real(t, i, "w");
        const std::string phase = text(t, i, "phase");
        CHECK(phase == text(t, i, "oracle_phase"));
        if (w < 0.25) CHECK(phase == "Distrust");
        else if (w <= 2.0 / 3.0) CHECK(phase == "FragileBand");
        else CHECK(phase == "Cooperation");
        const double total = real(t, i, "p_Distrust") + real(t, i, "p_FragileBand") + real(t, i, "p_Cooperation") +
                             real(t, i, "p_AsymmetricOnly");
        CHECK(total == Approx(1.0).epsilon(1e-12));
    }
    CHECK(*t.meta("band_exists") == "true");

    const auto v = cmd_phase_sweep(preset("band_vanished"));
    bool asymmetric = false;
    for (std::size_t i = 0; i < v.rows().size(); ++i) {
        CHECK(text(v, i, "phase") == text(v, i, "oracle_phase"));
        asymmetric = asymmetric || text(v, i, "phase") == "AsymmetricOnly";
    }
    CHECK(asymmetric);

    CHECK_THROWS_AS(cmd_phase_sweep(preset("mass_buzz")), ValidationError);
}

TEST_CASE("regime map") {
    const auto t = cmd_regime_map(preset("sns"));
    REQUIRE(t.rows().size() == 400);
    int counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < t.rows().size(); ++i) {
        const std::string r = text(t, i, "regime");
        counts[0] += r == "ImmediateDestruction";
        counts[1] += r == "RationalStagnation";
        counts[2] += r == "InterventionAbandonment";
        CHECK(real(t, i, "delta_one_plus_g") == Approx(real(t, i, "delta") * (1 + real(t, i, "growth"))).epsilon(1e-12));
    }
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);
    CHECK(counts[2] > 0);
    CHECK(counts[0] + counts[1] + counts[2] == 400);
    CHECK(t.meta("cap_sensitivity") != nullptr);

    // Upkeep far above anything continuing could earn: the cost gap swamps the advantage.
    auto s = preset("sns");
    s.dp->costs.collapse = CostSeries::constant(0);
    s.dp->costs.maintenance = CostSeries::constant(1000);
    s.dp->sweep_x = AxisSweep{SweepAxis::Delta, Sweep{0.5, 0.9, 2}};
    s.dp->sweep_y = AxisSweep{SweepAxis::Growth, Sweep{0.0, 0.1, 2}};
    const auto big = cmd_regime_map(s);
    for (std::size_t i = 0; i < big.rows().size(); ++i) CHECK(text(big, i, "regime") == "InterventionAbandonment");

    CHECK_THROWS_AS(cmd_regime_map(preset("ref_shift")), ValidationError);
}

TEST_CASE("simulate") {
    auto s = preset("sns");
    const auto greedy_run = cmd_simulate(s);
    CHECK(*greedy_run.meta("policy") == "greedy");
    CHECK(*greedy_run.meta("stop_time") != "none");

    s.dp->policy = PolicyKind::AlwaysStop;
    const auto stop_run = cmd_simulate(s);
    CHECK(*stop_run.meta("stop_time") == "0");
    REQUIRE(!stop_run.rows().empty());
    CHECK(text(stop_run, 0, "action") == "Stop");
    for (std::size_t i = 1; i < stop_run.rows().size(); ++i) CHECK(text(stop_run, i, "action") == "Absorbed");

    CHECK(std::stod(*greedy_run.meta("mean_realized_payoff")) >= std::stod(*stop_run.meta("mean_realized_payoff")));

    // Discounted cumulative is a running sum of discounted stage payoffs.
    const double delta = s.dp->config.delta;
    double acc = 0.0;
    for (std::size_t i = 0; i < greedy_run.rows().size(); ++i) {
        acc += std::pow(delta, static_cast<double>(i)) * real(greedy_run, i, "stage_payoff");
        CHECK(real(greedy_run, i, "discounted_cumulative") == Approx(acc).epsilon(1e-12).margin(1e-12));
    }
}

TEST_CASE("mass sim") {
    const auto buzz = cmd_mass_sim(preset("mass_buzz"));
    CHECK(*buzz.meta("analytic_label") == "Buzz");
    CHECK(*buzz.meta("empirical_label") == "Buzz");
    CHECK(std::stod(*buzz.meta("jacobian")) == Approx(1.3).epsilon(1e-9));
    CHECK(buzz.meta("warning") == nullptr);

    const auto damp = cmd_mass_sim(preset("mass_damping"));
    CHECK(*damp.meta("analytic_label") == "Stable");
    CHECK(*damp.meta("empirical_label") == "Stable");

    const auto edge = cmd_mass_sim(preset("mass_boundary"));
    CHECK(*edge.meta("analytic_label") == "Boundary");
    CHECK(edge.meta("warning") != nullptr);
}

TEST_CASE("reference shift check") {
    const auto t = cmd_ref_shift_check(preset("ref_shift"));
    CHECK(*t.meta("all_hold") == "true");
    REQUIRE(t.rows().size() == 6);
    CHECK(real(t, 0, "empirical_gap") == 0.0);
    CHECK(real(t, 1, "empirical_gap") <= 1.0);

    auto s = preset("ref_shift");
    oracle::Gen gen(5);
    s.reference->kappas.clear();
    for (int i = 0; i < 10; ++i) s.reference->kappas.push_back(gen.uniform(-2, 2));
    CHECK(*cmd_ref_shift_check(s).meta("all_hold") == "true");
}

TEST_CASE("result tables serialise") {
    const auto t = cmd_phase_sweep(preset("metagame"));

    const auto csv = t.to_csv();
    const auto back = ResultTable::from_csv(csv);
    CHECK(back.columns() == t.columns());
    CHECK(back.metadata() == t.metadata());
    REQUIRE(back.rows().size() == t.rows().size());
    for (std::size_t i = 0; i < t.rows().size(); ++i)
        for (std::size_t j = 0; j < t.columns().size(); ++j) {
            CHECK(back.rows()[i].size() == t.columns().size());
            CHECK(std::get<std::string>(back.rows()[i][j]) == ResultTable::format_cell(t.rows()[i][j]));
        }

    const auto json = ResultTable::from_json(t.to_json());
    CHECK(json.columns() == t.columns());
    CHECK(json.metadata() == t.metadata());
    CHECK(json.to_json() == t.to_json());

    CHECK(ResultTable::format_real(0.1) == "0.10000000000000001");
    CHECK(std::stod(ResultTable::format_real(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK_THROWS(ResultTable({"a", "a"}));
}

TEST_CASE("commands are deterministic") {
    for (const char* name : {"sns", "metagame"}) {
        const auto s = preset(name);
        CHECK(cmd_phase_sweep(s).to_csv() == cmd_phase_sweep(s).to_csv());
        CHECK(cmd_simulate(s).to_json() == cmd_simulate(s).to_json());
    }
}
