#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "radv/reference_payoff.hpp"

using namespace radv;
using Catch::Approx;

namespace {

ReferenceDP three_level(const ReferenceParams& p, double discount = 0.9) {
    ReferenceDP dp;
    dp.params = p;
    dp.levels = {0.0, 0.5, 1.0};
    dp.transition = {{0.6, 0.3, 0.1}, {0.2, 0.6, 0.2}, {0.1, 0.3, 0.6}};
    dp.reference = 0.5;
    dp.discount = discount;
    return dp;
}

ReferenceParams random_params(oracle::Gen& gen) {
    ReferenceParams p;
    p.alpha = gen.uniform(-1, 1);
    p.beta_plus = gen.uniform(0, 1);
    p.beta_minus = gen.uniform(0, 1);
    p.gamma_plus = gen.uniform(0, 2);
    p.gamma_minus = gen.uniform(0, 2);
    p.delta_weight = gen.uniform(-0.5, 0.5);
    p.cost = gen.uniform(0, 0.5);
    const auto shape = [&]() -> ShapeFn {
        switch (gen.index(3)) {
        case 0: return ShapeFn::identity();
        case 1: return ShapeFn::power(gen.uniform(1, 3));
        default: return ShapeFn::saturating(gen.uniform(0.2, 3));
        }
    };
    p.g1 = shape();
    p.g2 = shape();
    p.g3 = shape();
    p.h = LevelFn{LevelFn::Kind::Clamped, -1, 1};
    return p;
}

} // namespace

TEST_CASE("shape functions") {
    const auto id = ShapeFn::identity();
    const auto sq = ShapeFn::power(2);
    const auto sat = ShapeFn::saturating(2);
    for (const auto& g : {id, sq, sat}) CHECK(g(0.0) == 0.0);
    CHECK(sq(3) == 9);
    CHECK(sq(-3) == -9);
    CHECK(sat(1.0) == Approx(2 * (1 - std::exp(-0.5))).epsilon(1e-15));
    CHECK(sq.lipschitz(2) == 4);
    CHECK(sat.lipschitz(5) == 1);
    CHECK_THROWS_AS(ShapeFn::power(0.5), ValidationError);
    CHECK_THROWS_AS(ShapeFn::saturating(0), ValidationError);

    // The declared constant bounds every difference quotient on [0, B].
    oracle::Gen gen(4);
    for (const auto& g : {id, sq, ShapeFn::power(2.7), sat, ShapeFn::saturating(0.3)}) {
        const double B = 3.0;
        const double L = g.lipschitz(B);
        for (int i = 0; i < 500; ++i) {
            const double a = gen.uniform(0, B), b = gen.uniform(0, B);
            if (a == b) continue;
            CHECK(std::abs(g(a) - g(b)) <= L * std::abs(a - b) * (1 + 1e-12));
        }
    }
}

TEST_CASE("positive and negative parts") {
    oracle::Gen gen(1);
    for (int i = 0; i < 1000; ++i) {
        const double z = gen.uniform(-5, 5);
        CHECK(positive_part(z) - negative_part(z) == z);
        CHECK(positive_part(z) * negative_part(z) == 0.0);
    }
    CHECK(positive_part(0.0) == 0.0);
    CHECK(negative_part(0.0) == 0.0);
}

TEST_CASE("differences") {
    const auto d0 = differences({1, 1, 1, 1});
    CHECK((d0.change == 0 && d0.surprise == 0 && d0.deviation == 0));
    const auto d = differences({3, 2, 2.5, 5});
    CHECK(d.change == 1);
    CHECK(d.surprise == 0.5);
    CHECK(d.deviation == -2);
    const auto shifted = differences({3, 2, 2.5, 5.25});
    CHECK(shifted.change == d.change);
    CHECK(shifted.surprise == d.surprise);
    CHECK(shifted.deviation == d.deviation - 0.25);
}

TEST_CASE("reference payoff examples") {
    ReferenceParams empty;
    empty.cost = 0.7;
    CHECK(eval_reference_payoff(empty, {3, 1, 2, 4}) == -0.7);

    ReferenceParams adversary;
    adversary.gamma_plus = adversary.gamma_minus = 1;
    CHECK(eval_reference_payoff(adversary, {3, 0, 0, 8}) == 5.0);

    ReferenceParams change;
    change.alpha = 1;
    change.g1 = ShapeFn::power(2);
    CHECK(eval_reference_payoff(change, {5, 2, 0, 0}) == 9.0);
}

TEST_CASE("adversary reduction is proportional to the potential loss") {
    oracle::Gen gen(6);
    for (int i = 0; i < 300; ++i) {
        ReferenceParams p;
        p.gamma_plus = p.gamma_minus = gen.uniform(0.01, 5);
        const double ideal = gen.uniform(-5, 5);
        const double actual = ideal - gen.uniform(0, 5);
        CHECK(eval_reference_payoff(p, {actual, gen.uniform(-5, 5), gen.uniform(-5, 5), ideal}) ==
              Approx(p.gamma_plus * (ideal - actual)).epsilon(1e-14));
    }
}

TEST_CASE("payoff is continuous across the kinks") {
    oracle::Gen gen(12);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_params(gen);
        const double forecast = gen.uniform(-0.5, 0.5), ref = gen.uniform(-0.5, 0.5), prev = gen.uniform(-0.5, 0.5);
        for (double kink : {forecast, ref}) {
            const double h = 1e-9;
            const double left = eval_reference_payoff(p, {kink - h, prev, forecast, ref});
            const double right = eval_reference_payoff(p, {kink + h, prev, forecast, ref});
            const double at = eval_reference_payoff(p, {kink, prev, forecast, ref});
            CHECK(left == Approx(at).margin(1e-7));
            CHECK(right == Approx(at).margin(1e-7));
        }
    }
}

TEST_CASE("level function domain") {
    LevelFn id{LevelFn::Kind::Identity, -1, 1};
    CHECK(id(0.5) == 0.5);
    CHECK_THROWS_AS(id(2.0), ValidationError);
    LevelFn clamp{LevelFn::Kind::Clamped, -1, 1};
    CHECK(clamp(2.0) == 1.0);
    CHECK(clamp(-3.0) == -1.0);
}

TEST_CASE("shift bound") {
    CHECK(ref_shift_bound(1, 1, 1, 0.1, 0.9) == Approx(1.0).epsilon(1e-12));
    CHECK(ref_shift_bound(1, 1, 1, 0.0, 0.9) == 0.0);
    CHECK(ref_shift_bound(0.5, 2, 1.5, -0.2, 0.8) == Approx(2 * 1.5 * 0.2 / 0.2).epsilon(1e-12));
    CHECK(ref_shift_bound(1, 1, 1, 0.4, 0.9) == 2 * ref_shift_bound(1, 1, 1, 0.2, 0.9));
    CHECK_THROWS_AS(ref_shift_bound(1, 1, 1, 0.1, 1.0), ValidationError);
    CHECK_THROWS_AS(ref_shift_bound(1, 1, -1, 0.1, 0.9), ValidationError);
}

TEST_CASE("shift stability check") {
    ReferenceParams p;
    p.gamma_plus = p.gamma_minus = 1;
    const auto dp = three_level(p);

    const auto zero = verify_shift_stability(dp, 0.0);
    CHECK(zero.empirical_gap == 0.0);
    CHECK(zero.holds);

    const auto small = verify_shift_stability(dp, 0.1);
    CHECK(small.bound == Approx(1.0).epsilon(1e-12));
    CHECK(small.empirical_gap <= 1.0 + 1e-9);
    CHECK(small.holds);

    SECTION("tight case: reference-only payoff, every deviation on one side") {
        ReferenceParams only;
        only.gamma_plus = 1;
        auto tight = three_level(only);
        tight.levels = {2, 3, 4};
        tight.reference = 0.5;
        for (double kappa : {0.1, -0.3, 1.0}) {
            const auto r = verify_shift_stability(tight, kappa);
            const double expected = std::abs(kappa) / (1 - tight.discount);
            CHECK(r.gap_fixed == Approx(expected).epsilon(1e-6));
            CHECK(r.bound == Approx(expected).epsilon(1e-12));
            CHECK(r.holds);
        }
    }

    SECTION("a saturating g3 shrinks the gap") {
        ReferenceParams sat = p;
        sat.g3 = ShapeFn::saturating(0.5);
        auto a = three_level(p);
        auto b = three_level(sat);
        a.levels = b.levels = {1, 2, 3};
        a.reference = b.reference = 0.0;
        const auto ra = verify_shift_stability(a, 0.2);
        const auto rb = verify_shift_stability(b, 0.2);
        CHECK(rb.empirical_gap < ra.empirical_gap);
        CHECK(rb.holds);
    }

    SECTION("reference-dependent dynamics are outside the hypotheses") {
        auto bad = dp;
        bad.reference_dependent_dynamics = true;
        CHECK_THROWS_AS(verify_shift_stability(bad, 0.1), HypothesisViolation);
    }

    SECTION("invalid transitions") {
        auto bad = dp;
        bad.transition[0] = {0.5, 0.5, 0.5};
        CHECK_THROWS_AS(verify_shift_stability(bad, 0.1), InvalidProcess);
    }
}

TEST_CASE("shift stability holds on random problems") {
    oracle::Gen gen(31337);
    for (int k = 0; k < 100; ++k) {
        ReferenceDP dp;
        dp.params = random_params(gen);
        const std::size_t n = 2 + gen.index(5);
        for (std::size_t i = 0; i < n; ++i) dp.levels.push_back(gen.uniform(-1, 1));
        for (std::size_t i = 0; i < n; ++i) dp.transition.push_back(gen.simplex(n));
        dp.reference = gen.uniform(-1, 1);
        dp.discount = gen.uniform(0.3, 0.95);
        const double kappa = gen.uniform(-1, 1);
        const auto r = verify_shift_stability(dp, kappa);
        INFO("draw " << k << " kappa " << kappa << " gap " << r.empirical_gap << " bound " << r.bound);
        CHECK(r.holds);
    }
}
