#include <doctest.h>

#include <cmath>

#include "burstnet/error.hpp"
#include "burstnet/neuromod.hpp"
#include "test_support.hpp"

using namespace burstnet;
using testsupport::Gen;
using testsupport::ids;

TEST_CASE("compute_pe") {
    ValueTable v(0.2);
    const StateKey k = state_key(ids({1, 2}));
    CHECK(v.compute_pe(1.0, k) == doctest::Approx(1.0));
    CHECK(v.value(k) == doctest::Approx(0.2));
    CHECK(v.compute_pe(1.0, k) == doctest::Approx(0.8));
    CHECK(v.value(k) == doctest::Approx(0.36));
    CHECK(v.compute_pe(0.0, k) == doctest::Approx(-0.36));
    CHECK(v.value(state_key(ids({3}))) == 0.0);
    CHECK_THROWS_AS(ValueTable(0.0), Error);
}

TEST_CASE("property: repeated reward drives the value towards it") {
    Gen g(51);
    for (int trial = 0; trial < 100; ++trial) {
        const double r = 2.0 * g.unit() - 1.0;
        const double rate = 0.05 + 0.9 * g.unit();
        ValueTable v(rate);
        const StateKey k{g.raw()};
        double last = std::abs(v.compute_pe(r, k));
        for (int i = 0; i < 50; ++i) {
            double d = std::abs(v.compute_pe(r, k));
            CHECK(d <= last + 1e-15);
            last = d;
        }
        CHECK(v.value(k) == doctest::Approx(r).epsilon(1e-2));
    }
}

TEST_CASE("update_modulators") {
    const ModulatorState base;
    SUBCASE("zero inputs return the baselines") {
        auto m = update_modulators(0.0, 0, 10, 0.0, base);
        CHECK(m.level == base.baseline);
    }
    SUBCASE("negative surprise") {
        auto m = update_modulators(-1.0, 0, 10, 0.0, base);
        CHECK(m[ModulatorKind::DA] < base.base(ModulatorKind::DA));
        CHECK(m[ModulatorKind::HT5] > base.base(ModulatorKind::HT5));
    }
    SUBCASE("hand-computed levels for delta 0.5") {
        auto m = update_modulators(0.5, 0, 10, 0.0, base);
        CHECK(m[ModulatorKind::DA] == doctest::Approx(0.3 + 0.5 * 0.5));
        CHECK(m[ModulatorKind::HT5] == doctest::Approx(0.2 + 0.4 * 0.5));
        CHECK(m[ModulatorKind::NA] == doctest::Approx(0.1 + 0.6 * 0.5));
        CHECK(m[ModulatorKind::ACh] == doctest::Approx(0.2));
    }
    SUBCASE("novelty and negative valence raise ACh") {
        auto m = update_modulators(0.0, 5, 10, -0.5, base);
        CHECK(m[ModulatorKind::ACh] == doctest::Approx(0.2 + 0.5 * (0.5 + 0.5)));
        CHECK(m[ModulatorKind::NA] == doctest::Approx(0.1 + 0.6 * 0.5));
    }
    SUBCASE("5-HT excess halves every h_ht windows") {
        ModulatorGains gains;
        auto m = update_modulators(1.0, 0, 10, 0.0, base, gains);
        const double excess0 = m[ModulatorKind::HT5] - 0.2;
        for (int w = 0; w < 3; ++w) m = update_modulators(0.0, 0, 10, 0.0, m, gains);
        CHECK(m[ModulatorKind::HT5] - 0.2 == doctest::Approx(excess0 / 2.0));
    }
}

TEST_CASE("property: levels stay in [0,1]") {
    Gen g(52);
    for (int trial = 0; trial < 500; ++trial) {
        ModulatorState m = ModulatorState::at_baseline({g.unit(), g.unit(), g.unit(), g.unit()});
        for (int w = 0; w < 20; ++w) {
            const double delta = 4.0 * g.unit() - 2.0;
            const std::size_t exc = g.between(0, 30);
            const std::size_t nov = exc == 0 ? 0 : g.between(0, static_cast<std::uint32_t>(exc));
            m = update_modulators(delta, nov, exc, 2.0 * g.unit() - 1.0, m);
            CHECK(m.within_bounds());
        }
    }
}

TEST_CASE("property: 5-HT reacts to the size of delta, not its sign") {
    Gen g(53);
    for (int trial = 0; trial < 300; ++trial) {
        const ModulatorState m = ModulatorState::at_baseline({g.unit(), g.unit(), g.unit(), g.unit()});
        const double d = g.unit();
        auto up = update_modulators(d, 0, 5, 0.0, m);
        auto down = update_modulators(-d, 0, 5, 0.0, m);
        CHECK(up[ModulatorKind::HT5] == down[ModulatorKind::HT5]);
        CHECK(up[ModulatorKind::NA] == down[ModulatorKind::NA]);
        CHECK(up[ModulatorKind::DA] >= down[ModulatorKind::DA]);
    }
}

TEST_CASE("four scenario quadrants") {
    ModulatorState m;
    m[ModulatorKind::DA] = 0.61;
    m[ModulatorKind::HT5] = 0.42;
    m[ModulatorKind::NA] = 0.33;
    m[ModulatorKind::ACh] = 0.24;
    auto rr = classify_scenario(0.5, Valence::Positive, m);
    auto ap = classify_scenario(0.5, Valence::Negative, m);
    auto ur = classify_scenario(-0.5, Valence::Positive, m);
    auto rn = classify_scenario(-0.5, Valence::Negative, m);
    CHECK(rr.scenario == Scenario::ReinforceReward);
    CHECK(ap.scenario == Scenario::AvoidPunishment);
    CHECK(ur.scenario == Scenario::UnlearnRewardPath);
    CHECK(rn.scenario == Scenario::ReinforceNonPunishment);
    CHECK(rr.gates == GateSet{0.33, 0.0, 0.61, 0.0});
    CHECK(ap.gates == GateSet{0.33, 0.0, 0.0, 0.42});
    CHECK(ur.gates == GateSet{0.0, 0.24, 0.0, 0.42});
    CHECK(rn.gates == GateSet{0.0, 0.24, 0.61, 0.0});
    try {
        (void)classify_scenario(0.0, Valence::Positive, m);
        FAIL("expected ZeroDelta");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroDelta);
    }
}

TEST_CASE("amygdala") {
    AmygdalaStore amy;
    const StateKey a = state_key(ids({1}));
    const StateKey b = state_key(ids({2}));
    SUBCASE("conditioning overwrites") {
        amy.condition(a, 0.4);
        amy.condition(a, -0.8);
        CHECK(amy.valence(a) == -0.8);
        CHECK(amy.valence(b) == 0.0);
    }
    SUBCASE("zero valence is rejected") {
        try {
            amy.condition(a, 0.0);
            FAIL("expected ZeroValence");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ZeroValence);
        }
        CHECK_THROWS_AS(amy.condition(a, 1.5), Error);
    }
    SUBCASE("reaction takes the largest magnitude") {
        amy.condition(a, 0.3);
        amy.condition(b, -0.9);
        CHECK(amygdala_react({a, b}, amy) == -0.9);
        CHECK(amygdala_react({}, amy) == 0.0);
        CHECK(amygdala_react({state_key(ids({7}))}, amy) == 0.0);
    }
    SUBCASE("a conditioned stimulus raises NA") {
        amy.condition(a, 1.0);
        ModulatorState m;
        auto plain = update_modulators(0.0, 0, 4, amygdala_react({b}, amy), m);
        auto cond = update_modulators(0.0, 0, 4, amygdala_react({a}, amy), m);
        CHECK(cond[ModulatorKind::NA] > plain[ModulatorKind::NA]);
        CHECK(attention_bias(ids({1}), cond, amy) == doctest::Approx(cond[ModulatorKind::NA]));
    }
}

TEST_CASE("state keys depend on the set, not insertion order") {
    Gen g(54);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint32_t> v;
        for (std::uint32_t i = 0; i < 20; ++i) if (g.chance(0.5)) v.push_back(i);
        NeuronSet fwd;
        NeuronSet rev;
        for (auto x : v) fwd.insert(NeuronId{x});
        for (auto it = v.rbegin(); it != v.rend(); ++it) rev.insert(NeuronId{*it});
        CHECK(state_key(fwd) == state_key(rev));
    }
    CHECK(state_key(ids({1, 2})) != state_key(ids({1, 3})));
}
