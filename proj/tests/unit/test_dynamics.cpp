#include <doctest.h>

#include "burstnet/dynamics.hpp"
#include "burstnet/error.hpp"
#include "test_support.hpp"

using namespace burstnet;
using testsupport::Gen;
using testsupport::ids;

TEST_CASE("forward_pass examples") {
    SUBCASE("empty stimulus") {
        Network net = build_network(NetworkSpec::load(testsupport::data_path("canonical_931.net")));
        CHECK(forward_pass(net, Stimulus{}).empty());
    }
    SUBCASE("saturated chain of four") {
        auto spec = testsupport::small_spec(1, 3);
        spec.connect(0, 1, 1.0).connect(1, 2, 1.0).connect(2, 3, 1.0);
        Network net = build_network(spec);
        CHECK(forward_pass(net, Stimulus::uniform({NeuronId{0}}, 1.0), 0.5) == ids({0, 1, 2, 3}));
    }
    SUBCASE("canonical fixture against sweep oracle") {
        Network net = build_network(NetworkSpec::load(testsupport::data_path("canonical_931.net")));
        for (double d : {0.0, 0.4, 0.5, 1.0}) {
            Stimulus s;
            for (std::uint32_t i = 0; i < 9; ++i) s.set(NeuronId{i}, i % 2 == 0 ? d : 1.0);
            CHECK(forward_pass(net, s) == testsupport::oracle_forward(net, s, 0.5));
        }
        CHECK(forward_pass(net, Stimulus::uniform({NeuronId{0}, NeuronId{1}, NeuronId{2}})) == ids({0, 1, 2, 9}));
    }
}

TEST_CASE("property: forward_pass equals the sweep oracle on random networks") {
    Gen g(21);
    for (int trial = 0; trial < 300; ++trial) {
        auto rn = testsupport::random_network(g);
        auto stim = testsupport::random_stimulus(g, rn);
        double thr = 0.2 + 0.8 * g.unit();
        CHECK(forward_pass(rn.net, stim, thr) == testsupport::oracle_forward(rn.net, stim, thr));
    }
}

TEST_CASE("stimulus validation") {
    auto spec = testsupport::small_spec(1, 1);
    Network net = build_network(spec);
    Stimulus onto_cortex;
    onto_cortex.set(NeuronId{1}, 1.0);
    CHECK_THROWS_AS(onto_cortex.validate(net), Error);
    Stimulus too_strong;
    too_strong.set(NeuronId{0}, 1.5);
    try {
        too_strong.validate(net);
        FAIL("expected InvalidStimulus");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidStimulus);
    }
    CHECK_THROWS_AS(forward_pass(net, Stimulus{}, 0.0), Error);
}

TEST_CASE("forced bursts are active and scale their outgoing drive") {
    auto spec = testsupport::small_spec(1, 3);
    spec.connect(1, 3, 0.2).connect(2, 3, 0.2);
    Network net = build_network(spec);
    CHECK(forward_pass(net, Stimulus{}, 0.5, {ids({1, 2}), 1.0}) == ids({1, 2}));
    CHECK(forward_pass(net, Stimulus{}, 0.5, {ids({1, 2}), 1.5}) == ids({1, 2, 3}));
    auto modes = assign_modes(net, ids({1, 2}), strong_subgraph(net), ids({1, 2}));
    CHECK(modes[1] == FiringMode::Bursting);
    CHECK_THROWS_AS(assign_modes(net, ids({1}), strong_subgraph(net), ids({2})), Error);
}

TEST_CASE("assign_modes examples") {
    SUBCASE("strong chain: only the top bursts") {
        auto spec = testsupport::small_spec(1, 2);
        spec.connect(0, 1, 0.9).connect(1, 2, 0.9);
        Network net = build_network(spec);
        auto modes = assign_modes(net, ids({0, 1, 2}), strong_subgraph(net));
        CHECK(modes == ModeMap{FiringMode::Tonic, FiringMode::Tonic, FiringMode::Bursting});
    }
    SUBCASE("a lone active neuron bursts") {
        Network net = build_network(testsupport::small_spec(1, 1));
        auto modes = assign_modes(net, ids({1}), strong_subgraph(net));
        CHECK(modes == ModeMap{FiringMode::Silent, FiringMode::Bursting});
    }
    SUBCASE("an inactive strong successor explains nothing") {
        auto spec = testsupport::small_spec(1, 1);
        spec.connect(0, 1, 0.9);
        Network net = build_network(spec);
        CHECK(assign_modes(net, ids({0}), strong_subgraph(net))[0] == FiringMode::Bursting);
    }
    SUBCASE("interneurons are tonic") {
        auto spec = testsupport::small_spec(1, 0, 1);
        spec.connect(0, 1, 0.9);
        Network net = build_network(spec);
        auto modes = assign_modes(net, ids({0, 1}), strong_subgraph(net));
        CHECK(modes[1] == FiringMode::Tonic);
        CHECK(modes[0] == FiringMode::Bursting);  // an interneuron does not explain
    }
}

TEST_CASE("property: random 20-node DAG modes match the successor scan") {
    Gen g(22);
    for (int trial = 0; trial < 300; ++trial) {
        auto spec = testsupport::small_spec(1, 19);
        for (std::uint32_t a = 0; a < 20; ++a) {
            for (std::uint32_t b = a + 1; b < 20; ++b) {
                if (g.chance(0.15)) spec.connect(a, b, g.unit());
            }
        }
        Network net = build_network(spec);
        NeuronSet active;
        for (std::uint32_t i = 0; i < 20; ++i) {
            if (g.chance(0.5)) active.insert(NeuronId{i});
        }
        auto modes = assign_modes(net, active, strong_subgraph(net, 0.5));
        NeuronSet bursting;
        for (std::uint32_t i = 0; i < 20; ++i) {
            if (modes[i] == FiringMode::Bursting) bursting.insert(NeuronId{i});
            CHECK((modes[i] != FiringMode::Silent) == active.contains(NeuronId{i}));
        }
        CHECK(bursting == testsupport::oracle_bursting(net, active, 0.5));
    }
}

TEST_CASE("property: explanation-root rule on random windows") {
    Gen g(23);
    for (int trial = 0; trial < 300; ++trial) {
        auto rn = testsupport::random_network(g);
        auto stim = testsupport::random_stimulus(g, rn);
        NeuronSet active = forward_pass(rn.net, stim);
        auto strong = strong_subgraph(rn.net);
        auto modes = assign_modes(rn.net, active, strong);
        for (NeuronId n : active) {
            if (!rn.net.is_excitatory(n)) {
                CHECK(modes[n.index()] == FiringMode::Tonic);
                continue;
            }
            bool has_active_strong = false;
            for (const auto& s : rn.net.synapses()) {
                if (s.pre == n && s.kind == SynapseKind::Driving && s.weight >= 0.5 && active.contains(s.post) &&
                    rn.net.is_excitatory(s.post)) {
                    has_active_strong = true;
                }
            }
            CHECK(has_active_strong == (modes[n.index()] == FiringMode::Tonic));
        }
    }
}

TEST_CASE("property: a new strong edge never raises the bursting count") {
    Gen g(24);
    int tried = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto rn = testsupport::random_network(g);
        auto stim = testsupport::random_stimulus(g, rn);
        NeuronSet active = forward_pass(rn.net, stim);
        auto modes = assign_modes(rn.net, active, strong_subgraph(rn.net));
        std::vector<std::pair<std::uint32_t, std::uint32_t>> candidates;
        for (NeuronId b : active) {
            if (modes[b.index()] != FiringMode::Bursting) continue;
            for (NeuronId c : active) {
                if (c == b || !rn.net.is_excitatory(c) || rn.net.is_sensory(c)) continue;
                if (rn.net.find_synapse(b, c, SynapseKind::Driving)) continue;
                candidates.emplace_back(b.value, c.value);
            }
        }
        if (candidates.empty()) continue;
        auto [b, c] = candidates[g.below(static_cast<std::uint32_t>(candidates.size()))];
        NetworkSpec spec = rn.spec;
        spec.connect(b, c, 1.0);
        Network grown = build_network(spec);
        NeuronSet active2 = forward_pass(grown, stim);
        REQUIRE(active2 == active);
        auto modes2 = assign_modes(grown, active2, strong_subgraph(grown));
        auto count = [](const ModeMap& m) { return std::count(m.begin(), m.end(), FiringMode::Bursting); };
        CHECK(count(modes2) <= count(modes));
        CHECK(modes2[b] == FiringMode::Tonic);
        ++tried;
    }
    CHECK(tried > 50);
}

TEST_CASE("emit_spikes examples") {
    ClockParams clock;  // 100 ms, 40 Hz, 3 @ 5 ms
    SUBCASE("silent network") {
        Network net = build_network(testsupport::small_spec(1, 1));
        CHECK(emit_spikes(net, ModeMap(2, FiringMode::Silent), {}, clock, 0).empty());
    }
    SUBCASE("one bursting neuron, twelve spikes") {
        Network net = build_network(testsupport::small_spec(1, 1));
        ModeMap modes{FiringMode::Silent, FiringMode::Bursting};
        const std::int64_t start = 300;
        auto spikes = emit_spikes(net, modes, {{NeuronId{1}, 0}}, clock, 3);
        const std::vector<std::int64_t> expected{0, 5, 10, 25, 30, 35, 50, 55, 60, 75, 80, 85};
        REQUIRE(spikes.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(spikes[i].t == start + expected[i]);
            CHECK(spikes[i].neuron == NeuronId{1});
        }
    }
    SUBCASE("same slot, zero phase difference") {
        Network net = build_network(testsupport::small_spec(1, 2));
        ModeMap modes{FiringMode::Silent, FiringMode::Bursting, FiringMode::Bursting};
        auto spikes = emit_spikes(net, modes, {{NeuronId{1}, 2}, {NeuronId{2}, 2}}, clock, 0);
        std::vector<std::int64_t> t1;
        std::vector<std::int64_t> t2;
        for (const auto& s : spikes) (s.neuron == NeuronId{1} ? t1 : t2).push_back(s.t);
        REQUIRE(t1.size() == t2.size());
        for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t1[i] - t2[i] == 0);
    }
    SUBCASE("bursting neuron without a slot") {
        Network net = build_network(testsupport::small_spec(1, 1));
        try {
            emit_spikes(net, ModeMap{FiringMode::Silent, FiringMode::Bursting}, {}, clock, 0);
            FAIL("expected PhaseMissing");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::PhaseMissing);
        }
    }
    SUBCASE("tonic neurons fire once per cycle, interneurons one interval late") {
        Network net = build_network(testsupport::small_spec(1, 0, 1));
        auto spikes = emit_spikes(net, ModeMap{FiringMode::Tonic, FiringMode::Tonic}, {}, clock, 0);
        std::vector<std::int64_t> exc;
        std::vector<std::int64_t> inh;
        for (const auto& s : spikes) (s.neuron == NeuronId{0} ? exc : inh).push_back(s.t);
        CHECK(exc == std::vector<std::int64_t>{0, 25, 50, 75});
        CHECK(inh == std::vector<std::int64_t>{5, 30, 55, 80});
    }
}

TEST_CASE("property: spikes stay inside their window and come sorted") {
    Gen g(25);
    for (int trial = 0; trial < 200; ++trial) {
        auto rn = testsupport::random_network(g);
        ClockParams clock;
        clock.window_ms = static_cast<int>(g.between(50, 250));
        clock.gamma_hz = 20.0 + 40.0 * g.unit();
        clock.burst_spike_count = static_cast<int>(g.between(1, 5));
        clock.burst_isi_ms = static_cast<int>(g.between(1, 8));
        auto modes = testsupport::modes_for(rn.net, testsupport::random_stimulus(g, rn));
        std::map<NeuronId, int> phase;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (modes[i] != FiringMode::Silent) phase[NeuronId{static_cast<std::uint32_t>(i)}] = g.below(6);
        }
        const std::int64_t w = g.below(1000);
        auto spikes = emit_spikes(rn.net, modes, phase, clock, w);
        for (std::size_t i = 0; i < spikes.size(); ++i) {
            CHECK(spikes[i].t >= w * clock.window_ms);
            CHECK(spikes[i].t < (w + 1) * clock.window_ms);
            if (i > 0) CHECK(spikes[i - 1].t <= spikes[i].t);
            CHECK(modes[spikes[i].neuron.index()] != FiringMode::Silent);
        }
    }
}

TEST_CASE("property: window computation is deterministic") {
    Gen g(26);
    for (int trial = 0; trial < 50; ++trial) {
        auto rn = testsupport::random_network(g);
        auto stim = testsupport::random_stimulus(g, rn);
        auto run_once = [&] {
            WindowState ws;
            ws.window_index = 4;
            ws.active = forward_pass(rn.net, stim);
            ws.modes = assign_modes(rn.net, ws.active, strong_subgraph(rn.net));
            std::map<NeuronId, int> phase;
            for (NeuronId n : ws.active) phase[n] = 0;
            ws.spikes = emit_spikes(rn.net, ws.modes, phase, ClockParams{}, 4);
            return ws;
        };
        WindowState a = run_once();
        WindowState b = run_once();
        CHECK(a.active == b.active);
        CHECK(a.modes == b.modes);
        CHECK(a.spikes == b.spikes);
        CHECK(a.count(FiringMode::Bursting) + a.count(FiringMode::Tonic) == a.active.size());
        for (NeuronId n : a.with_mode(FiringMode::Bursting)) CHECK(rn.net.is_excitatory(n));
    }
}

TEST_CASE("clock limits") {
    ClockParams ok;
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.gamma_period_ms() == 25);
    ClockParams short_window;
    short_window.window_ms = 40;
    CHECK_THROWS_AS(short_window.validate(), Error);
    ClockParams fast_theta;
    fast_theta.theta_hz = 8.0;
    CHECK_THROWS_AS(fast_theta.validate(), Error);
}
