#include <doctest.h>

#include <fstream>
#include <sstream>

#include "burstnet/error.hpp"
#include "burstnet/netcore.hpp"
#include "burstnet/spec_text.hpp"
#include "test_support.hpp"

using namespace burstnet;
using testsupport::Gen;

namespace {

ErrorCode build_error(const NetworkSpec& spec) {
    try {
        build_network(spec);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected build_network to throw");
    return ErrorCode::InvalidArgument;
}

ErrorCode parse_error(const std::string& text) {
    try {
        build_network(NetworkSpec::parse(text));
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected parse to throw");
    return ErrorCode::InvalidArgument;
}

const char* kRequired =
    "hippocampus hippocampus\namygdala amygdala\nmidbrain_DA midbrain DA\nmidbrain_5HT midbrain 5-HT\n"
    "midbrain_NA midbrain NA\nmidbrain_ACh midbrain ACh\n";

}  // namespace

TEST_CASE("three neurons and no synapses give empty adjacency") {
    auto spec = testsupport::small_spec(1, 2);
    Network net = build_network(spec);
    CHECK(net.size() == 3);
    CHECK(net.synapses().empty());
    for (std::uint32_t i = 0; i < 3; ++i) {
        CHECK(net.out_synapses(NeuronId{i}).empty());
        CHECK(net.in_synapses(NeuronId{i}).empty());
    }
    CHECK(net.adjacency_consistent());
}

TEST_CASE("weight outside [0,1] is rejected") {
    auto spec = testsupport::small_spec(1, 1);
    spec.connect(0, 1, 1.2);
    CHECK(build_error(spec) == ErrorCode::InvalidWeight);
    auto neg = testsupport::small_spec(1, 1);
    neg.connect(0, 1, -0.1);
    CHECK(build_error(neg) == ErrorCode::InvalidWeight);
}

TEST_CASE("canonical fixture has twelve driving synapses") {
    // Count driving lines straight from the file text.
    std::ifstream in(testsupport::data_path("canonical_931.net"));
    std::string line;
    bool in_synapses = false;
    int driving_lines = 0;
    while (std::getline(in, line)) {
        if (line.rfind("[", 0) == 0) in_synapses = line == "[synapses]";
        if (in_synapses && line.find(" driving") != std::string::npos && line[0] != '#') ++driving_lines;
    }
    Network net = build_network(NetworkSpec::load(testsupport::data_path("canonical_931.net")));
    int driving = 0;
    for (const auto& s : net.synapses()) driving += s.kind == SynapseKind::Driving ? 1 : 0;
    CHECK(driving_lines == 12);
    CHECK(driving == driving_lines);
    CHECK(net.size() == 13);
    CHECK(net.region_members("v1").size() == 9);
}

TEST_CASE("structural errors") {
    SUBCASE("dangling endpoint") {
        auto spec = testsupport::small_spec(1, 1);
        spec.connect(0, 7, 0.5);
        CHECK(build_error(spec) == ErrorCode::DanglingEndpoint);
    }
    SUBCASE("duplicate triple") {
        auto spec = testsupport::small_spec(1, 1);
        spec.connect(0, 1, 0.5).connect(0, 1, 0.7);
        CHECK(build_error(spec) == ErrorCode::DuplicateSynapse);
    }
    SUBCASE("same endpoints, different kind is fine") {
        auto spec = testsupport::small_spec(1, 1);
        spec.connect(0, 1, 0.5).connect(0, 1, 0.7, SynapseKind::Relay);
        CHECK(build_network(spec).synapses().size() == 2);
    }
    SUBCASE("self loop") {
        auto spec = testsupport::small_spec(1, 1);
        spec.connect(1, 1, 0.5);
        CHECK(build_error(spec) == ErrorCode::SelfLoop);
    }
    SUBCASE("missing required region") {
        NetworkSpec spec;
        spec.add_region("v1", Region{RegionKind::SensoryCortex, 0});
        spec.add_neurons("v1", 2);
        CHECK(build_error(spec) == ErrorCode::MissingRegion);
    }
    SUBCASE("undeclared region") {
        auto spec = testsupport::small_spec(1, 1);
        spec.add_neurons("nowhere", 1);
        CHECK(build_error(spec) == ErrorCode::MissingRegion);
    }
    SUBCASE("second hippocampus") {
        auto spec = testsupport::small_spec(1, 1);
        spec.add_region("hc2", Region{RegionKind::Hippocampus});
        CHECK(build_error(spec) == ErrorCode::DuplicateRegion);
    }
    SUBCASE("apical edge from an excitatory neuron") {
        auto spec = testsupport::small_spec(1, 2);
        spec.connect(1, 2, 0.5, SynapseKind::ApicalInhibitory);
        CHECK(build_error(spec) == ErrorCode::InvalidApicalSource);
    }
    SUBCASE("apical edge onto an interneuron") {
        auto spec = testsupport::small_spec(1, 1, 2);
        spec.connect(2, 3, 0.5, SynapseKind::ApicalInhibitory);
        CHECK(build_error(spec) == ErrorCode::InvalidApicalSource);
    }
}

TEST_CASE("apical sources come from apical edges and are inhibitory") {
    auto spec = testsupport::small_spec(1, 2, 2);  // 0 sensory, 1-2 exc, 3-4 inh
    spec.connect(3, 1, 0.9, SynapseKind::ApicalInhibitory).connect(4, 1, 0.4, SynapseKind::ApicalInhibitory);
    Network net = build_network(spec);
    CHECK(net.neuron(NeuronId{1}).apical_sources == testsupport::ids({3, 4}));
    CHECK(net.neuron(NeuronId{2}).apical_sources.empty());
    for (const auto& n : net.neurons()) {
        for (NeuronId src : n.apical_sources) CHECK_FALSE(net.is_excitatory(src));
        if (!net.is_excitatory(n.id)) CHECK(n.apical_sources.empty());
    }
}

TEST_CASE("strong_subgraph examples") {
    SUBCASE("all weights 0.1 give an empty graph") {
        auto spec = testsupport::small_spec(2, 3);
        spec.connect(0, 2, 0.1).connect(1, 3, 0.1).connect(2, 4, 0.1).connect(3, 4, 0.1);
        CHECK(strong_subgraph(build_network(spec), 0.5).edge_count() == 0);
    }
    SUBCASE("all weights 1.0 give the full excitatory driving graph") {
        auto spec = testsupport::small_spec(2, 3, 1);
        spec.connect(0, 2, 1.0).connect(1, 3, 1.0).connect(2, 4, 1.0).connect(3, 4, 1.0);
        spec.connect(5, 4, 1.0);                           // from an interneuron
        spec.connect(2, 3, 1.0, SynapseKind::Relay);       // not driving
        Network net = build_network(spec);
        auto g = strong_subgraph(net, 0.5);
        CHECK(g.edge_count() == 4);
        CHECK_FALSE(g.has_edge(NeuronId{5}, NeuronId{4}));
        CHECK_FALSE(g.has_edge(NeuronId{2}, NeuronId{3}));
    }
    SUBCASE("mixed weights keep exactly the edges at or above theta") {
        auto spec = testsupport::small_spec(1, 3);
        spec.connect(0, 1, 0.3).connect(0, 2, 0.6).connect(1, 3, 0.9).connect(2, 3, 0.5);
        Network net = build_network(spec);
        auto g = strong_subgraph(net, 0.5);
        std::vector<std::pair<NeuronId, NeuronId>> scan;
        for (const auto& s : net.synapses()) {
            if (s.weight >= 0.5) scan.emplace_back(s.pre, s.post);
        }
        std::sort(scan.begin(), scan.end());
        CHECK(g.edges() == scan);
        CHECK(g.edge_count() == 3);
    }
    SUBCASE("theta must lie in (0,1]") {
        Network net = build_network(testsupport::small_spec(1, 1));
        CHECK_THROWS_AS(strong_subgraph(net, 0.0), Error);
        CHECK_THROWS_AS(strong_subgraph(net, 1.5), Error);
    }
}

TEST_CASE("property: adjacency round-trips through a rebuild") {
    Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto rn = testsupport::random_network(g);
        auto rebuilt = build_adjacency(rn.net.size(), rn.net.synapses());
        CHECK(rebuilt == rn.net.adjacency());
        for (std::size_t i = 0; i < rn.net.synapses().size(); ++i) {
            const auto& s = rn.net.synapse(i);
            auto out = rn.net.out_synapses(s.pre);
            auto in = rn.net.in_synapses(s.post);
            CHECK(std::find(out.begin(), out.end(), i) != out.end());
            CHECK(std::find(in.begin(), in.end(), i) != in.end());
        }
    }
}

TEST_CASE("property: strong_subgraph is monotone in theta") {
    Gen g(12);
    for (int trial = 0; trial < 200; ++trial) {
        auto rn = testsupport::random_network(g);
        double t1 = 0.05 + 0.95 * g.unit();
        double t2 = 0.05 + 0.95 * g.unit();
        if (t1 < t2) std::swap(t1, t2);
        CHECK(strong_subgraph(rn.net, t1).is_subgraph_of(strong_subgraph(rn.net, t2)));
    }
}

TEST_CASE("property: build is deterministic and serialization round-trips") {
    Gen g(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto rn = testsupport::random_network(g, 30);
        rn.spec.seed = g.raw();
        rn.spec.random_wiring.push_back(RandomWiring{"assoc", "assoc", 0.2, 0.1, 0.9, SynapseKind::Relay});
        const std::string a = build_network(rn.spec).serialize();
        const std::string b = build_network(rn.spec).serialize();
        CHECK(a == b);
        const std::string c = build_network(NetworkSpec::parse(a)).serialize();
        CHECK(c == a);
    }
}

TEST_CASE("random wiring depends on the seed only") {
    auto make = [](std::uint64_t seed) {
        auto spec = testsupport::small_spec(4, 20);
        spec.seed = seed;
        spec.random_wiring.push_back(RandomWiring{"v1", "assoc", 0.3, 0.2, 0.8, SynapseKind::Driving});
        return build_network(spec);
    };
    CHECK(make(5).serialize() == make(5).serialize());
    CHECK(make(5).serialize() != make(6).serialize());
    const Network net = make(5);
    CHECK_FALSE(net.synapses().empty());
    for (const auto& s : net.synapses()) {
        CHECK(s.weight >= 0.2);
        CHECK(s.weight <= 0.8);
    }
}

TEST_CASE("random wiring skips explicitly declared synapses") {
    auto spec = testsupport::small_spec(1, 1);
    spec.connect(0, 1, 0.25);
    spec.random_wiring.push_back(RandomWiring{"v1", "assoc", 1.0, 0.9, 0.9, SynapseKind::Driving});
    Network net = build_network(spec);
    REQUIRE(net.synapses().size() == 1);
    CHECK(net.synapse(0).weight == 0.25);
}

TEST_CASE("text grammar") {
    const std::string base = std::string("[regions]\nv1 sensory 0\nassoc motor\n") + kRequired +
                             "[neurons]\nv1 2 excitatory\nassoc 2 excitatory\n";
    SUBCASE("valid file") {
        Network net = build_network(NetworkSpec::parse(base + "[synapses]\n0 2 0.6 driving # c\n2 3 0.8 relay\n"
                                                              "[params]\nseed = 9\n"));
        CHECK(net.synapses().size() == 2);
        CHECK(net.seed() == 9);
        CHECK(net.is_sensory(NeuronId{0}));
        CHECK_FALSE(net.is_sensory(NeuronId{2}));
    }
    SUBCASE("unknown synapse kind") {
        CHECK(parse_error(base + "[synapses]\n0 2 0.6 gap\n") == ErrorCode::ParseError);
    }
    SUBCASE("unknown section") {
        CHECK(parse_error(base + "[extra]\nx = 1\n") == ErrorCode::ParseError);
    }
    SUBCASE("unknown params key") {
        CHECK(parse_error(base + "[params]\nspeed = 1\n") == ErrorCode::ParseError);
    }
    SUBCASE("content before a section") {
        CHECK(parse_error("v1 sensory 0\n" + base) == ErrorCode::ParseError);
    }
    SUBCASE("repeated section") {
        CHECK(parse_error(base + "[neurons]\nv1 1 excitatory\n") == ErrorCode::ParseError);
    }
    SUBCASE("dangling id") {
        CHECK(parse_error(base + "[synapses]\n0 9 0.6 driving\n") == ErrorCode::DanglingEndpoint);
    }
}

TEST_CASE("set_weight keeps the bounds") {
    auto spec = testsupport::small_spec(1, 1);
    spec.connect(0, 1, 0.5);
    Network net = build_network(spec);
    net.set_weight(0, 1.0);
    CHECK(net.synapse(0).weight == 1.0);
    CHECK_THROWS_AS(net.set_weight(0, 1.01), Error);
    CHECK(net.find_synapse(NeuronId{0}, NeuronId{1}, SynapseKind::Driving) == std::optional<std::size_t>{0});
    CHECK_FALSE(net.find_synapse(NeuronId{0}, NeuronId{1}, SynapseKind::Relay));
}

TEST_CASE("seeds use the full unsigned range") {
    const std::string text = std::string("[regions]\nv1 sensory 0\n") + kRequired +
                             "[neurons]\nv1 1 excitatory\n[params]\nseed = 18446744073709551615\n";
    CHECK(build_network(NetworkSpec::parse(text)).seed() == 18446744073709551615ull);
    CHECK(parse_error(std::string("[regions]\nv1 sensory 0\n") + kRequired + "[params]\nseed = -1\n") ==
          ErrorCode::ParseError);
}
