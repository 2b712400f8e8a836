#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "burstnet/spec_text.hpp"
#include "burstnet/types.hpp"

namespace burstnet {

enum class NeuronKind : std::uint8_t { Excitatory, Inhibitory };

enum class RegionKind : std::uint8_t {
    SensoryCortex,
    MotorCortex,
    ThalamusRelay,
    Hippocampus,
    Amygdala,
    MidbrainNucleus,
};

struct Region {
    RegionKind kind = RegionKind::SensoryCortex;
    int channel = 0;                                 // SensoryCortex only
    ModulatorKind modulator = ModulatorKind::DA;     // MidbrainNucleus only

    friend bool operator==(const Region&, const Region&) = default;
};

struct RegionDecl {
    std::string name;
    Region region;
};

/// Driving carries feed-forward activation; ApicalInhibitory gates bursting of the
/// post neuron; Relay links cortical populations for binding (thalamic relay).
enum class SynapseKind : std::uint8_t { Driving, ApicalInhibitory, Relay };

std::string_view to_string(NeuronKind kind) noexcept;
std::string_view to_string(SynapseKind kind) noexcept;

struct Neuron {
    NeuronId id;
    NeuronKind kind = NeuronKind::Excitatory;
    std::size_t region = 0;  // index into Network::regions()
    NeuronSet apical_sources;
};

struct Synapse {
    NeuronId pre;
    NeuronId post;
    double weight = 0.0;
    SynapseKind kind = SynapseKind::Driving;

    friend bool operator==(const Synapse&, const Synapse&) = default;
};

// ---------------------------------------------------------------------------
// Network spec (text grammar in README.md)
// ---------------------------------------------------------------------------

struct NeuronBlock {
    std::string region;
    std::uint32_t count = 0;
    NeuronKind kind = NeuronKind::Excitatory;
};

/// Randomized wiring between two regions, expanded at build time from the spec seed.
struct RandomWiring {
    std::string from_region;
    std::string to_region;
    double probability = 0.0;
    double weight_lo = 0.0;
    double weight_hi = 0.0;
    SynapseKind kind = SynapseKind::Driving;
};

struct NetworkSpec {
    std::vector<RegionDecl> regions;
    std::vector<NeuronBlock> neurons;
    std::vector<Synapse> synapses;
    std::vector<RandomWiring> random_wiring;
    std::uint64_t seed = 0;

    /// Adds hippocampus, amygdala and the four midbrain nuclei (zero neurons each)
    /// when they are not declared yet.
    NetworkSpec& add_required_regions();
    NetworkSpec& add_region(std::string name, Region region);
    /// Appends a block and returns the ids it will receive.
    std::vector<NeuronId> add_neurons(const std::string& region, std::uint32_t count,
                                      NeuronKind kind = NeuronKind::Excitatory);
    NetworkSpec& connect(std::uint32_t pre, std::uint32_t post, double weight,
                         SynapseKind kind = SynapseKind::Driving);
    std::uint32_t neuron_count() const;

    static NetworkSpec parse(std::string_view text);
    static NetworkSpec load(const std::filesystem::path& path);
    /// Reads [regions], [neurons], [synapses], [params]; other sections are
    /// rejected unless `allow_other_sections`.
    static NetworkSpec from_sections(const SectionedText& text, bool allow_other_sections);
};

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

/// Per-neuron in/out synapse indices, each list ascending.
struct Adjacency {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::vector<std::size_t>> in;

    friend bool operator==(const Adjacency&, const Adjacency&) = default;
};

Adjacency build_adjacency(std::size_t neuron_count, std::span<const Synapse> synapses);

class Network {
public:
    Network() = default;

    std::size_t size() const { return neurons_.size(); }
    const std::vector<Neuron>& neurons() const { return neurons_; }
    const std::vector<Synapse>& synapses() const { return synapses_; }
    const std::vector<RegionDecl>& regions() const { return regions_; }
    const Adjacency& adjacency() const { return adjacency_; }
    std::uint64_t seed() const { return seed_; }

    const Neuron& neuron(NeuronId id) const { return neurons_.at(id.index()); }
    const Region& region_of(NeuronId id) const { return regions_[neuron(id).region].region; }
    bool is_excitatory(NeuronId id) const { return neuron(id).kind == NeuronKind::Excitatory; }
    bool is_sensory(NeuronId id) const {
        return region_of(id).kind == RegionKind::SensoryCortex;
    }
    std::size_t excitatory_count() const;

    std::span<const std::size_t> out_synapses(NeuronId id) const {
        return adjacency_.out.at(id.index());
    }
    std::span<const std::size_t> in_synapses(NeuronId id) const {
        return adjacency_.in.at(id.index());
    }
    const Synapse& synapse(std::size_t index) const { return synapses_.at(index); }
    std::optional<std::size_t> find_synapse(NeuronId pre, NeuronId post, SynapseKind kind) const;

    /// Neurons of the named region, ascending.
    std::vector<NeuronId> region_members(std::string_view region_name) const;

    /// Only the plasticity module calls this, between windows.
    void set_weight(std::size_t synapse_index, double weight);

    /// Rebuilds the adjacency from the synapse list and compares.
    bool adjacency_consistent() const;

    /// Canonical text form; parses back into an identical network.
    std::string serialize() const;

private:
    friend Network build_network(const NetworkSpec& spec);

    std::vector<RegionDecl> regions_;
    std::vector<Neuron> neurons_;
    std::vector<Synapse> synapses_;
    Adjacency adjacency_;
    std::uint64_t seed_ = 0;
};

/// Validates and expands a spec. Deterministic given spec.seed.
/// Throws Error with DuplicateSynapse, DanglingEndpoint, InvalidWeight, MissingRegion,
/// DuplicateRegion, SelfLoop or InvalidApicalSource.
Network build_network(const NetworkSpec& spec);

// ---------------------------------------------------------------------------
// Directed graph views
// ---------------------------------------------------------------------------

class DirectedGraph {
public:
    DirectedGraph() = default;
    explicit DirectedGraph(std::size_t node_count) : succ_(node_count) {}

    std::size_t node_count() const { return succ_.size(); }
    std::size_t edge_count() const;

    void add_edge(NeuronId from, NeuronId to);
    bool has_edge(NeuronId from, NeuronId to) const;
    const std::vector<NeuronId>& successors(NeuronId from) const {
        return succ_.at(from.index());
    }
    std::vector<std::pair<NeuronId, NeuronId>> edges() const;
    bool is_subgraph_of(const DirectedGraph& other) const;

    friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

private:
    std::vector<std::vector<NeuronId>> succ_;  // sorted, unique
};

inline constexpr double kDefaultThetaExplain = 0.5;

/// Driving synapses between excitatory neurons with weight >= theta_explain.
/// "Explained by a downstream neuron" means having such an edge to an active target.
DirectedGraph strong_subgraph(const Network& net, double theta_explain = kDefaultThetaExplain);

}  // namespace burstnet
