#include "burstnet/netcore.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "burstnet/error.hpp"

namespace burstnet {

std::string_view to_string(NeuronKind kind) noexcept {
    return kind == NeuronKind::Excitatory ? "excitatory" : "inhibitory";
}

std::string_view to_string(SynapseKind kind) noexcept {
    switch (kind) {
        case SynapseKind::Driving: return "driving";
        case SynapseKind::ApicalInhibitory: return "apical";
        case SynapseKind::Relay: return "relay";
    }
    return "?";
}

namespace {

SynapseKind parse_synapse_kind(std::string_view s, std::size_t line) {
    if (s == "driving") return SynapseKind::Driving;
    if (s == "apical") return SynapseKind::ApicalInhibitory;
    if (s == "relay") return SynapseKind::Relay;
    throw Error(ErrorCode::ParseError, fmt::format("line {}: unknown synapse kind '{}'", line, s));
}

NeuronKind parse_neuron_kind(std::string_view s, std::size_t line) {
    if (s == "excitatory") return NeuronKind::Excitatory;
    if (s == "inhibitory") return NeuronKind::Inhibitory;
    throw Error(ErrorCode::ParseError, fmt::format("line {}: unknown neuron kind '{}'", line, s));
}

std::string region_text(const Region& r) {
    switch (r.kind) {
        case RegionKind::SensoryCortex: return fmt::format("sensory {}", r.channel);
        case RegionKind::MotorCortex: return "motor";
        case RegionKind::ThalamusRelay: return "thalamus";
        case RegionKind::Hippocampus: return "hippocampus";
        case RegionKind::Amygdala: return "amygdala";
        case RegionKind::MidbrainNucleus:
            return fmt::format("midbrain {}", to_string(r.modulator));
    }
    return "?";
}

Region parse_region(const std::vector<std::string>& tok, std::size_t line) {
    auto need_args = [&](std::size_t n) {
        if (tok.size() != n) {
            throw Error(ErrorCode::ParseError,
                        fmt::format("line {}: region '{}' expects {} fields", line, tok[0], n));
        }
    };
    const std::string& kind = tok.at(1);
    Region r;
    if (kind == "sensory") {
        need_args(3);
        r.kind = RegionKind::SensoryCortex;
        r.channel = static_cast<int>(parse_integer(tok[2], "sensory channel"));
    } else if (kind == "motor") {
        need_args(2);
        r.kind = RegionKind::MotorCortex;
    } else if (kind == "thalamus") {
        need_args(2);
        r.kind = RegionKind::ThalamusRelay;
    } else if (kind == "hippocampus") {
        need_args(2);
        r.kind = RegionKind::Hippocampus;
    } else if (kind == "amygdala") {
        need_args(2);
        r.kind = RegionKind::Amygdala;
    } else if (kind == "midbrain") {
        need_args(3);
        r.kind = RegionKind::MidbrainNucleus;
        if (!parse_modulator(tok[2], r.modulator)) {
            throw Error(ErrorCode::ParseError,
                        fmt::format("line {}: unknown modulator '{}'", line, tok[2]));
        }
    } else {
        throw Error(ErrorCode::ParseError, fmt::format("line {}: unknown region kind '{}'", line, kind));
    }
    return r;
}

std::uint32_t parse_id(std::string_view s, std::size_t line) {
    long long v = parse_integer(s, fmt::format("line {}", line));
    if (v < 0 || v > 0xffffffffLL) {
        throw Error(ErrorCode::DanglingEndpoint, fmt::format("line {}: id {} out of range", line, v));
    }
    return static_cast<std::uint32_t>(v);
}

// Platform-independent uniform draw in [0,1).
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

// ---------------------------------------------------------------------------
// NetworkSpec
// ---------------------------------------------------------------------------

NetworkSpec& NetworkSpec::add_region(std::string name, Region region) {
    regions.push_back(RegionDecl{std::move(name), region});
    return *this;
}

NetworkSpec& NetworkSpec::add_required_regions() {
    auto has = [&](RegionKind k, ModulatorKind m) {
        return std::any_of(regions.begin(), regions.end(), [&](const RegionDecl& d) {
            return d.region.kind == k && (k != RegionKind::MidbrainNucleus || d.region.modulator == m);
        });
    };
    if (!has(RegionKind::Hippocampus, {})) add_region("hippocampus", {RegionKind::Hippocampus});
    if (!has(RegionKind::Amygdala, {})) add_region("amygdala", {RegionKind::Amygdala});
    for (ModulatorKind m : kAllModulators) {
        if (!has(RegionKind::MidbrainNucleus, m)) {
            Region r{RegionKind::MidbrainNucleus};
            r.modulator = m;
            std::string name = "midbrain_" + std::string(to_string(m));
            std::erase(name, '-');
            add_region(std::move(name), r);
        }
    }
    return *this;
}

std::vector<NeuronId> NetworkSpec::add_neurons(const std::string& region, std::uint32_t count,
                                               NeuronKind kind) {
    std::uint32_t first = neuron_count();
    neurons.push_back(NeuronBlock{region, count, kind});
    std::vector<NeuronId> ids;
    for (std::uint32_t i = 0; i < count; ++i) ids.emplace_back(first + i);
    return ids;
}

NetworkSpec& NetworkSpec::connect(std::uint32_t pre, std::uint32_t post, double weight,
                                  SynapseKind kind) {
    synapses.push_back(Synapse{NeuronId{pre}, NeuronId{post}, weight, kind});
    return *this;
}

std::uint32_t NetworkSpec::neuron_count() const {
    std::uint32_t n = 0;
    for (const auto& b : neurons) n += b.count;
    return n;
}

NetworkSpec NetworkSpec::parse(std::string_view text) {
    return from_sections(parse_sectioned_text(text), false);
}

NetworkSpec NetworkSpec::load(const std::filesystem::path& path) {
    return from_sections(load_sectioned_text(path), false);
}

NetworkSpec NetworkSpec::from_sections(const SectionedText& text, bool allow_other_sections) {
    NetworkSpec spec;
    for (const auto& section : text.sections) {
        if (section.name == "regions") {
            for (const auto& line : section.lines) {
                auto tok = split_tokens(line.text);
                if (tok.size() < 2) {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("line {}: expected '<name> <kind> [arg]'", line.number));
                }
                spec.add_region(tok[0], parse_region(tok, line.number));
            }
        } else if (section.name == "neurons") {
            for (const auto& line : section.lines) {
                auto tok = split_tokens(line.text);
                if (tok.size() != 3) {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("line {}: expected '<region> <count> <kind>'", line.number));
                }
                long long count = parse_integer(tok[1], fmt::format("line {}", line.number));
                if (count < 0) {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("line {}: negative neuron count", line.number));
                }
                spec.neurons.push_back(NeuronBlock{tok[0], static_cast<std::uint32_t>(count),
                                                   parse_neuron_kind(tok[2], line.number)});
            }
        } else if (section.name == "synapses") {
            for (const auto& line : section.lines) {
                auto tok = split_tokens(line.text);
                if (!tok.empty() && tok[0] == "random") {
                    if (tok.size() != 7) {
                        throw Error(ErrorCode::ParseError,
                                    fmt::format("line {}: expected 'random <from> <to> <p> <w_lo> "
                                                "<w_hi> <kind>'",
                                                line.number));
                    }
                    std::string where = fmt::format("line {}", line.number);
                    spec.random_wiring.push_back(RandomWiring{
                        tok[1], tok[2], parse_real(tok[3], where), parse_real(tok[4], where),
                        parse_real(tok[5], where), parse_synapse_kind(tok[6], line.number)});
                    continue;
                }
                if (tok.size() != 4) {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("line {}: expected '<pre> <post> <weight> <kind>'",
                                            line.number));
                }
                spec.synapses.push_back(Synapse{
                    NeuronId{parse_id(tok[0], line.number)}, NeuronId{parse_id(tok[1], line.number)},
                    parse_real(tok[2], fmt::format("line {}", line.number)),
                    parse_synapse_kind(tok[3], line.number)});
            }
        } else if (section.name == "params") {
            for (const auto& line : section.lines) {
                std::string key;
                std::string value;
                if (!split_key_value(line.text, key, value)) {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("line {}: expected 'key = value'", line.number));
                }
                if (key == "seed") {
                    spec.seed = parse_seed(value, fmt::format("line {}", line.number));
                } else {
                    throw Error(ErrorCode::ParseError,
                                fmt::format("line {}: unknown key '{}' in [params]", line.number, key));
                }
            }
        } else if (!allow_other_sections) {
            throw Error(ErrorCode::ParseError, fmt::format("unknown section [{}]", section.name));
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

Adjacency build_adjacency(std::size_t neuron_count, std::span<const Synapse> synapses) {
    Adjacency adj;
    adj.out.resize(neuron_count);
    adj.in.resize(neuron_count);
    for (std::size_t i = 0; i < synapses.size(); ++i) {
        adj.out[synapses[i].pre.index()].push_back(i);
        adj.in[synapses[i].post.index()].push_back(i);
    }
    return adj;
}

std::size_t Network::excitatory_count() const {
    return static_cast<std::size_t>(std::count_if(
        neurons_.begin(), neurons_.end(),
        [](const Neuron& n) { return n.kind == NeuronKind::Excitatory; }));
}

std::optional<std::size_t> Network::find_synapse(NeuronId pre, NeuronId post,
                                                 SynapseKind kind) const {
    for (std::size_t idx : out_synapses(pre)) {
        const Synapse& s = synapses_[idx];
        if (s.post == post && s.kind == kind) return idx;
    }
    return std::nullopt;
}

std::vector<NeuronId> Network::region_members(std::string_view region_name) const {
    std::vector<NeuronId> out;
    for (const auto& n : neurons_) {
        if (regions_[n.region].name == region_name) out.push_back(n.id);
    }
    return out;
}

void Network::set_weight(std::size_t synapse_index, double weight) {
    if (!(weight >= 0.0 && weight <= 1.0)) {
        throw Error(ErrorCode::InvalidWeight, fmt::format("weight {} outside [0,1]", weight));
    }
    synapses_.at(synapse_index).weight = weight;
}

bool Network::adjacency_consistent() const {
    return build_adjacency(neurons_.size(), synapses_) == adjacency_;
}

std::string Network::serialize() const {
    std::string out = "[regions]\n";
    for (const auto& r : regions_) out += fmt::format("{} {}\n", r.name, region_text(r.region));
    out += "\n[neurons]\n";
    std::size_t i = 0;
    while (i < neurons_.size()) {
        std::size_t j = i;
        while (j < neurons_.size() && neurons_[j].region == neurons_[i].region &&
               neurons_[j].kind == neurons_[i].kind) {
            ++j;
        }
        out += fmt::format("{} {} {}\n", regions_[neurons_[i].region].name, j - i,
                           to_string(neurons_[i].kind));
        i = j;
    }
    out += "\n[synapses]\n";
    for (const auto& s : synapses_) {
        out += fmt::format("{} {} {} {}\n", s.pre.value, s.post.value, s.weight, to_string(s.kind));
    }
    out += fmt::format("\n[params]\nseed = {}\n", seed_);
    return out;
}

Network build_network(const NetworkSpec& spec) {
    Network net;
    net.seed_ = spec.seed;

    std::map<std::string, std::size_t> region_index;
    int hippocampus = 0;
    int amygdala = 0;
    std::map<ModulatorKind, int> midbrain;
    for (const auto& decl : spec.regions) {
        if (!region_index.emplace(decl.name, net.regions_.size()).second) {
            throw Error(ErrorCode::DuplicateRegion, fmt::format("region name '{}' repeated", decl.name));
        }
        net.regions_.push_back(decl);
        switch (decl.region.kind) {
            case RegionKind::Hippocampus: ++hippocampus; break;
            case RegionKind::Amygdala: ++amygdala; break;
            case RegionKind::MidbrainNucleus: ++midbrain[decl.region.modulator]; break;
            default: break;
        }
    }
    if (hippocampus == 0) throw Error(ErrorCode::MissingRegion, "no hippocampus region");
    if (amygdala == 0) throw Error(ErrorCode::MissingRegion, "no amygdala region");
    if (hippocampus > 1 || amygdala > 1) {
        throw Error(ErrorCode::DuplicateRegion, "hippocampus and amygdala must be unique");
    }
    for (ModulatorKind m : kAllModulators) {
        int c = midbrain[m];
        if (c == 0) {
            throw Error(ErrorCode::MissingRegion,
                        fmt::format("no midbrain nucleus for {}", to_string(m)));
        }
        if (c > 1) {
            throw Error(ErrorCode::DuplicateRegion,
                        fmt::format("more than one midbrain nucleus for {}", to_string(m)));
        }
    }

    for (const auto& block : spec.neurons) {
        auto it = region_index.find(block.region);
        if (it == region_index.end()) {
            throw Error(ErrorCode::MissingRegion,
                        fmt::format("neurons reference undeclared region '{}'", block.region));
        }
        for (std::uint32_t k = 0; k < block.count; ++k) {
            Neuron n;
            n.id = NeuronId{static_cast<std::uint32_t>(net.neurons_.size())};
            n.kind = block.kind;
            n.region = it->second;
            net.neurons_.push_back(std::move(n));
        }
    }
    const std::size_t n = net.neurons_.size();

    std::vector<Synapse> synapses = spec.synapses;

    // Explicit synapses take precedence over randomly drawn ones.
    std::set<std::tuple<std::uint32_t, std::uint32_t, SynapseKind>> drawn;
    for (const auto& s : spec.synapses) drawn.emplace(s.pre.value, s.post.value, s.kind);

    std::mt19937_64 rng(spec.seed);
    for (const auto& wiring : spec.random_wiring) {
        auto from = region_index.find(wiring.from_region);
        auto to = region_index.find(wiring.to_region);
        if (from == region_index.end() || to == region_index.end()) {
            throw Error(ErrorCode::MissingRegion, "random wiring references an undeclared region");
        }
        if (!(wiring.probability >= 0.0 && wiring.probability <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "random wiring probability outside [0,1]");
        }
        for (const auto& pre : net.neurons_) {
            if (pre.region != from->second) continue;
            if (wiring.kind == SynapseKind::ApicalInhibitory && pre.kind != NeuronKind::Inhibitory) continue;
            for (const auto& post : net.neurons_) {
                if (post.region != to->second || post.id == pre.id) continue;
                if (wiring.kind == SynapseKind::ApicalInhibitory &&
                    post.kind != NeuronKind::Excitatory) {
                    continue;
                }
                double u = unit_draw(rng);
                double w = wiring.weight_lo + (wiring.weight_hi - wiring.weight_lo) * unit_draw(rng);
                if (u < wiring.probability && drawn.emplace(pre.id.value, post.id.value, wiring.kind).second) {
                    synapses.push_back(Synapse{pre.id, post.id, w, wiring.kind});
                }
            }
        }
    }

    std::set<std::tuple<std::uint32_t, std::uint32_t, SynapseKind>> seen;
    for (const auto& s : synapses) {
        if (s.pre.index() >= n || s.post.index() >= n) {
            throw Error(ErrorCode::DanglingEndpoint,
                        fmt::format("synapse {} -> {} with {} neurons", s.pre.value, s.post.value, n));
        }
        if (!(s.weight >= 0.0 && s.weight <= 1.0)) {
            throw Error(ErrorCode::InvalidWeight,
                        fmt::format("synapse {} -> {} weight {}", s.pre.value, s.post.value, s.weight));
        }
        if (s.pre == s.post) {
            throw Error(ErrorCode::SelfLoop, fmt::format("synapse on neuron {}", s.pre.value));
        }
        if (!seen.emplace(s.pre.value, s.post.value, s.kind).second) {
            throw Error(ErrorCode::DuplicateSynapse,
                        fmt::format("{} -> {} ({})", s.pre.value, s.post.value, to_string(s.kind)));
        }
        if (s.kind == SynapseKind::ApicalInhibitory) {
            if (net.neurons_[s.pre.index()].kind != NeuronKind::Inhibitory ||
                net.neurons_[s.post.index()].kind != NeuronKind::Excitatory) {
                throw Error(ErrorCode::InvalidApicalSource,
                            fmt::format("apical synapse {} -> {} must run inhibitory -> excitatory",
                                        s.pre.value, s.post.value));
            }
            net.neurons_[s.post.index()].apical_sources.insert(s.pre);
        }
    }

    net.synapses_ = std::move(synapses);
    net.adjacency_ = build_adjacency(n, net.synapses_);
    return net;
}

// ---------------------------------------------------------------------------
// DirectedGraph
// ---------------------------------------------------------------------------

std::size_t DirectedGraph::edge_count() const {
    std::size_t c = 0;
    for (const auto& s : succ_) c += s.size();
    return c;
}

void DirectedGraph::add_edge(NeuronId from, NeuronId to) {
    auto& list = succ_.at(from.index());
    auto it = std::lower_bound(list.begin(), list.end(), to);
    if (it == list.end() || *it != to) list.insert(it, to);
}

bool DirectedGraph::has_edge(NeuronId from, NeuronId to) const {
    const auto& list = succ_.at(from.index());
    return std::binary_search(list.begin(), list.end(), to);
}

std::vector<std::pair<NeuronId, NeuronId>> DirectedGraph::edges() const {
    std::vector<std::pair<NeuronId, NeuronId>> out;
    for (std::size_t i = 0; i < succ_.size(); ++i) {
        for (NeuronId t : succ_[i]) out.emplace_back(NeuronId{static_cast<std::uint32_t>(i)}, t);
    }
    return out;
}

bool DirectedGraph::is_subgraph_of(const DirectedGraph& other) const {
    if (other.node_count() != node_count()) return false;
    for (std::size_t i = 0; i < succ_.size(); ++i) {
        if (!std::includes(other.succ_[i].begin(), other.succ_[i].end(), succ_[i].begin(),
                           succ_[i].end())) {
            return false;
        }
    }
    return true;
}

DirectedGraph strong_subgraph(const Network& net, double theta_explain) {
    if (!(theta_explain > 0.0 && theta_explain <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("theta_explain {} outside (0,1]", theta_explain));
    }
    DirectedGraph g(net.size());
    for (const auto& s : net.synapses()) {
        if (s.kind == SynapseKind::Driving && s.weight >= theta_explain &&
            net.is_excitatory(s.pre) && net.is_excitatory(s.post)) {
            g.add_edge(s.pre, s.post);
        }
    }
    return g;
}

}  // namespace burstnet
