#include "burstnet/binding.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "burstnet/error.hpp"
#include "burstnet/union_find.hpp"

namespace burstnet {

NeuronSet tonic_support(const Network& net, const ModeMap& modes, NeuronId neuron) {
    NeuronSet support;
    std::vector<char> seen(net.size(), 0);
    std::vector<NeuronId> stack{neuron};
    seen[neuron.index()] = 1;
    while (!stack.empty()) {
        NeuronId cur = stack.back();
        stack.pop_back();
        for (std::size_t idx : net.in_synapses(cur)) {
            const Synapse& s = net.synapse(idx);
            if (s.kind != SynapseKind::Driving) continue;
            if (modes[s.pre.index()] == FiringMode::Silent || seen[s.pre.index()]) continue;
            seen[s.pre.index()] = 1;
            if (modes[s.pre.index()] == FiringMode::Tonic) support.insert(s.pre);
            stack.push_back(s.pre);
        }
    }
    return support;
}

std::vector<Ensemble> form_ensembles(const ModeMap& modes, const Network& net, double theta_bind,
                                     const std::vector<NeuronSet>& co_driven) {
    if (!(theta_bind > 0.0 && theta_bind <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("theta_bind {} outside (0,1]", theta_bind));
    }
    if (modes.size() != net.size()) {
        throw Error(ErrorCode::InvalidArgument, "mode map does not match network size");
    }

    std::vector<NeuronId> bursting;
    std::vector<int> slot_of(net.size(), -1);  // neuron -> index in `bursting`
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] == FiringMode::Bursting) {
            slot_of[i] = static_cast<int>(bursting.size());
            bursting.emplace_back(static_cast<std::uint32_t>(i));
        }
    }
    if (bursting.empty()) return {};

    std::vector<NeuronSet> support(bursting.size());
    // owners[n]: bursting indices whose member-or-support set contains n
    std::vector<std::vector<std::size_t>> owners(net.size());
    for (std::size_t b = 0; b < bursting.size(); ++b) {
        support[b] = tonic_support(net, modes, bursting[b]);
        owners[bursting[b].index()].push_back(b);
        for (NeuronId t : support[b]) owners[t.index()].push_back(b);
    }

    UnionFind uf(bursting.size());
    auto unite_all = [&](const std::vector<std::size_t>& group) {
        for (std::size_t k = 1; k < group.size(); ++k) uf.unite(group[0], group[k]);
    };

    // Shared tonic support: every owner of a tonic neuron that is not itself
    // bursting holds it in its support set.
    for (std::size_t n = 0; n < net.size(); ++n) {
        if (modes[n] == FiringMode::Tonic) unite_all(owners[n]);
    }
    for (const auto& s : net.synapses()) {
        if (s.kind != SynapseKind::Relay || s.weight < theta_bind) continue;
        const auto& a = owners[s.pre.index()];
        const auto& b = owners[s.post.index()];
        if (a.empty() || b.empty()) continue;
        unite_all(a);
        unite_all(b);
        uf.unite(a[0], b[0]);
    }
    for (const auto& group : co_driven) {
        std::vector<std::size_t> idx;
        for (NeuronId n : group) {
            if (n.index() < net.size() && slot_of[n.index()] >= 0) {
                idx.push_back(static_cast<std::size_t>(slot_of[n.index()]));
            }
        }
        unite_all(idx);
    }

    std::map<std::size_t, Ensemble> by_root;
    for (std::size_t b = 0; b < bursting.size(); ++b) {
        Ensemble& e = by_root[uf.find(b)];
        e.members.insert(bursting[b]);
        e.support.insert(support[b].begin(), support[b].end());
    }

    std::size_t tonic_total = static_cast<std::size_t>(
        std::count(modes.begin(), modes.end(), FiringMode::Tonic));
    std::vector<Ensemble> out;
    out.reserve(by_root.size());
    for (auto& [root, e] : by_root) {
        e.id = e.members.begin()->value;
        double score_raw = tonic_total == 0 ? 0.0
                                            : static_cast<double>(e.support.size()) /
                                                  static_cast<double>(tonic_total);
        e.rate_hz = std::clamp(kMinEnsembleRateHz + 20.0 * score_raw, kMinEnsembleRateHz,
                               kMaxEnsembleRateHz);
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const Ensemble& a, const Ensemble& b) { return a.id < b.id; });
    for (std::size_t k = 0; k < out.size(); ++k) out[k].phase_slot = static_cast<int>(k);
    return out;
}

std::map<NeuronId, int> phase_map(const std::vector<Ensemble>& ensembles) {
    std::map<NeuronId, int> out;
    for (const auto& e : ensembles) {
        for (NeuronId n : e.members) out[n] = e.phase_slot;
    }
    return out;
}

AttentionState select_dominant(const std::vector<Ensemble>& ensembles, const ModulatorState& mods,
                               const AttentionWeights& weights, const AmygdalaStore& amygdala) {
    AttentionState state;
    double best = 0.0;
    for (const auto& e : ensembles) {
        double score = weights.alpha * static_cast<double>(e.members.size()) +
                       weights.beta * e.rate_hz +
                       weights.gamma * attention_bias(e.members, mods, amygdala);
        state.scores[e.id] = score;
        if (!state.dominant || score > best || (score == best && e.id < *state.dominant)) {
            state.dominant = e.id;
            best = score;
        }
    }
    return state;
}

const Ensemble* find_ensemble(const std::vector<Ensemble>& ensembles, std::uint32_t id) {
    for (const auto& e : ensembles) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

}  // namespace burstnet
