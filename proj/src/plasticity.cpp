#include "burstnet/plasticity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "burstnet/binding.hpp"
#include "burstnet/error.hpp"

namespace burstnet {

void StdpParams::validate() const {
    if (!(a_plus > 0.0 && a_minus > 0.0 && tau_plus_ms > 0.0 && tau_minus_ms > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "STDP amplitudes and time constants must be positive");
    }
    if (ttl_windows < 1) throw Error(ErrorCode::InvalidArgument, "ttl_windows must be >= 1");
}

double stdp_delta(double dt_ms, const StdpParams& p) {
    if (dt_ms > 0.0) return p.a_plus * std::exp(-dt_ms / p.tau_plus_ms);
    if (dt_ms < 0.0) return -p.a_minus * std::exp(dt_ms / p.tau_minus_ms);
    return 0.0;
}

double apply_gates(double raw_dw, const GateSet& gates, const ModulatorState& mods,
                   const GateThresholds& thresholds) {
    double dw = raw_dw;
    if (mods[ModulatorKind::ACh] >= thresholds.ach_ltd) {
        dw = -std::abs(raw_dw);
    } else if (raw_dw < 0.0 && mods[ModulatorKind::DA] >= thresholds.da_flip) {
        dw = std::abs(raw_dw);
    }
    const double scale = std::max(0.0, 1.0 + gates.memory_learn - gates.memory_unlearn);
    return dw * scale;
}

void EligibilityTrace::add(NeuronId pre, NeuronId post, double dw) {
    pending_[Key{pre, post}].dw += dw;
}

void EligibilityTrace::age(int ttl_windows) {
    for (auto it = pending_.begin(); it != pending_.end();) {
        if (++it->second.age_windows >= ttl_windows) {
            it = pending_.erase(it);
        } else {
            ++it;
        }
    }
}

void accumulate(const std::vector<SpikeEvent>& spikes, const Network& net, const StdpParams& p,
                const GateSet& gates, const ModulatorState& mods, EligibilityTrace& trace,
                const GateThresholds& thresholds) {
    if (spikes.empty()) return;
    std::vector<std::vector<std::int64_t>> times(net.size());
    for (const auto& s : spikes) times.at(s.neuron.index()).push_back(s.t);
    for (auto& t : times) std::sort(t.begin(), t.end());

    // Latest element of `sorted` at or before t, if any.
    auto latest_at_or_before = [](const std::vector<std::int64_t>& sorted,
                                  std::int64_t t) -> const std::int64_t* {
        auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        return it == sorted.begin() ? nullptr : &*std::prev(it);
    };

    for (const auto& syn : net.synapses()) {
        if (syn.kind != SynapseKind::Driving) continue;
        const auto& pre = times[syn.pre.index()];
        const auto& post = times[syn.post.index()];
        if (pre.empty() || post.empty()) continue;
        double sum = 0.0;
        for (std::int64_t tp : post) {
            if (const auto* tq = latest_at_or_before(pre, tp)) {
                sum += apply_gates(stdp_delta(static_cast<double>(tp - *tq), p), gates, mods, thresholds);
            }
        }
        for (std::int64_t tq : pre) {
            if (const auto* tp = latest_at_or_before(post, tq)) {
                sum += apply_gates(stdp_delta(static_cast<double>(*tp - tq), p), gates, mods, thresholds);
            }
        }
        trace.add(syn.pre, syn.post, sum);
    }
}

std::size_t consolidate(EligibilityTrace& trace, double na_level, Network& net, int ttl_windows,
                        const GateThresholds& thresholds) {
    if (na_level < thresholds.na_consolidate) {
        trace.age(ttl_windows);
        return 0;
    }
    std::size_t changed = 0;
    for (const auto& [key, entry] : trace.pending()) {
        auto idx = net.find_synapse(key.first, key.second, SynapseKind::Driving);
        if (!idx) continue;
        const double before = net.synapse(*idx).weight;
        const double after = std::clamp(before + entry.dw, 0.0, 1.0);
        if (after != before) {
            net.set_weight(*idx, after);
            ++changed;
        }
    }
    trace.clear();
    return changed;
}

NeuronSet probe_bursting(const Network& net, const Stimulus& probe, double forward_threshold,
                         double theta_explain) {
    NeuronSet active = forward_pass(net, probe, forward_threshold);
    ModeMap modes = assign_modes(net, active, strong_subgraph(net, theta_explain));
    NeuronSet out;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] == FiringMode::Bursting) out.insert(NeuronId{static_cast<std::uint32_t>(i)});
    }
    return out;
}

ConsolidationReport rem_replay(const EpisodicStore& store, Network& net, const Stimulus& probe,
                               int cycles, const ReplayParams& params) {
    if (cycles < 1) throw Error(ErrorCode::InvalidArgument, fmt::format("cycles {} < 1", cycles));
    if (store.empty()) throw Error(ErrorCode::EmptyStore, "nothing to replay");
    params.clock.validate();
    params.stdp.validate();

    ConsolidationReport report;
    const NeuronSet before = probe_bursting(net, probe, params.forward_threshold, params.theta_explain);
    report.bursting_before = before.size();
    report.pattern_key = state_key(before);
    const std::vector<Synapse> initial = net.synapses();

    ModulatorState mods = params.mods;
    mods[ModulatorKind::NA] = params.na_clamp;
    mods[ModulatorKind::ACh] = params.ach_clamp;
    GateSet gates;
    gates.memory_learn = params.na_clamp;

    std::int64_t window = 0;
    for (int c = 0; c < cycles; ++c) {
        EligibilityTrace trace;
        const DirectedGraph strong = strong_subgraph(net, params.theta_explain);
        for (const auto& t : store.traces()) {
            for (const auto& item : t.items) {
                NeuronSet forced;
                for (NeuronId n : item.neurons) {
                    if (n.index() < net.size() && net.is_excitatory(n)) forced.insert(n);
                }
                if (forced.empty()) continue;
                NeuronSet active =
                    forward_pass(net, Stimulus{}, params.forward_threshold, {forced, params.burst_gain});
                ModeMap modes = assign_modes(net, active, strong, forced);
                auto ensembles = form_ensembles(modes, net, params.theta_bind, {forced});
                auto spikes = emit_spikes(net, modes, phase_map(ensembles), params.clock, window++);
                accumulate(spikes, net, params.stdp, gates, mods, trace, params.thresholds);
            }
        }
        consolidate(trace, mods[ModulatorKind::NA], net, params.stdp.ttl_windows, params.thresholds);
        report.bursting_per_cycle.push_back(
            probe_bursting(net, probe, params.forward_threshold, params.theta_explain).size());
    }

    report.bursting_after = report.bursting_per_cycle.back();
    for (std::size_t i = 0; i < initial.size(); ++i) {
        if (initial[i].weight != net.synapses()[i].weight) ++report.synapses_changed;
    }
    return report;
}

}  // namespace burstnet
