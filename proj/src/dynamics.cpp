#include "burstnet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <fmt/format.h>

#include "burstnet/error.hpp"

namespace burstnet {

std::string_view to_string(FiringMode mode) noexcept {
    switch (mode) {
        case FiringMode::Silent: return "silent";
        case FiringMode::Tonic: return "tonic";
        case FiringMode::Bursting: return "bursting";
    }
    return "?";
}

Stimulus Stimulus::uniform(const std::vector<NeuronId>& neurons, double drive) {
    Stimulus s;
    for (NeuronId n : neurons) s.set(n, drive);
    return s;
}

void Stimulus::set(NeuronId neuron, double drive) { drive_[neuron] = drive; }

double Stimulus::drive(NeuronId neuron) const {
    auto it = drive_.find(neuron);
    return it == drive_.end() ? 0.0 : it->second;
}

void Stimulus::validate(const Network& net) const {
    for (const auto& [id, d] : drive_) {
        if (id.index() >= net.size() || !net.is_sensory(id)) {
            throw Error(ErrorCode::InvalidStimulus,
                        fmt::format("neuron {} is not a sensory neuron", id.value));
        }
        if (!(d >= 0.0 && d <= 1.0)) {
            throw Error(ErrorCode::InvalidStimulus,
                        fmt::format("drive {} on neuron {} outside [0,1]", d, id.value));
        }
    }
}

NeuronSet WindowState::with_mode(FiringMode mode) const {
    NeuronSet out;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] == mode) out.insert(NeuronId{static_cast<std::uint32_t>(i)});
    }
    return out;
}

std::size_t WindowState::count(FiringMode mode) const {
    return static_cast<std::size_t>(std::count(modes.begin(), modes.end(), mode));
}

void ClockParams::validate() const {
    if (window_ms < 50 || window_ms > 250) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("window_ms {} outside 50..250", window_ms));
    }
    if (!(theta_hz >= 4.0 && theta_hz <= 7.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("theta_hz {} outside 4..7", theta_hz));
    }
    if (!(gamma_hz > 0.0) || gamma_period_ms() < 1) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("gamma_hz {} invalid", gamma_hz));
    }
    if (burst_spike_count < 1 || burst_isi_ms < 1) {
        throw Error(ErrorCode::InvalidArgument, "burst_spike_count and burst_isi_ms must be >= 1");
    }
}

int ClockParams::gamma_period_ms() const {
    return static_cast<int>(std::lround(1000.0 / gamma_hz));
}

namespace {

double driving_input(const Network& net, NeuronId post, const std::vector<char>& active,
                     const ForcedBursts& forced) {
    double sum = 0.0;
    for (std::size_t idx : net.in_synapses(post)) {
        const Synapse& s = net.synapse(idx);
        if (s.kind != SynapseKind::Driving || !active[s.pre.index()]) continue;
        sum += forced.neurons.contains(s.pre) ? s.weight * forced.gain : s.weight;
    }
    return sum;
}

}  // namespace

NeuronSet forward_pass(const Network& net, const Stimulus& stim, double threshold,
                       const ForcedBursts& forced) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("threshold {} outside (0,1]", threshold));
    }
    stim.validate(net);

    std::vector<char> active(net.size(), 0);
    std::deque<NeuronId> frontier;
    auto activate = [&](NeuronId id) {
        if (!active[id.index()]) {
            active[id.index()] = 1;
            frontier.push_back(id);
        }
    };
    for (NeuronId id : forced.neurons) {
        if (id.index() >= net.size()) {
            throw Error(ErrorCode::InvalidArgument, fmt::format("forced neuron {} unknown", id.value));
        }
        activate(id);
    }
    for (const auto& [id, d] : stim.drives()) {
        if (d >= threshold) activate(id);
    }

    // Activation is monotone, so propagating from each newly active neuron reaches
    // the same fixpoint as repeated full sweeps. Inputs are re-summed in synapse
    // order so the comparison is independent of activation order.
    while (!frontier.empty()) {
        NeuronId pre = frontier.front();
        frontier.pop_front();
        for (std::size_t idx : net.out_synapses(pre)) {
            const Synapse& s = net.synapse(idx);
            if (s.kind != SynapseKind::Driving || active[s.post.index()] || net.is_sensory(s.post)) {
                continue;
            }
            if (driving_input(net, s.post, active, forced) >= threshold) activate(s.post);
        }
    }

    NeuronSet out;
    for (std::size_t i = 0; i < active.size(); ++i) {
        if (active[i]) out.insert(NeuronId{static_cast<std::uint32_t>(i)});
    }
    return out;
}

ModeMap assign_modes(const Network& net, const NeuronSet& active, const DirectedGraph& strong,
                     const NeuronSet& forced) {
    ModeMap modes(net.size(), FiringMode::Silent);
    for (NeuronId id : forced) {
        if (!active.contains(id)) {
            throw Error(ErrorCode::InvalidArgument,
                        fmt::format("forced neuron {} is not active", id.value));
        }
    }
    for (NeuronId id : active) {
        if (!net.is_excitatory(id)) {
            modes[id.index()] = FiringMode::Tonic;
            continue;
        }
        if (forced.contains(id)) {
            modes[id.index()] = FiringMode::Bursting;
            continue;
        }
        const auto& succ = strong.successors(id);
        bool explained = std::any_of(succ.begin(), succ.end(),
                                     [&](NeuronId s) { return active.contains(s); });
        modes[id.index()] = explained ? FiringMode::Tonic : FiringMode::Bursting;
    }
    return modes;
}

std::vector<SpikeEvent> emit_spikes(const Network& net, const ModeMap& modes,
                                    const std::map<NeuronId, int>& phase_of,
                                    const ClockParams& clock, std::int64_t window_index) {
    const std::int64_t start = clock.window_start(window_index);
    const std::int64_t end = start + clock.window_ms;
    const int period = clock.gamma_period_ms();

    std::vector<SpikeEvent> spikes;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] == FiringMode::Silent) continue;
        NeuronId id{static_cast<std::uint32_t>(i)};
        auto slot_it = phase_of.find(id);
        if (modes[i] == FiringMode::Bursting && slot_it == phase_of.end()) {
            throw Error(ErrorCode::PhaseMissing, fmt::format("bursting neuron {} has no phase slot", i));
        }
        std::int64_t offset = slot_it == phase_of.end() ? 0 : slot_it->second;
        if (!net.is_excitatory(id)) offset += clock.burst_isi_ms;
        const int count = modes[i] == FiringMode::Bursting ? clock.burst_spike_count : 1;

        for (std::int64_t cycle = start; cycle < end; cycle += period) {
            for (int k = 0; k < count; ++k) {
                std::int64_t t = cycle + offset + static_cast<std::int64_t>(k) * clock.burst_isi_ms;
                if (t >= start && t < end) spikes.push_back(SpikeEvent{id, t});
            }
        }
    }
    std::sort(spikes.begin(), spikes.end(), [](const SpikeEvent& a, const SpikeEvent& b) {
        return a.t != b.t ? a.t < b.t : a.neuron < b.neuron;
    });
    return spikes;
}

}  // namespace burstnet
