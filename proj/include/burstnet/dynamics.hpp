#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "burstnet/netcore.hpp"
#include "burstnet/types.hpp"

namespace burstnet {

enum class FiringMode : std::uint8_t { Silent, Tonic, Bursting };

std::string_view to_string(FiringMode mode) noexcept;

/// Mode per neuron, indexed by NeuronId.
using ModeMap = std::vector<FiringMode>;

/// External drive in [0,1] per sensory neuron for one window.
class Stimulus {
public:
    Stimulus() = default;

    static Stimulus uniform(const std::vector<NeuronId>& neurons, double drive = 1.0);

    void set(NeuronId neuron, double drive);
    double drive(NeuronId neuron) const;
    const std::map<NeuronId, double>& drives() const { return drive_; }
    bool empty() const { return drive_.empty(); }

    /// Throws Error(InvalidStimulus) for non-sensory keys or drives outside [0,1].
    void validate(const Network& net) const;

private:
    std::map<NeuronId, double> drive_;
};

struct SpikeEvent {
    NeuronId neuron;
    std::int64_t t = 0;  // ms from simulation start

    friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

struct WindowState {
    std::int64_t window_index = 0;
    NeuronSet active;
    ModeMap modes;
    std::vector<SpikeEvent> spikes;  // sorted by t

    NeuronSet with_mode(FiringMode mode) const;
    std::size_t count(FiringMode mode) const;
};

struct ClockParams {
    int window_ms = 100;
    double theta_hz = 5.0;
    double gamma_hz = 40.0;
    int burst_spike_count = 3;
    int burst_isi_ms = 5;

    /// Throws Error(InvalidArgument) outside 50..250 ms windows or 4..7 Hz theta.
    void validate() const;
    int gamma_period_ms() const;
    std::int64_t window_start(std::int64_t window_index) const {
        return window_index * window_ms;
    }
};

inline constexpr double kDefaultForwardThreshold = 0.5;

/// Forced bursting injected from outside the feed-forward pass (episodic recall,
/// volitional action, replay). Each forced neuron is active from the start and
/// its outgoing drive is multiplied by `gain`.
struct ForcedBursts {
    NeuronSet neurons;
    double gain = 1.0;
};

/// Binary activation to fixpoint. Sensory neurons activate when their drive reaches
/// `threshold`; every other neuron when the summed Driving weight from active
/// presynaptic neurons reaches it.
NeuronSet forward_pass(const Network& net, const Stimulus& stim,
                       double threshold = kDefaultForwardThreshold,
                       const ForcedBursts& forced = {});

/// Bursting inhibition: an active excitatory neuron bursts iff no active strong
/// successor explains it. Inhibitory neurons are Tonic when active. Forced neurons
/// burst regardless (they must be active).
ModeMap assign_modes(const Network& net, const NeuronSet& active, const DirectedGraph& strong,
                     const NeuronSet& forced = {});

/// Spike trains for one window. Each gamma cycle a Tonic neuron fires once at its
/// slot offset and a Bursting neuron fires burst_spike_count spikes burst_isi_ms
/// apart from its slot offset. Active interneurons lag by one burst_isi_ms.
/// Slots are ms offsets; neurons absent from `phase_of` use slot 0 unless Bursting,
/// which throws Error(PhaseMissing).
std::vector<SpikeEvent> emit_spikes(const Network& net, const ModeMap& modes,
                                    const std::map<NeuronId, int>& phase_of,
                                    const ClockParams& clock, std::int64_t window_index);

}  // namespace burstnet
