#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "burstnet/dynamics.hpp"
#include "burstnet/episodic.hpp"
#include "burstnet/netcore.hpp"
#include "burstnet/neuromod.hpp"

namespace burstnet {

struct StdpParams {
    double a_plus = 0.05;
    double a_minus = 0.055;
    double tau_plus_ms = 20.0;
    double tau_minus_ms = 20.0;
    int ttl_windows = 20;

    void validate() const;
};

/// Pair kernel for dt = t_post - t_pre:
///   dt > 0:  a_plus  * exp(-dt / tau_plus)
///   dt < 0: -a_minus * exp( dt / tau_minus)
///   dt = 0:  0
double stdp_delta(double dt_ms, const StdpParams& p);

struct GateThresholds {
    double ach_ltd = 0.7;         // ACh at or above forces LTD
    double da_flip = 0.6;         // DA at or above turns LTD into LTP
    double na_consolidate = 0.5;  // NA at or above commits pending changes
};

/// Neuromodulatory gating of one raw weight change. Precedence: forced LTD under
/// high ACh, then DA flip of LTD, then the raw sign; the result is scaled by
/// max(0, 1 + memory_learn - memory_unlearn).
double apply_gates(double raw_dw, const GateSet& gates, const ModulatorState& mods,
                   const GateThresholds& thresholds = {});

/// Short-term pending weight changes per Driving synapse (pre, post).
class EligibilityTrace {
public:
    struct Entry {
        double dw = 0.0;
        int age_windows = 0;  // since the entry was opened
    };
    using Key = std::pair<NeuronId, NeuronId>;

    void add(NeuronId pre, NeuronId post, double dw);
    const std::map<Key, Entry>& pending() const { return pending_; }
    bool empty() const { return pending_.empty(); }
    void clear() { pending_.clear(); }
    /// Ages every entry by one window and drops those that reach ttl.
    void age(int ttl_windows);

private:
    std::map<Key, Entry> pending_;
};

/// Adds gated nearest-neighbour STDP for every Driving synapse whose pre and post
/// both spiked: each post spike pairs with the latest pre spike at or before it,
/// each pre spike with the latest post spike at or before it.
void accumulate(const std::vector<SpikeEvent>& spikes, const Network& net, const StdpParams& p,
                const GateSet& gates, const ModulatorState& mods, EligibilityTrace& trace,
                const GateThresholds& thresholds = {});

/// Commits pending changes (clamped to [0,1]) when na_level reaches the threshold and
/// clears the trace; otherwise ages it. Returns the number of weights changed.
std::size_t consolidate(EligibilityTrace& trace, double na_level, Network& net,
                        int ttl_windows = 20, const GateThresholds& thresholds = {});

struct ReplayParams {
    ClockParams clock;
    double forward_threshold = kDefaultForwardThreshold;
    double theta_explain = kDefaultThetaExplain;
    double theta_bind = 0.5;
    StdpParams stdp;
    GateThresholds thresholds;
    ModulatorState mods;        // baselines; NA and ACh are overridden by the clamps
    double na_clamp = 0.9;
    double ach_clamp = 0.1;
    double burst_gain = 3.0;    // drive multiplier of a replayed burst
};

struct ConsolidationReport {
    std::size_t synapses_changed = 0;
    std::size_t bursting_before = 0;
    std::size_t bursting_after = 0;
    StateKey pattern_key;
    std::vector<std::size_t> bursting_per_cycle;  // probe count after each cycle
};

/// Bursting neurons produced by a stimulus with no forced bursts.
NeuronSet probe_bursting(const Network& net, const Stimulus& probe, double forward_threshold,
                         double theta_explain);

/// Offline consolidation: every cycle replays every stored trace item by item as
/// forced bursts under clamped NA/ACh, accumulates STDP and consolidates.
/// Throws Error(EmptyStore) or Error(InvalidArgument) for cycles < 1.
ConsolidationReport rem_replay(const EpisodicStore& store, Network& net, const Stimulus& probe,
                               int cycles, const ReplayParams& params = {});

}  // namespace burstnet
