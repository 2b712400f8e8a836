#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "burstnet/dynamics.hpp"
#include "burstnet/netcore.hpp"
#include "burstnet/neuromod.hpp"

namespace burstnet {

/// A synchrony group of bursting neurons firing in one gamma phase slot.
struct Ensemble {
    std::uint32_t id = 0;  // lowest member id
    NeuronSet members;     // Bursting this window
    NeuronSet support;     // Tonic ancestors along active Driving edges
    double rate_hz = 40.0;
    int phase_slot = 0;
};

inline constexpr double kDefaultThetaBind = 0.5;
inline constexpr double kMinEnsembleRateHz = 40.0;
inline constexpr double kMaxEnsembleRateHz = 60.0;

/// Tonic ancestors of `neuron` reachable backwards over Driving synapses whose
/// endpoints are both active.
NeuronSet tonic_support(const Network& net, const ModeMap& modes, NeuronId neuron);

/// Connected components of the binding graph over Bursting neurons. Two bursting
/// neurons are bound when their tonic supports intersect, when a Relay synapse of
/// weight >= theta_bind joins their member-or-support sets, or when both belong to
/// the same `co_driven` group (neurons reactivated together by one recall).
std::vector<Ensemble> form_ensembles(const ModeMap& modes, const Network& net,
                                     double theta_bind = kDefaultThetaBind,
                                     const std::vector<NeuronSet>& co_driven = {});

/// Slot of every ensemble member.
std::map<NeuronId, int> phase_map(const std::vector<Ensemble>& ensembles);

struct AttentionWeights {
    double alpha = 1.0;   // size
    double beta = 0.05;   // rate
    double gamma = 1.0;   // neuromodulatory gain
};

struct AttentionState {
    std::optional<std::uint32_t> dominant;
    std::map<std::uint32_t, double> scores;
};

/// score = alpha*|members| + beta*rate_hz + gamma*attention_bias. The highest
/// score wins; ties go to the lowest id.
AttentionState select_dominant(const std::vector<Ensemble>& ensembles, const ModulatorState& mods,
                               const AttentionWeights& weights, const AmygdalaStore& amygdala);

const Ensemble* find_ensemble(const std::vector<Ensemble>& ensembles, std::uint32_t id);

}  // namespace burstnet
