#pragma once

#include <array>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "burstnet/types.hpp"

namespace burstnet {

// ---------------------------------------------------------------------------
// Modulator levels
// ---------------------------------------------------------------------------

/// Levels and baselines on a [0,1] scale, indexed by ModulatorKind.
struct ModulatorState {
    std::array<double, 4> level{0.3, 0.2, 0.1, 0.2};
    std::array<double, 4> baseline{0.3, 0.2, 0.1, 0.2};

    double operator[](ModulatorKind k) const { return level[static_cast<std::size_t>(k)]; }
    double& operator[](ModulatorKind k) { return level[static_cast<std::size_t>(k)]; }
    double base(ModulatorKind k) const { return baseline[static_cast<std::size_t>(k)]; }

    static ModulatorState at_baseline(const std::array<double, 4>& baseline);
    bool within_bounds() const;
};

struct ModulatorGains {
    double k_da = 0.5;
    double k_ht = 0.4;
    double k_na = 0.6;
    double k_ach = 0.5;
    double h_ht = 3.0;  // 5-HT excess half-life, windows
};

/// One window's modulator update.
///   DA  = baseline + k_da * delta
///   5-HT = baseline + decayed excess + k_ht * |delta|, excess halves every h_ht windows
///   NA  = baseline + k_na * (|delta| + |valence|)
///   ACh = baseline + k_ach * (novelty/excitatory + max(0,-delta) + max(0,-valence))
/// All clamped to [0,1].
ModulatorState update_modulators(double delta, std::size_t novelty_count,
                                 std::size_t excitatory_count, double amygdala_valence,
                                 const ModulatorState& mods, const ModulatorGains& gains = {});

// ---------------------------------------------------------------------------
// Prediction error
// ---------------------------------------------------------------------------

class ValueTable {
public:
    explicit ValueTable(double learning_rate = 0.2);

    double value(StateKey key) const;
    double learning_rate() const { return learning_rate_; }
    const std::map<StateKey, double>& values() const { return v_; }
    void set(StateKey key, double v);

    /// delta = reward - v[key]; v[key] += learning_rate * delta, clamped to [-1,1].
    double compute_pe(double reward, StateKey key);

private:
    std::map<StateKey, double> v_;
    double learning_rate_;
};

// ---------------------------------------------------------------------------
// Amygdala
// ---------------------------------------------------------------------------

class AmygdalaStore {
public:
    /// Overwrites any previous association. Throws ZeroValence for 0 and
    /// InvalidArgument outside [-1,1].
    void condition(StateKey key, double us_valence);
    double valence(StateKey key) const;
    bool contains(StateKey key) const { return associations_.contains(key); }
    const std::map<StateKey, double>& associations() const { return associations_; }

private:
    std::map<StateKey, double> associations_;
};

/// Stored valence with the largest magnitude among the keys; 0 when none are
/// conditioned. Equal magnitudes resolve to the first key in the list.
double amygdala_react(const std::vector<StateKey>& active_keys, const AmygdalaStore& store);

/// NA-driven attention bias toward an ensemble whose percept is conditioned.
double attention_bias(const NeuronSet& members, const ModulatorState& mods,
                      const AmygdalaStore& store);

// ---------------------------------------------------------------------------
// Reinforcement scenarios
// ---------------------------------------------------------------------------

enum class Scenario : std::uint8_t {
    ReinforceReward,
    AvoidPunishment,
    UnlearnRewardPath,
    ReinforceNonPunishment,
};

std::string_view to_string(Scenario s) noexcept;

enum class Valence : std::uint8_t { Positive, Negative };

/// Memory gates read NA (learn) and ACh (unlearn); action gates read DA
/// (reinforce) and 5-HT (avert).
struct GateSet {
    double memory_learn = 0.0;
    double memory_unlearn = 0.0;
    double action_reinforce = 0.0;
    double action_avert = 0.0;

    friend bool operator==(const GateSet&, const GateSet&) = default;
};

struct ScenarioGates {
    Scenario scenario;
    GateSet gates;
};

/// Maps (sign of delta, valence) to its learning rule. Gate magnitudes are the
/// current modulator levels. Throws Error(ZeroDelta) when delta == 0.
ScenarioGates classify_scenario(double delta, Valence valence, const ModulatorState& mods);

}  // namespace burstnet
