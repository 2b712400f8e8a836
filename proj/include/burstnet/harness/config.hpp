#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "burstnet/binding.hpp"
#include "burstnet/dynamics.hpp"
#include "burstnet/episodic.hpp"
#include "burstnet/netcore.hpp"
#include "burstnet/neuromod.hpp"
#include "burstnet/plasticity.hpp"

namespace burstnet::harness {

enum class TaskKind : std::uint8_t { Habituation, TraceConditioning, Bandit, SequenceRecall };

std::string_view to_string(TaskKind kind) noexcept;

struct TaskSpec {
    TaskKind kind = TaskKind::Habituation;

    // habituation
    std::vector<NeuronId> pattern;
    double drive = 1.0;

    // trace conditioning: trial = CS window, `lag` windows later the US, then `iti` blanks
    std::vector<NeuronId> cs;
    std::vector<NeuronId> us;
    int lag = 1;
    int iti = 3;
    int pairings = 20;
    int omissions = 5;
    double reward = 1.0;

    // bandit: choice window (cue + forced motor arm) followed by an outcome window
    std::vector<NeuronId> cue;
    std::vector<NeuronId> arms;
    std::vector<double> arm_rewards;
    std::vector<double> arm_probs;
    double epsilon = 0.1;
    double action_learning_rate = 0.5;

    // sequence recall: patterns shown in order, one blank, then the first pattern as cue
    std::vector<std::vector<NeuronId>> patterns;

    /// Throws Error(ConfigInvalid) when kind-specific parameters are missing or out of range.
    void validate() const;
};

struct Thresholds {
    double forward = kDefaultForwardThreshold;
    double theta_explain = kDefaultThetaExplain;
    double theta_bind = kDefaultThetaBind;
    double theta_recall = kDefaultThetaRecall;
    double ach_suppress = kDefaultAchSuppress;
    GateThresholds gates;
};

struct RunConfig {
    std::filesystem::path network_path;        // resolved against the config's directory
    std::optional<NetworkSpec> inline_network;  // network sections embedded in the config

    ClockParams clock;
    Thresholds thresholds;
    ModulatorGains gains;
    std::array<double, 4> baselines{0.3, 0.2, 0.1, 0.2};
    double value_learning_rate = 0.2;
    AttentionWeights attention;
    int capacity_per_cycle = kDefaultCapacityPerCycle;
    StdpParams stdp;
    double rem_na_clamp = 0.9;
    double rem_ach_clamp = 0.1;
    std::optional<double> rem_burst_gain;  // defaults to clock.burst_spike_count
    int rem_every_n_windows = 0;           // 0 = only the explicit `rem` command
    int rem_cycles = 1;
    bool awake_plasticity = true;

    TaskSpec task;
    std::uint64_t seed = 0;
    std::int64_t windows = 0;

    /// Throws Error(ConfigInvalid) on syntax errors, unknown keys or illegal values.
    static RunConfig parse(std::string_view text, const std::filesystem::path& base_dir);
    static RunConfig load(const std::filesystem::path& path);

    void validate() const;

    /// Canonical text with every key; the network is referenced as `network_file`.
    std::string serialize(const std::string& network_file) const;

    NetworkSpec network_spec() const;
    ReplayParams replay_params() const;
};

}  // namespace burstnet::harness
