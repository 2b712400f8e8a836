#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "burstnet/dynamics.hpp"
#include "burstnet/harness/config.hpp"
#include "burstnet/neuromod.hpp"

namespace burstnet::harness {

/// Seeded generator. Draws are computed from raw 64-bit output so runs do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0,1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform index in [0,n).
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

struct TaskInput {
    Stimulus stimulus;
    NeuronSet forced;  // volitional bursts (bandit arm)
};

class Task {
public:
    virtual ~Task() = default;

    virtual TaskInput begin_window(std::int64_t window, Rng& rng) = 0;
    /// Called after select_dominant; `dominant` is empty when no ensemble formed.
    virtual void observe(std::int64_t /*window*/, const NeuronSet& /*dominant*/) {}
    virtual double reward(std::int64_t window, Rng& rng) = 0;
    /// Action-side learning from the classified gates of this window.
    virtual void learn(std::int64_t /*window*/, double /*delta*/, const GateSet& /*gates*/) {}
    /// Action executed in this window, if any.
    virtual std::optional<std::size_t> action(std::int64_t /*window*/) const { return std::nullopt; }
    /// Stimulus used to probe bursting around REM replay.
    virtual Stimulus probe() const = 0;
};

class HabituationTask final : public Task {
public:
    explicit HabituationTask(const TaskSpec& spec);
    TaskInput begin_window(std::int64_t window, Rng& rng) override;
    double reward(std::int64_t, Rng&) override { return 0.0; }
    Stimulus probe() const override { return pattern_; }

private:
    Stimulus pattern_;
};

/// Trial: CS, the US `lag` windows later (with reward), then `iti` blank windows.
/// The first `pairings` trials pair CS and US, the next `omissions` show only CS.
class TraceConditioningTask final : public Task {
public:
    explicit TraceConditioningTask(const TaskSpec& spec);
    TaskInput begin_window(std::int64_t window, Rng& rng) override;
    double reward(std::int64_t window, Rng& rng) override;
    Stimulus probe() const override { return cs_; }

    std::int64_t trial_length() const { return lag_ + 1 + iti_; }
    bool is_cs_window(std::int64_t window) const;
    bool is_us_window(std::int64_t window) const;  // predicted US time, paired or not
    bool is_omission_trial(std::int64_t window) const;
    std::int64_t trial_of(std::int64_t window) const { return window / trial_length(); }

private:
    bool in_protocol(std::int64_t window) const;

    Stimulus cs_;
    Stimulus us_;
    std::int64_t lag_;
    std::int64_t iti_;
    std::int64_t pairings_;
    std::int64_t omissions_;
    double reward_;
};

/// Even windows: cue plus the epsilon-greedy arm forced to burst. Odd windows:
/// outcome, reward arm_rewards[a] with probability arm_probs[a].
/// Q[a] += rate * (reinforce - avert) * |delta| at the outcome.
class BanditTask final : public Task {
public:
    explicit BanditTask(const TaskSpec& spec);
    TaskInput begin_window(std::int64_t window, Rng& rng) override;
    void observe(std::int64_t window, const NeuronSet& dominant) override;
    double reward(std::int64_t window, Rng& rng) override;
    void learn(std::int64_t window, double delta, const GateSet& gates) override;
    std::optional<std::size_t> action(std::int64_t window) const override;
    Stimulus probe() const override { return cue_; }

    const std::vector<double>& action_values() const { return q_; }
    static bool is_choice_window(std::int64_t window) { return window % 2 == 0; }

private:
    Stimulus cue_;
    std::vector<NeuronId> arms_;
    std::vector<double> rewards_;
    std::vector<double> probs_;
    double epsilon_;
    double rate_;
    std::vector<double> q_;
    std::optional<std::size_t> chosen_;    // from the last choice window
    std::optional<std::size_t> executed_;  // arm in the dominant ensemble
    std::int64_t choice_window_ = -1;
};

/// Patterns shown one per window, one blank window, the first pattern again as a
/// cue, then blank windows.
class SequenceRecallTask final : public Task {
public:
    explicit SequenceRecallTask(const TaskSpec& spec);
    TaskInput begin_window(std::int64_t window, Rng& rng) override;
    double reward(std::int64_t, Rng&) override { return 0.0; }
    Stimulus probe() const override { return patterns_.front(); }

    std::int64_t cue_window() const { return static_cast<std::int64_t>(patterns_.size()) + 1; }

private:
    std::vector<Stimulus> patterns_;
};

/// Checks the task's neurons against the network and builds the environment.
/// Throws Error(ConfigInvalid) for unknown, non-sensory stimulus or non-motor arm neurons.
std::unique_ptr<Task> make_task(const TaskSpec& spec, const Network& net);

}  // namespace burstnet::harness
