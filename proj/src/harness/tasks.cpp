#include "burstnet/harness/tasks.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "burstnet/error.hpp"

namespace burstnet::harness {

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "index over an empty range");
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

HabituationTask::HabituationTask(const TaskSpec& spec)
    : pattern_(Stimulus::uniform(spec.pattern, spec.drive)) {}

TaskInput HabituationTask::begin_window(std::int64_t, Rng&) { return {pattern_, {}}; }

TraceConditioningTask::TraceConditioningTask(const TaskSpec& spec)
    : cs_(Stimulus::uniform(spec.cs, spec.drive)),
      us_(Stimulus::uniform(spec.us, spec.drive)),
      lag_(spec.lag),
      iti_(spec.iti),
      pairings_(spec.pairings),
      omissions_(spec.omissions),
      reward_(spec.reward) {}

bool TraceConditioningTask::in_protocol(std::int64_t window) const {
    return trial_of(window) < pairings_ + omissions_;
}

bool TraceConditioningTask::is_cs_window(std::int64_t window) const {
    return in_protocol(window) && window % trial_length() == 0;
}

bool TraceConditioningTask::is_us_window(std::int64_t window) const {
    return in_protocol(window) && window % trial_length() == lag_;
}

bool TraceConditioningTask::is_omission_trial(std::int64_t window) const {
    return in_protocol(window) && trial_of(window) >= pairings_;
}

TaskInput TraceConditioningTask::begin_window(std::int64_t window, Rng&) {
    if (is_cs_window(window)) return {cs_, {}};
    if (is_us_window(window) && !is_omission_trial(window)) return {us_, {}};
    return {};
}

double TraceConditioningTask::reward(std::int64_t window, Rng&) {
    return is_us_window(window) && !is_omission_trial(window) ? reward_ : 0.0;
}

BanditTask::BanditTask(const TaskSpec& spec)
    : cue_(Stimulus::uniform(spec.cue, spec.drive)),
      arms_(spec.arms),
      rewards_(spec.arm_rewards),
      probs_(spec.arm_probs),
      epsilon_(spec.epsilon),
      rate_(spec.action_learning_rate),
      q_(spec.arms.size(), 0.0) {}

TaskInput BanditTask::begin_window(std::int64_t window, Rng& rng) {
    if (!is_choice_window(window)) return {};
    std::size_t a = 0;
    if (rng.uniform() < epsilon_) {
        a = rng.index(arms_.size());
    } else {
        const double best = *std::max_element(q_.begin(), q_.end());
        std::vector<std::size_t> ties;
        for (std::size_t i = 0; i < q_.size(); ++i) {
            if (q_[i] == best) ties.push_back(i);
        }
        a = ties.size() == 1 ? ties.front() : ties[rng.index(ties.size())];
    }
    chosen_ = a;
    executed_ = a;
    choice_window_ = window;
    return {cue_, NeuronSet{arms_[a]}};
}

void BanditTask::observe(std::int64_t window, const NeuronSet& dominant) {
    if (window != choice_window_) return;
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        if (dominant.contains(arms_[i])) {
            executed_ = i;
            return;
        }
    }
}

double BanditTask::reward(std::int64_t window, Rng& rng) {
    if (is_choice_window(window) || !executed_ || window != choice_window_ + 1) return 0.0;
    const std::size_t a = *executed_;
    return rng.uniform() < probs_[a] ? rewards_[a] : 0.0;
}

void BanditTask::learn(std::int64_t window, double delta, const GateSet& gates) {
    if (is_choice_window(window) || !executed_ || window != choice_window_ + 1) return;
    q_[*executed_] += rate_ * (gates.action_reinforce - gates.action_avert) * std::abs(delta);
}

std::optional<std::size_t> BanditTask::action(std::int64_t window) const {
    return window == choice_window_ ? executed_ : std::nullopt;
}

SequenceRecallTask::SequenceRecallTask(const TaskSpec& spec) {
    for (const auto& p : spec.patterns) patterns_.push_back(Stimulus::uniform(p, spec.drive));
}

TaskInput SequenceRecallTask::begin_window(std::int64_t window, Rng&) {
    const auto n = static_cast<std::int64_t>(patterns_.size());
    if (window < n) return {patterns_[static_cast<std::size_t>(window)], {}};
    if (window == cue_window()) return {patterns_.front(), {}};
    return {};
}

namespace {

void check_stimulus(const std::vector<NeuronId>& ids, double drive, const Network& net, const char* what) {
    for (NeuronId id : ids) {
        if (id.index() >= net.size()) {
            throw Error(ErrorCode::ConfigInvalid, fmt::format("task.{}: neuron {} not in network", what, id.value));
        }
    }
    try {
        Stimulus::uniform(ids, drive).validate(net);
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigInvalid, fmt::format("task.{}: {}", what, e.what()));
    }
}

}  // namespace

std::unique_ptr<Task> make_task(const TaskSpec& spec, const Network& net) {
    spec.validate();
    switch (spec.kind) {
        case TaskKind::Habituation:
            check_stimulus(spec.pattern, spec.drive, net, "pattern");
            return std::make_unique<HabituationTask>(spec);
        case TaskKind::TraceConditioning:
            check_stimulus(spec.cs, spec.drive, net, "cs");
            check_stimulus(spec.us, spec.drive, net, "us");
            return std::make_unique<TraceConditioningTask>(spec);
        case TaskKind::Bandit:
            check_stimulus(spec.cue, spec.drive, net, "cue");
            for (NeuronId id : spec.arms) {
                if (id.index() >= net.size() || !net.is_excitatory(id) ||
                    net.region_of(id).kind != RegionKind::MotorCortex) {
                    throw Error(ErrorCode::ConfigInvalid,
                                fmt::format("task.arms: {} is not an excitatory motor neuron", id.value));
                }
            }
            return std::make_unique<BanditTask>(spec);
        case TaskKind::SequenceRecall:
            for (const auto& p : spec.patterns) check_stimulus(p, spec.drive, net, "patterns");
            return std::make_unique<SequenceRecallTask>(spec);
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown task kind");
}

}  // namespace burstnet::harness
