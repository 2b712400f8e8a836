#include "burstnet/neuromod.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "burstnet/error.hpp"

namespace burstnet {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

ModulatorState ModulatorState::at_baseline(const std::array<double, 4>& baseline) {
    ModulatorState s;
    for (double b : baseline) {
        if (!(b >= 0.0 && b <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, fmt::format("baseline {} outside [0,1]", b));
        }
    }
    s.baseline = baseline;
    s.level = baseline;
    return s;
}

bool ModulatorState::within_bounds() const {
    auto ok = [](double x) { return x >= 0.0 && x <= 1.0; };
    return std::all_of(level.begin(), level.end(), ok) &&
           std::all_of(baseline.begin(), baseline.end(), ok);
}

ModulatorState update_modulators(double delta, std::size_t novelty_count,
                                 std::size_t excitatory_count, double amygdala_valence,
                                 const ModulatorState& mods, const ModulatorGains& gains) {
    ModulatorState next = mods;
    const double abs_delta = std::abs(delta);
    const double novelty_norm =
        excitatory_count == 0 ? 0.0
                              : static_cast<double>(novelty_count) / static_cast<double>(excitatory_count);

    next[ModulatorKind::DA] = clamp01(mods.base(ModulatorKind::DA) + gains.k_da * delta);

    const double ht_base = mods.base(ModulatorKind::HT5);
    const double decay = gains.h_ht > 0.0 ? std::exp2(-1.0 / gains.h_ht) : 0.0;
    const double excess = (mods[ModulatorKind::HT5] - ht_base) * decay;
    next[ModulatorKind::HT5] = clamp01(ht_base + excess + gains.k_ht * abs_delta);

    next[ModulatorKind::NA] = clamp01(mods.base(ModulatorKind::NA) +
                                      gains.k_na * (abs_delta + std::abs(amygdala_valence)));

    next[ModulatorKind::ACh] =
        clamp01(mods.base(ModulatorKind::ACh) +
                gains.k_ach * (novelty_norm + std::max(0.0, -delta) + std::max(0.0, -amygdala_valence)));
    return next;
}

ValueTable::ValueTable(double learning_rate) : learning_rate_(learning_rate) {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("learning_rate {} outside (0,1]", learning_rate));
    }
}

double ValueTable::value(StateKey key) const {
    auto it = v_.find(key);
    return it == v_.end() ? 0.0 : it->second;
}

void ValueTable::set(StateKey key, double v) { v_[key] = std::clamp(v, -1.0, 1.0); }

double ValueTable::compute_pe(double reward, StateKey key) {
    const double delta = reward - value(key);
    set(key, value(key) + learning_rate_ * delta);
    return delta;
}

void AmygdalaStore::condition(StateKey key, double us_valence) {
    if (us_valence == 0.0) throw Error(ErrorCode::ZeroValence, "conditioning needs a nonzero valence");
    if (!(us_valence >= -1.0 && us_valence <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("valence {} outside [-1,1]", us_valence));
    }
    associations_[key] = us_valence;
}

double AmygdalaStore::valence(StateKey key) const {
    auto it = associations_.find(key);
    return it == associations_.end() ? 0.0 : it->second;
}

double amygdala_react(const std::vector<StateKey>& active_keys, const AmygdalaStore& store) {
    double best = 0.0;
    for (StateKey k : active_keys) {
        double v = store.valence(k);
        if (std::abs(v) > std::abs(best)) best = v;
    }
    return best;
}

double attention_bias(const NeuronSet& members, const ModulatorState& mods,
                      const AmygdalaStore& store) {
    return mods[ModulatorKind::NA] * std::abs(store.valence(state_key(members)));
}

std::string_view to_string(Scenario s) noexcept {
    switch (s) {
        case Scenario::ReinforceReward: return "reinforce_reward";
        case Scenario::AvoidPunishment: return "avoid_punishment";
        case Scenario::UnlearnRewardPath: return "unlearn_reward_path";
        case Scenario::ReinforceNonPunishment: return "reinforce_non_punishment";
    }
    return "?";
}

ScenarioGates classify_scenario(double delta, Valence valence, const ModulatorState& mods) {
    if (delta == 0.0) throw Error(ErrorCode::ZeroDelta, "no learning event");
    const double na = mods[ModulatorKind::NA];
    const double ach = mods[ModulatorKind::ACh];
    const double da = mods[ModulatorKind::DA];
    const double ht = mods[ModulatorKind::HT5];

    ScenarioGates out{};
    if (delta > 0.0) {
        out.gates.memory_learn = na;
        if (valence == Valence::Positive) {
            out.scenario = Scenario::ReinforceReward;
            out.gates.action_reinforce = da;
        } else {
            out.scenario = Scenario::AvoidPunishment;
            out.gates.action_avert = ht;
        }
    } else {
        out.gates.memory_unlearn = ach;
        if (valence == Valence::Positive) {
            out.scenario = Scenario::UnlearnRewardPath;
            out.gates.action_avert = ht;
        } else {
            out.scenario = Scenario::ReinforceNonPunishment;
            out.gates.action_reinforce = da;
        }
    }
    return out;
}

}  // namespace burstnet
