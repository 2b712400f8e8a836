#include "burstnet/harness/run.hpp"

#include <fstream>

#include <fmt/format.h>

#include "burstnet/binding.hpp"
#include "burstnet/dynamics.hpp"
#include "burstnet/error.hpp"
#include "burstnet/harness/tasks.hpp"

namespace burstnet::harness {

RunResult run(const RunConfig& config) { return run(config, build_network(config.network_spec())); }

RunResult run(const RunConfig& config, const Network& network) {
    config.validate();
    const Thresholds& th = config.thresholds;

    RunResult out;
    out.final_network = network;
    Network& net = out.final_network;
    out.store = EpisodicStore(config.capacity_per_cycle, th.theta_recall, th.ach_suppress);
    out.values = ValueTable(config.value_learning_rate);

    auto task = make_task(config.task, net);
    Rng rng(config.seed);
    ModulatorState mods = ModulatorState::at_baseline(config.baselines);
    EligibilityTrace trace;
    NeuronSet recalled;  // forced into the next window
    std::optional<StateKey> prev_state;
    const ReplayParams replay = config.replay_params();

    for (std::int64_t w = 0; w < config.windows; ++w) {
        WindowSummary sum;
        sum.window = w;

        // stimulus
        TaskInput input = task->begin_window(w, rng);
        input.stimulus.validate(net);
        NeuronSet forced;
        for (NeuronId n : set_union(recalled, input.forced)) {
            if (net.is_excitatory(n)) forced.insert(n);
        }
        NeuronSet recalled_now;
        for (NeuronId n : recalled) {
            if (net.is_excitatory(n)) recalled_now.insert(n);
        }

        // forward pass and modes, recall and action forced to burst
        sum.active = forward_pass(net, input.stimulus, th.forward, ForcedBursts{forced, 1.0});
        const ModeMap modes = assign_modes(net, sum.active, strong_subgraph(net, th.theta_explain), forced);
        NeuronSet stimulus_bursting;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (modes[i] == FiringMode::Bursting) stimulus_bursting.insert(NeuronId{static_cast<std::uint32_t>(i)});
        }
        sum.bursting = merge_step(recalled_now, stimulus_bursting);
        sum.forced = forced;

        // binding and attention
        std::vector<NeuronSet> co_driven;
        if (!recalled_now.empty()) co_driven.push_back(recalled_now);
        const auto ensembles = form_ensembles(modes, net, th.theta_bind, co_driven);
        const AttentionState attention = select_dominant(ensembles, mods, config.attention, out.amygdala);
        const Ensemble* dominant = attention.dominant ? find_ensemble(ensembles, *attention.dominant) : nullptr;
        if (dominant) sum.dominant_members = dominant->members;
        task->observe(w, sum.dominant_members);

        // episodic encode and recall, salience and suppression from last window's levels
        recalled.clear();
        if (dominant) {
            out.store.encode(dominant->members, w, mods[ModulatorKind::NA]);
            RecallResult rr = out.store.recall(dominant->members, mods[ModulatorKind::ACh]);
            if (rr.hit) {
                recalled = rr.hit->recalled;
                sum.recalled = recalled;
            }
        }

        // reward and TD error credited to the previous attended state
        const double reward = task->reward(w, rng);
        std::optional<StateKey> state;
        if (dominant) state = state_key(dominant->members);
        const double target = reward + (state ? out.values.value(*state) : 0.0);
        const double delta = prev_state ? out.values.compute_pe(target, *prev_state) : target;

        // modulators
        std::vector<StateKey> keys;
        keys.reserve(ensembles.size());
        for (const auto& e : ensembles) keys.push_back(state_key(e.members));
        const double valence = amygdala_react(keys, out.amygdala);
        std::size_t novelty = 0;
        for (FiringMode m : modes) novelty += m == FiringMode::Bursting ? 1 : 0;
        mods = update_modulators(delta, novelty, net.excitatory_count(), valence, mods, config.gains);
        sum.mods = mods;

        // scenario, along the valence axis of the credited state
        std::optional<Scenario> scenario;
        GateSet gates;
        if (delta != 0.0) {
            Valence v = reward >= 0.0 ? Valence::Positive : Valence::Negative;
            if (prev_state && out.amygdala.contains(*prev_state)) {
                v = out.amygdala.valence(*prev_state) > 0.0 ? Valence::Positive : Valence::Negative;
            }
            const ScenarioGates sg = classify_scenario(v == Valence::Positive ? delta : -delta, v, mods);
            scenario = sg.scenario;
            gates = sg.gates;
            task->learn(w, delta, gates);
        }
        if (reward != 0.0 && prev_state) out.amygdala.condition(*prev_state, reward);
        sum.gates = gates;

        // spikes and plasticity
        const auto spikes = emit_spikes(net, modes, phase_map(ensembles), config.clock, w);
        if (config.awake_plasticity) {
            accumulate(spikes, net, config.stdp, gates, mods, trace, th.gates);
            sum.gate_mods = mods;
            sum.weights_changed =
                consolidate(trace, mods[ModulatorKind::NA], net, config.stdp.ttl_windows, th.gates);
        }

        if (config.rem_every_n_windows > 0 && (w + 1) % config.rem_every_n_windows == 0 &&
            !out.store.empty()) {
            out.rem_reports.push_back(rem_replay(out.store, net, task->probe(), config.rem_cycles, replay));
            out.rem_windows.push_back(w);
            recalled.clear();
            sum.recalled.reset();
        }

        MetricsRecord rec;
        rec.window = w;
        rec.bursting_count = sum.bursting.size();
        for (FiringMode m : modes) rec.tonic_count += m == FiringMode::Tonic ? 1 : 0;
        rec.ensemble_count = ensembles.size();
        rec.dominant_id = attention.dominant;
        rec.delta = delta;
        rec.da = mods[ModulatorKind::DA];
        rec.ht5 = mods[ModulatorKind::HT5];
        rec.na = mods[ModulatorKind::NA];
        rec.ach = mods[ModulatorKind::ACh];
        rec.scenario = scenario;
        rec.reward = reward;
        out.metrics.push_back(rec);
        for (const auto& e : ensembles) {
            out.ensembles.push_back(EnsembleRecord{w, e.id, e.members.size(), e.support.size(), e.rate_hz,
                                                   e.phase_slot, attention.scores.at(e.id),
                                                   attention.dominant == e.id, e.members});
        }
        out.neuromod.push_back(NeuromodRecord{w, delta, rec.da, rec.ht5, rec.na, rec.ach, scenario, valence});
        out.task_events.push_back(TaskEvent{w, task->action(w), reward});
        out.summaries.push_back(std::move(sum));
        prev_state = state;
    }

    if (const auto* bandit = dynamic_cast<const BanditTask*>(task.get())) {
        out.action_values = bandit->action_values();
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot write '{}'", path.string()));
    f << text;
    if (!f) throw Error(ErrorCode::InvalidArgument, fmt::format("write to '{}' failed", path.string()));
}

std::string format_rem_reports(const std::vector<ConsolidationReport>& reports,
                               const std::vector<std::int64_t>& windows) {
    std::string out = "window\tbursting_before\tbursting_after\tsynapses_changed\tbursting_per_cycle\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        std::string per_cycle;
        for (std::size_t c : r.bursting_per_cycle) per_cycle += (per_cycle.empty() ? "" : ";") + std::to_string(c);
        out += fmt::format("{}\t{}\t{}\t{}\t{}\n", i < windows.size() ? windows[i] : -1, r.bursting_before,
                           r.bursting_after, r.synapses_changed, per_cycle);
    }
    return out;
}

void write_run_dir(const RunConfig& config, const Network& initial, const RunResult& result,
                   const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    write_text_file(dir / "config.cfg", config.serialize("network.net"));
    write_text_file(dir / "network.net", initial.serialize());
    write_text_file(dir / "metrics.tsv", format_metrics(result.metrics));
    write_text_file(dir / "ensembles.tsv", format_ensembles(result.ensembles));
    write_text_file(dir / "neuromod.tsv", format_neuromod(result.neuromod));
    write_text_file(dir / "task.tsv", format_task_events(result.task_events));
    write_text_file(dir / "store.tsv", result.store.dump());
    write_text_file(dir / "rem.tsv", format_rem_reports(result.rem_reports, result.rem_windows));
    write_text_file(dir / "final_network.net", result.final_network.serialize());
}

}  // namespace burstnet::harness
