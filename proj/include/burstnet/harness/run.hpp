#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "burstnet/episodic.hpp"
#include "burstnet/harness/config.hpp"
#include "burstnet/harness/records.hpp"
#include "burstnet/netcore.hpp"
#include "burstnet/neuromod.hpp"
#include "burstnet/plasticity.hpp"

namespace burstnet::harness {

/// What the loop saw in one window, beyond the metrics line.
struct WindowSummary {
    std::int64_t window = 0;
    NeuronSet active;
    NeuronSet bursting;
    NeuronSet forced;            // recall from the previous window plus volitional action
    NeuronSet dominant_members;  // empty when no ensemble formed
    std::optional<NeuronSet> recalled;  // set for the next window
    ModulatorState mods;                // after this window's update
    std::optional<ModulatorState> gate_mods;  // levels handed to apply_gates, if accumulate ran
    GateSet gates;
    std::size_t weights_changed = 0;
};

struct RunResult {
    std::vector<MetricsRecord> metrics;
    std::vector<EnsembleRecord> ensembles;
    std::vector<TaskEvent> task_events;
    std::vector<NeuromodRecord> neuromod;
    std::vector<WindowSummary> summaries;
    std::vector<ConsolidationReport> rem_reports;
    std::vector<std::int64_t> rem_windows;  // window after which each replay ran
    Network final_network;
    EpisodicStore store;
    ValueTable values;
    AmygdalaStore amygdala;
    std::vector<double> action_values;  // bandit only
};

/// Runs the configured task on the network built from the config.
RunResult run(const RunConfig& config);
/// Runs on an explicit network (a snapshot), ignoring the config's network source.
RunResult run(const RunConfig& config, const Network& network);

/// Writes config.cfg, network.net (the initial snapshot), metrics.tsv,
/// ensembles.tsv, neuromod.tsv, task.tsv, store.tsv, rem.tsv and final_network.net.
void write_run_dir(const RunConfig& config, const Network& initial, const RunResult& result,
                   const std::filesystem::path& dir);

std::string format_rem_reports(const std::vector<ConsolidationReport>& reports,
                               const std::vector<std::int64_t>& windows);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace burstnet::harness
