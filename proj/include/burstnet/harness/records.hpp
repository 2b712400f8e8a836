#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "burstnet/binding.hpp"
#include "burstnet/neuromod.hpp"

namespace burstnet::harness {

struct MetricsRecord {
    std::int64_t window = 0;
    std::size_t bursting_count = 0;
    std::size_t tonic_count = 0;
    std::size_t ensemble_count = 0;
    std::optional<std::uint32_t> dominant_id;
    double delta = 0.0;
    double da = 0.0;
    double ht5 = 0.0;
    double na = 0.0;
    double ach = 0.0;
    std::optional<Scenario> scenario;
    double reward = 0.0;
};

struct EnsembleRecord {
    std::int64_t window = 0;
    std::uint32_t ensemble_id = 0;
    std::size_t size = 0;
    std::size_t support_size = 0;
    double rate_hz = 0.0;
    int phase_slot = 0;
    double score = 0.0;
    bool dominant = false;
    NeuronSet members;
};

struct NeuromodRecord {
    std::int64_t window = 0;
    double delta = 0.0;
    double da = 0.0;
    double ht5 = 0.0;
    double na = 0.0;
    double ach = 0.0;
    std::optional<Scenario> scenario;
    double valence = 0.0;  // amygdala reaction this window
};

struct TaskEvent {
    std::int64_t window = 0;
    std::optional<std::size_t> action;  // arm index, bandit choice windows only
    double reward = 0.0;
};

inline constexpr std::string_view kMetricsHeader =
    "window\tbursting_count\ttonic_count\tensemble_count\tdominant_id\tdelta\tda\tht5\tna\tach\t"
    "scenario\treward";
inline constexpr std::string_view kEnsemblesHeader =
    "window\tensemble_id\tsize\tsupport_size\trate_hz\tphase_slot\tscore\tdominant\tmembers";
inline constexpr std::string_view kNeuromodHeader = "window\tdelta\tda\tht5\tna\tach\tscenario\tvalence";
inline constexpr std::string_view kTaskHeader = "window\taction\treward";

std::string format_record(const MetricsRecord& r);
std::string format_record(const EnsembleRecord& r);
std::string format_record(const TaskEvent& r);
std::string format_record(const NeuromodRecord& r);

/// Schema-checked parse of one data line. Throws Error(ParseError).
MetricsRecord parse_metrics_line(std::string_view line);
EnsembleRecord parse_ensemble_line(std::string_view line);

/// Header plus one line per record; checks windows are contiguous from 0.
std::string format_metrics(const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> parse_metrics(std::string_view text);
std::string format_ensembles(const std::vector<EnsembleRecord>& records);
std::vector<EnsembleRecord> parse_ensembles(std::string_view text);
std::string format_task_events(const std::vector<TaskEvent>& events);
std::string format_neuromod(const std::vector<NeuromodRecord>& records);

bool parse_scenario(std::string_view text, Scenario& out) noexcept;

}  // namespace burstnet::harness
