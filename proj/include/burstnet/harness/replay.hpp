#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "burstnet/harness/records.hpp"

namespace burstnet::harness {

struct ReplayOutcome {
    std::optional<std::int64_t> first_divergent_window;  // empty when identical
    std::size_t windows_compared = 0;
    bool identical() const { return !first_divergent_window.has_value(); }
};

/// First window whose formatted records differ; a missing record counts as a
/// difference at that window.
std::optional<std::int64_t> first_divergence(const std::vector<MetricsRecord>& recorded,
                                             const std::vector<MetricsRecord>& replayed);

/// Re-executes the run stored in `dir` from its config and network snapshot and
/// compares the metrics. Throws Error(SnapshotMissing) when a file is absent; the
/// caller decides whether a divergence is an error.
ReplayOutcome replay_run(const std::filesystem::path& dir);

inline constexpr std::string_view kPlotSeries[] = {"burst_curve", "modulators", "ensembles"};

/// Writes `<dir>/<which>.plot.tsv` and returns its path. Throws Error(UnknownSeries).
std::filesystem::path emit_plotdata(const std::filesystem::path& dir, std::string_view which);

/// `<dir>/store.tsv` followed by '#'-prefixed per-trace counts.
std::string inspect_store(const std::filesystem::path& dir);

}  // namespace burstnet::harness
