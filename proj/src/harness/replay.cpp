#include "burstnet/harness/replay.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "burstnet/error.hpp"
#include "burstnet/harness/config.hpp"
#include "burstnet/harness/run.hpp"
#include "burstnet/spec_text.hpp"

namespace burstnet::harness {

namespace {

std::string read_required(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw Error(ErrorCode::SnapshotMissing, fmt::format("'{}' not found", path.string()));
    }
    return read_file(path);
}

}  // namespace

std::optional<std::int64_t> first_divergence(const std::vector<MetricsRecord>& recorded,
                                             const std::vector<MetricsRecord>& replayed) {
    const std::size_t n = std::min(recorded.size(), replayed.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (format_record(recorded[i]) != format_record(replayed[i])) return static_cast<std::int64_t>(i);
    }
    if (recorded.size() != replayed.size()) return static_cast<std::int64_t>(n);
    return std::nullopt;
}

ReplayOutcome replay_run(const std::filesystem::path& dir) {
    const std::string config_text = read_required(dir / "config.cfg");
    read_required(dir / "network.net");
    const std::string metrics_text = read_required(dir / "metrics.tsv");

    const RunConfig config = RunConfig::parse(config_text, dir);
    const std::vector<MetricsRecord> recorded = parse_metrics(metrics_text);
    const RunResult result = run(config);

    ReplayOutcome outcome;
    outcome.windows_compared = std::max(recorded.size(), result.metrics.size());
    outcome.first_divergent_window = first_divergence(recorded, result.metrics);
    // Formatted records can agree while the file bytes do not (e.g. a trailing edit).
    if (!outcome.first_divergent_window && format_metrics(result.metrics) != metrics_text) {
        outcome.first_divergent_window = static_cast<std::int64_t>(recorded.size());
    }
    return outcome;
}

std::filesystem::path emit_plotdata(const std::filesystem::path& dir, std::string_view which) {
    if (std::find(std::begin(kPlotSeries), std::end(kPlotSeries), which) == std::end(kPlotSeries)) {
        throw Error(ErrorCode::UnknownSeries,
                    fmt::format("unknown series '{}' (burst_curve, modulators, ensembles)", which));
    }
    const auto metrics = parse_metrics(read_required(dir / "metrics.tsv"));
    std::string out;
    if (which == "burst_curve") {
        out = "window\tbursting_count\n";
        for (const auto& r : metrics) out += fmt::format("{}\t{}\n", r.window, r.bursting_count);
    } else if (which == "modulators") {
        out = "window\tda\tht5\tna\tach\n";
        for (const auto& r : metrics) {
            out += fmt::format("{}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\n", r.window, r.da, r.ht5, r.na, r.ach);
        }
    } else {
        const auto ensembles = parse_ensembles(read_required(dir / "ensembles.tsv"));
        out = "window\tsize\tensemble_id\n";
        for (const auto& e : ensembles) out += fmt::format("{}\t{}\t{}\n", e.window, e.size, e.ensemble_id);
    }
    const auto path = dir / fmt::format("{}.plot.tsv", which);
    write_text_file(path, out);
    return path;
}

std::string inspect_store(const std::filesystem::path& dir) {
    const std::string text = read_required(dir / "store.tsv");
    std::map<std::string, std::size_t> per_trace;
    std::set<std::string> cycles;
    std::size_t items = 0;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) nl = text.size();
        std::string_view line(text.data() + start, nl - start);
        start = nl + 1;
        if (line_no++ == 0) {
            if (line != "trace_id\tposition\ttheta_index\tsalience\tneuron_ids") {
                throw Error(ErrorCode::ParseError, "store.tsv header missing or wrong");
            }
            continue;
        }
        auto tokens = split_tokens(line);
        if (tokens.size() != 5) {
            throw Error(ErrorCode::ParseError, fmt::format("store.tsv line {}: expected 5 fields", line_no));
        }
        ++per_trace[tokens[0]];
        cycles.insert(tokens[2]);
        ++items;
    }
    std::string out = text;
    out += fmt::format("# traces: {}, items: {}, theta cycles: {}\n", per_trace.size(), items, cycles.size());
    for (const auto& [id, n] : per_trace) out += fmt::format("# trace {}: {} items\n", id, n);
    return out;
}

}  // namespace burstnet::harness
