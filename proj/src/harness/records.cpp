#include "burstnet/harness/records.hpp"

#include <array>

#include <fmt/format.h>

#include "burstnet/error.hpp"
#include "burstnet/spec_text.hpp"

namespace burstnet::harness {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

std::int64_t field_int(std::string_view s, std::string_view what, bool allow_negative = false) {
    long long v = 0;
    try {
        v = parse_integer(s, what);
    } catch (const Error& e) {
        bad(e.what());
    }
    if (v < 0 && !allow_negative) bad(fmt::format("{} is negative", what));
    return v;
}

double field_real(std::string_view s, std::string_view what) {
    try {
        return parse_real(s, what);
    } catch (const Error& e) {
        bad(e.what());
    }
}

void expect_fields(const std::vector<std::string_view>& f, std::size_t n, std::string_view what) {
    if (f.size() != n) bad(fmt::format("{} record has {} fields, expected {}", what, f.size(), n));
}

}  // namespace

bool parse_scenario(std::string_view text, Scenario& out) noexcept {
    for (Scenario s : {Scenario::ReinforceReward, Scenario::AvoidPunishment, Scenario::UnlearnRewardPath,
                       Scenario::ReinforceNonPunishment}) {
        if (to_string(s) == text) {
            out = s;
            return true;
        }
    }
    return false;
}

std::string format_record(const MetricsRecord& r) {
    return fmt::format("{}\t{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{}\t{:.6f}", r.window,
                       r.bursting_count, r.tonic_count, r.ensemble_count,
                       r.dominant_id ? std::to_string(*r.dominant_id) : std::string("-"), r.delta, r.da,
                       r.ht5, r.na, r.ach, r.scenario ? to_string(*r.scenario) : std::string_view("-"),
                       r.reward);
}

std::string format_record(const EnsembleRecord& r) {
    return fmt::format("{}\t{}\t{}\t{}\t{:.6f}\t{}\t{:.6f}\t{}\t{}", r.window, r.ensemble_id, r.size,
                       r.support_size, r.rate_hz, r.phase_slot, r.score, r.dominant ? 1 : 0,
                       format_id_list(r.members, ';'));
}

std::string format_record(const TaskEvent& r) {
    return fmt::format("{}\t{}\t{:.6f}", r.window, r.action ? std::to_string(*r.action) : std::string("-"),
                       r.reward);
}

std::string format_record(const NeuromodRecord& r) {
    return fmt::format("{}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{}\t{:.6f}", r.window, r.delta, r.da, r.ht5,
                       r.na, r.ach, r.scenario ? to_string(*r.scenario) : std::string_view("-"), r.valence);
}

MetricsRecord parse_metrics_line(std::string_view line) {
    auto f = split_tabs(line);
    expect_fields(f, 12, "metrics");
    MetricsRecord r;
    r.window = field_int(f[0], "window");
    r.bursting_count = static_cast<std::size_t>(field_int(f[1], "bursting_count"));
    r.tonic_count = static_cast<std::size_t>(field_int(f[2], "tonic_count"));
    r.ensemble_count = static_cast<std::size_t>(field_int(f[3], "ensemble_count"));
    if (f[4] != "-") r.dominant_id = static_cast<std::uint32_t>(field_int(f[4], "dominant_id"));
    r.delta = field_real(f[5], "delta");
    r.da = field_real(f[6], "da");
    r.ht5 = field_real(f[7], "ht5");
    r.na = field_real(f[8], "na");
    r.ach = field_real(f[9], "ach");
    for (double level : {r.da, r.ht5, r.na, r.ach}) {
        if (!(level >= 0.0 && level <= 1.0)) bad(fmt::format("modulator level {} outside [0,1]", level));
    }
    if (f[10] != "-") {
        Scenario s{};
        if (!parse_scenario(f[10], s)) bad(fmt::format("unknown scenario '{}'", f[10]));
        r.scenario = s;
    }
    r.reward = field_real(f[11], "reward");
    if (r.dominant_id.has_value() != (r.ensemble_count > 0)) {
        bad(fmt::format("window {}: dominant_id inconsistent with ensemble_count", r.window));
    }
    return r;
}

EnsembleRecord parse_ensemble_line(std::string_view line) {
    auto f = split_tabs(line);
    expect_fields(f, 9, "ensemble");
    EnsembleRecord r;
    r.window = field_int(f[0], "window");
    r.ensemble_id = static_cast<std::uint32_t>(field_int(f[1], "ensemble_id"));
    r.size = static_cast<std::size_t>(field_int(f[2], "size"));
    r.support_size = static_cast<std::size_t>(field_int(f[3], "support_size"));
    r.rate_hz = field_real(f[4], "rate_hz");
    r.phase_slot = static_cast<int>(field_int(f[5], "phase_slot"));
    r.score = field_real(f[6], "score");
    if (f[7] != "0" && f[7] != "1") bad("dominant flag must be 0 or 1");
    r.dominant = f[7] == "1";
    try {
        for (NeuronId id : parse_id_list(f[8])) r.members.insert(id);
    } catch (const Error& e) {
        bad(e.what());
    }
    if (r.members.size() != r.size) bad("ensemble size does not match its member list");
    return r;
}

std::string format_metrics(const std::vector<MetricsRecord>& records) {
    std::string out(kMetricsHeader);
    out += '\n';
    for (const auto& r : records) {
        out += format_record(r);
        out += '\n';
    }
    return out;
}

std::vector<MetricsRecord> parse_metrics(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty() || lines.front() != kMetricsHeader) bad("metrics header missing or wrong");
    std::vector<MetricsRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        out.push_back(parse_metrics_line(lines[i]));
        if (out.back().window != static_cast<std::int64_t>(i - 1)) {
            bad(fmt::format("metrics line {}: window {} breaks contiguity", i + 1, out.back().window));
        }
    }
    return out;
}

std::string format_ensembles(const std::vector<EnsembleRecord>& records) {
    std::string out(kEnsemblesHeader);
    out += '\n';
    for (const auto& r : records) {
        out += format_record(r);
        out += '\n';
    }
    return out;
}

std::vector<EnsembleRecord> parse_ensembles(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty() || lines.front() != kEnsemblesHeader) bad("ensembles header missing or wrong");
    std::vector<EnsembleRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) out.push_back(parse_ensemble_line(lines[i]));
    return out;
}

std::string format_task_events(const std::vector<TaskEvent>& events) {
    std::string out(kTaskHeader);
    out += '\n';
    for (const auto& e : events) {
        out += format_record(e);
        out += '\n';
    }
    return out;
}

std::string format_neuromod(const std::vector<NeuromodRecord>& records) {
    std::string out(kNeuromodHeader);
    out += '\n';
    for (const auto& r : records) {
        out += format_record(r);
        out += '\n';
    }
    return out;
}

}  // namespace burstnet::harness
