#include "burstnet/harness/config.hpp"

#include <functional>
#include <map>
#include <set>

#include <fmt/format.h>

#include "burstnet/error.hpp"
#include "burstnet/spec_text.hpp"

namespace burstnet::harness {

std::string_view to_string(TaskKind kind) noexcept {
    switch (kind) {
        case TaskKind::Habituation: return "habituation";
        case TaskKind::TraceConditioning: return "trace_conditioning";
        case TaskKind::Bandit: return "bandit";
        case TaskKind::SequenceRecall: return "sequence_recall";
    }
    return "?";
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

struct Key {
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

using KeyTable = std::vector<std::pair<std::string, Key>>;

Key real_key(double& field) {
    return {[&field](const std::string& v) { field = parse_real(v, "value"); },
            [&field] { return fmt::format("{}", field); }};
}

Key int_key(int& field) {
    return {[&field](const std::string& v) { field = static_cast<int>(parse_integer(v, "value")); },
            [&field] { return fmt::format("{}", field); }};
}

Key bool_key(bool& field) {
    return {[&field](const std::string& v) { field = parse_bool(v, "value"); },
            [&field] { return std::string(field ? "on" : "off"); }};
}

std::string ids_text(const std::vector<NeuronId>& ids) {
    std::string out;
    for (NeuronId id : ids) {
        if (!out.empty()) out += ',';
        out += std::to_string(id.value);
    }
    return out;
}

Key ids_key(std::vector<NeuronId>& field) {
    return {[&field](const std::string& v) { field = parse_id_list(v); },
            [&field] { return ids_text(field); }};
}

Key reals_key(std::vector<double>& field) {
    return {[&field](const std::string& v) {
                field.clear();
                for (const auto& tok : split_tokens(v)) {
                    std::string t = tok;
                    std::erase(t, ',');
                    if (!t.empty()) field.push_back(parse_real(t, "value"));
                }
            },
            [&field] {
                std::string out;
                for (double d : field) out += (out.empty() ? "" : " ") + fmt::format("{}", d);
                return out;
            }};
}

Key patterns_key(std::vector<std::vector<NeuronId>>& field) {
    return {[&field](const std::string& v) {
                field.clear();
                std::size_t start = 0;
                while (start <= v.size()) {
                    std::size_t bar = v.find('|', start);
                    if (bar == std::string::npos) bar = v.size();
                    field.push_back(parse_id_list(std::string_view(v).substr(start, bar - start)));
                    start = bar + 1;
                }
            },
            [&field] {
                std::string out;
                for (const auto& p : field) out += (out.empty() ? "" : " | ") + ids_text(p);
                return out;
            }};
}

struct Tables {
    std::vector<std::pair<std::string, KeyTable>> sections;
};

Tables make_tables(RunConfig& c) {
    Tables t;
    t.sections.push_back(
        {"run",
         {{"windows", {[&c](const std::string& v) { c.windows = parse_integer(v, "windows"); },
                       [&c] { return fmt::format("{}", c.windows); }}},
          {"seed",
           {[&c](const std::string& v) {
                c.seed = parse_seed(v, "seed");
            },
            [&c] { return fmt::format("{}", c.seed); }}},
          {"awake_plasticity", bool_key(c.awake_plasticity)},
          {"rem_every_n_windows", int_key(c.rem_every_n_windows)},
          {"rem_cycles", int_key(c.rem_cycles)}}});
    t.sections.push_back({"clock",
                          {{"window_ms", int_key(c.clock.window_ms)},
                           {"theta_hz", real_key(c.clock.theta_hz)},
                           {"gamma_hz", real_key(c.clock.gamma_hz)},
                           {"burst_spike_count", int_key(c.clock.burst_spike_count)},
                           {"burst_isi_ms", int_key(c.clock.burst_isi_ms)}}});
    t.sections.push_back({"thresholds",
                          {{"forward", real_key(c.thresholds.forward)},
                           {"theta_explain", real_key(c.thresholds.theta_explain)},
                           {"theta_bind", real_key(c.thresholds.theta_bind)},
                           {"theta_recall", real_key(c.thresholds.theta_recall)},
                           {"ach_suppress", real_key(c.thresholds.ach_suppress)},
                           {"ach_ltd", real_key(c.thresholds.gates.ach_ltd)},
                           {"da_flip", real_key(c.thresholds.gates.da_flip)},
                           {"na_consolidate", real_key(c.thresholds.gates.na_consolidate)}}});
    t.sections.push_back({"neuromod",
                          {{"k_da", real_key(c.gains.k_da)},
                           {"k_ht", real_key(c.gains.k_ht)},
                           {"k_na", real_key(c.gains.k_na)},
                           {"k_ach", real_key(c.gains.k_ach)},
                           {"h_ht", real_key(c.gains.h_ht)},
                           {"value_learning_rate", real_key(c.value_learning_rate)},
                           {"baseline_da", real_key(c.baselines[0])},
                           {"baseline_ht5", real_key(c.baselines[1])},
                           {"baseline_na", real_key(c.baselines[2])},
                           {"baseline_ach", real_key(c.baselines[3])}}});
    t.sections.push_back({"attention",
                          {{"alpha", real_key(c.attention.alpha)},
                           {"beta", real_key(c.attention.beta)},
                           {"gamma", real_key(c.attention.gamma)}}});
    t.sections.push_back({"episodic", {{"capacity_per_cycle", int_key(c.capacity_per_cycle)}}});
    t.sections.push_back({"stdp",
                          {{"a_plus", real_key(c.stdp.a_plus)},
                           {"a_minus", real_key(c.stdp.a_minus)},
                           {"tau_plus_ms", real_key(c.stdp.tau_plus_ms)},
                           {"tau_minus_ms", real_key(c.stdp.tau_minus_ms)},
                           {"ttl_windows", int_key(c.stdp.ttl_windows)}}});
    t.sections.push_back(
        {"rem",
         {{"na_clamp", real_key(c.rem_na_clamp)},
          {"ach_clamp", real_key(c.rem_ach_clamp)},
          {"burst_gain",
           {[&c](const std::string& v) { c.rem_burst_gain = parse_real(v, "burst_gain"); },
            [&c] {
                return fmt::format("{}", c.rem_burst_gain.value_or(c.clock.burst_spike_count));
            }}}}});
    return t;
}

KeyTable task_table(TaskSpec& t) {
    switch (t.kind) {
        case TaskKind::Habituation:
            return {{"pattern", ids_key(t.pattern)}, {"drive", real_key(t.drive)}};
        case TaskKind::TraceConditioning:
            return {{"cs", ids_key(t.cs)},           {"us", ids_key(t.us)},
                    {"lag", int_key(t.lag)},         {"iti", int_key(t.iti)},
                    {"pairings", int_key(t.pairings)}, {"omissions", int_key(t.omissions)},
                    {"reward", real_key(t.reward)},  {"drive", real_key(t.drive)}};
        case TaskKind::Bandit:
            return {{"cue", ids_key(t.cue)},
                    {"arms", ids_key(t.arms)},
                    {"arm_rewards", reals_key(t.arm_rewards)},
                    {"arm_probs", reals_key(t.arm_probs)},
                    {"epsilon", real_key(t.epsilon)},
                    {"action_learning_rate", real_key(t.action_learning_rate)},
                    {"drive", real_key(t.drive)}};
        case TaskKind::SequenceRecall:
            return {{"patterns", patterns_key(t.patterns)}, {"drive", real_key(t.drive)}};
    }
    return {};
}

const std::set<std::string>& required_task_keys(TaskKind kind) {
    static const std::map<TaskKind, std::set<std::string>> req{
        {TaskKind::Habituation, {"pattern"}},
        {TaskKind::TraceConditioning, {"cs", "us"}},
        {TaskKind::Bandit, {"cue", "arms", "arm_rewards", "arm_probs"}},
        {TaskKind::SequenceRecall, {"patterns"}},
    };
    return req.at(kind);
}

bool is_network_section(const std::string& name) {
    return name == "regions" || name == "neurons" || name == "synapses" || name == "params";
}

}  // namespace

void TaskSpec::validate() const {
    auto check_ids = [](const std::vector<NeuronId>& ids, const char* what) {
        if (ids.empty()) invalid(fmt::format("task.{} is empty", what));
    };
    if (!(drive >= 0.0 && drive <= 1.0)) invalid("task.drive outside [0,1]");
    switch (kind) {
        case TaskKind::Habituation:
            check_ids(pattern, "pattern");
            break;
        case TaskKind::TraceConditioning:
            check_ids(cs, "cs");
            check_ids(us, "us");
            if (lag < 1) invalid("task.lag must be >= 1");
            if (iti < 1) invalid("task.iti must be >= 1");
            if (pairings < 0 || omissions < 0) invalid("task trial counts must be >= 0");
            if (!(reward >= -1.0 && reward <= 1.0) || reward == 0.0) {
                invalid("task.reward must be nonzero within [-1,1]");
            }
            break;
        case TaskKind::Bandit:
            check_ids(cue, "cue");
            if (arms.size() < 2) invalid("task.arms needs at least two motor neurons");
            if (arm_rewards.size() != arms.size() || arm_probs.size() != arms.size()) {
                invalid("task.arm_rewards and task.arm_probs must match task.arms");
            }
            for (double r : arm_rewards) {
                if (!(r >= -1.0 && r <= 1.0)) invalid("arm reward outside [-1,1]");
            }
            for (double p : arm_probs) {
                if (!(p >= 0.0 && p <= 1.0)) invalid("arm probability outside [0,1]");
            }
            if (!(epsilon >= 0.0 && epsilon <= 1.0)) invalid("task.epsilon outside [0,1]");
            if (!(action_learning_rate > 0.0)) invalid("task.action_learning_rate must be > 0");
            break;
        case TaskKind::SequenceRecall:
            if (patterns.size() < 2) invalid("task.patterns needs at least two patterns");
            for (const auto& p : patterns) {
                if (p.empty()) invalid("task.patterns contains an empty pattern");
            }
            break;
    }
}

RunConfig RunConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig c;
    SectionedText doc;
    try {
        doc = parse_sectioned_text(text);
    } catch (const Error& e) {
        invalid(e.what());
    }

    Tables tables = make_tables(c);
    bool has_network_sections = false;
    bool saw_windows = false;
    bool saw_seed = false;
    for (const auto& section : doc.sections) {
        if (is_network_section(section.name)) {
            has_network_sections = true;
            continue;
        }
        if (section.name == "task") continue;  // second pass, needs `kind`
        const KeyTable* table = nullptr;
        for (const auto& [name, keys] : tables.sections) {
            if (name == section.name) table = &keys;
        }
        bool is_run = section.name == "run";
        if (!table) invalid(fmt::format("unknown section [{}]", section.name));
        for (const auto& line : section.lines) {
            std::string key;
            std::string value;
            if (!split_key_value(line.text, key, value)) {
                invalid(fmt::format("line {}: expected 'key = value'", line.number));
            }
            if (is_run && key == "network") {
                c.network_path = base_dir / value;
                continue;
            }
            auto it = std::find_if(table->begin(), table->end(),
                                   [&](const auto& kv) { return kv.first == key; });
            if (it == table->end()) {
                invalid(fmt::format("line {}: unknown key '{}' in [{}]", line.number, key, section.name));
            }
            try {
                it->second.set(value);
            } catch (const Error& e) {
                invalid(fmt::format("line {}: {}", line.number, e.what()));
            }
            if (is_run && key == "windows") saw_windows = true;
            if (is_run && key == "seed") saw_seed = true;
        }
    }

    const TextSection* task = doc.find("task");
    if (!task) invalid("missing [task] section");
    std::map<std::string, std::pair<std::size_t, std::string>> task_values;
    for (const auto& line : task->lines) {
        std::string key;
        std::string value;
        if (!split_key_value(line.text, key, value)) {
            invalid(fmt::format("line {}: expected 'key = value'", line.number));
        }
        if (!task_values.emplace(key, std::make_pair(line.number, value)).second) {
            invalid(fmt::format("line {}: task key '{}' repeated", line.number, key));
        }
    }
    auto kind_it = task_values.find("kind");
    if (kind_it == task_values.end()) invalid("task.kind missing");
    const std::string& kind = kind_it->second.second;
    if (kind == "habituation") c.task.kind = TaskKind::Habituation;
    else if (kind == "trace_conditioning") c.task.kind = TaskKind::TraceConditioning;
    else if (kind == "bandit") c.task.kind = TaskKind::Bandit;
    else if (kind == "sequence_recall") c.task.kind = TaskKind::SequenceRecall;
    else invalid(fmt::format("unknown task kind '{}'", kind));
    task_values.erase(kind_it);

    KeyTable table = task_table(c.task);
    for (const auto& [key, where] : task_values) {
        auto it = std::find_if(table.begin(), table.end(), [&](const auto& kv) { return kv.first == key; });
        if (it == table.end()) {
            invalid(fmt::format("line {}: key '{}' not valid for task kind '{}'", where.first, key, kind));
        }
        try {
            it->second.set(where.second);
        } catch (const Error& e) {
            invalid(fmt::format("line {}: {}", where.first, e.what()));
        }
    }
    for (const auto& key : required_task_keys(c.task.kind)) {
        if (!task_values.contains(key)) invalid(fmt::format("task.{} missing for '{}'", key, kind));
    }

    if (!saw_windows) invalid("run.windows missing");
    if (!saw_seed) invalid("run.seed missing");

    if (has_network_sections) {
        if (!c.network_path.empty()) invalid("both run.network and inline network sections given");
        try {
            c.inline_network = NetworkSpec::from_sections(doc, true);
        } catch (const Error& e) {
            invalid(e.what());
        }
    } else if (c.network_path.empty()) {
        invalid("run.network missing");
    }

    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        invalid(e.what());
    }
    return parse(text, path.parent_path());
}

void RunConfig::validate() const {
    try {
        clock.validate();
        stdp.validate();
    } catch (const Error& e) {
        invalid(e.what());
    }
    auto unit_open = [](double x, const char* what) {
        if (!(x > 0.0 && x <= 1.0)) invalid(fmt::format("{} = {} outside (0,1]", what, x));
    };
    unit_open(thresholds.forward, "thresholds.forward");
    unit_open(thresholds.theta_explain, "thresholds.theta_explain");
    unit_open(thresholds.theta_bind, "thresholds.theta_bind");
    unit_open(thresholds.theta_recall, "thresholds.theta_recall");
    unit_open(thresholds.ach_suppress, "thresholds.ach_suppress");
    unit_open(thresholds.gates.ach_ltd, "thresholds.ach_ltd");
    unit_open(thresholds.gates.da_flip, "thresholds.da_flip");
    unit_open(thresholds.gates.na_consolidate, "thresholds.na_consolidate");
    unit_open(value_learning_rate, "neuromod.value_learning_rate");
    for (double g : {gains.k_da, gains.k_ht, gains.k_na, gains.k_ach, gains.h_ht}) {
        if (!(g >= 0.0)) invalid("neuromod gains must be >= 0");
    }
    for (double b : baselines) {
        if (!(b >= 0.0 && b <= 1.0)) invalid("modulator baselines must lie in [0,1]");
    }
    if (attention.alpha < 0.0 || attention.beta < 0.0 || attention.gamma < 0.0) {
        invalid("attention weights must be >= 0");
    }
    if (capacity_per_cycle < 5 || capacity_per_cycle > 9) invalid("episodic.capacity_per_cycle outside 5..9");
    if (!(rem_na_clamp >= 0.0 && rem_na_clamp <= 1.0) || !(rem_ach_clamp >= 0.0 && rem_ach_clamp <= 1.0)) {
        invalid("rem clamps outside [0,1]");
    }
    if (rem_burst_gain && !(*rem_burst_gain > 0.0)) invalid("rem.burst_gain must be > 0");
    if (rem_every_n_windows < 0) invalid("run.rem_every_n_windows must be >= 0");
    if (rem_cycles < 1) invalid("run.rem_cycles must be >= 1");
    if (windows < 0) invalid("run.windows must be >= 0");
    if (!inline_network && !network_path.empty() && !std::filesystem::exists(network_path)) {
        invalid(fmt::format("network file '{}' does not exist", network_path.string()));
    }
    task.validate();
}

std::string RunConfig::serialize(const std::string& network_file) const {
    RunConfig copy = *this;
    Tables tables = make_tables(copy);
    std::string out;
    for (const auto& [name, keys] : tables.sections) {
        out += fmt::format("[{}]\n", name);
        if (name == "run") out += fmt::format("network = {}\n", network_file);
        for (const auto& [key, k] : keys) out += fmt::format("{} = {}\n", key, k.get());
        out += "\n";
    }
    out += fmt::format("[task]\nkind = {}\n", to_string(task.kind));
    for (const auto& [key, k] : task_table(copy.task)) out += fmt::format("{} = {}\n", key, k.get());
    return out;
}

NetworkSpec RunConfig::network_spec() const {
    if (inline_network) return *inline_network;
    try {
        return NetworkSpec::load(network_path);
    } catch (const Error& e) {
        invalid(e.what());
    }
}

ReplayParams RunConfig::replay_params() const {
    ReplayParams p;
    p.clock = clock;
    p.forward_threshold = thresholds.forward;
    p.theta_explain = thresholds.theta_explain;
    p.theta_bind = thresholds.theta_bind;
    p.stdp = stdp;
    p.thresholds = thresholds.gates;
    p.mods = ModulatorState::at_baseline(baselines);
    p.na_clamp = rem_na_clamp;
    p.ach_clamp = rem_ach_clamp;
    p.burst_gain = rem_burst_gain.value_or(static_cast<double>(clock.burst_spike_count));
    return p;
}

}  // namespace burstnet::harness
