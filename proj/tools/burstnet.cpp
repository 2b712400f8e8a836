// burstnet command line: run, replay, inspect, rem, plot.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "burstnet/error.hpp"
#include "burstnet/harness/config.hpp"
#include "burstnet/harness/replay.hpp"
#include "burstnet/harness/run.hpp"
#include "burstnet/harness/tasks.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitModule = 4;

int exit_code_for(burstnet::ErrorCode code) {
    using burstnet::ErrorCode;
    switch (code) {
        case ErrorCode::ConfigInvalid:
        case ErrorCode::ParseError:
        case ErrorCode::SnapshotMissing:
        case ErrorCode::UnknownSeries:
            return kExitConfig;
        case ErrorCode::Divergence:
            return kExitDivergence;
        default:
            return kExitModule;
    }
}

bool setup_logging() {
    auto logger = spdlog::stderr_color_mt("burstnet");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    const char* env = std::getenv("BURSTNET_LOG_LEVEL");
    const std::string level = env ? env : "info";
    if (level == "error") {
        spdlog::set_level(spdlog::level::err);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else {
        spdlog::error("BURSTNET_LOG_LEVEL must be error, info or debug, got '{}'", level);
        return false;
    }
    return true;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    using namespace burstnet::harness;
    const RunConfig config = RunConfig::load(config_path);
    const burstnet::Network initial = burstnet::build_network(config.network_spec());
    spdlog::info("running {} for {} windows, seed {}", to_string(config.task.kind), config.windows,
                 config.seed);
    const RunResult result = run(config, initial);
    for (const auto& r : result.metrics) {
        spdlog::debug("window {}: bursting {} tonic {} ensembles {} delta {:.4f}", r.window, r.bursting_count,
                      r.tonic_count, r.ensemble_count, r.delta);
    }
    write_run_dir(config, initial, result, out_dir);
    spdlog::info("wrote {} windows to {}", result.metrics.size(), out_dir);
    return kExitOk;
}

int cmd_replay(const std::string& dir) {
    const auto outcome = burstnet::harness::replay_run(dir);
    if (!outcome.identical()) {
        throw burstnet::Error(burstnet::ErrorCode::Divergence,
                              fmt::format("first differing window {}", *outcome.first_divergent_window));
    }
    spdlog::info("replay identical over {} windows", outcome.windows_compared);
    std::cout << "identical " << outcome.windows_compared << "\n";
    return kExitOk;
}

int cmd_inspect(const std::string& dir) {
    std::cout << burstnet::harness::inspect_store(dir);
    return kExitOk;
}

int cmd_rem(const std::string& config_path, int cycles, const std::string& out_dir) {
    using namespace burstnet::harness;
    RunConfig config = RunConfig::load(config_path);
    config.rem_every_n_windows = 0;
    RunResult result = run(config);
    spdlog::info("waking phase: {} windows, {} stored items", result.metrics.size(), result.store.item_count());
    auto task = make_task(config.task, result.final_network);
    const auto report = burstnet::rem_replay(result.store, result.final_network, task->probe(), cycles,
                                             config.replay_params());
    std::cout << "pattern_key\t" << burstnet::to_string(report.pattern_key) << "\n";
    std::cout << "synapses_changed\t" << report.synapses_changed << "\n";
    std::cout << "bursting_before\t" << report.bursting_before << "\n";
    for (std::size_t c = 0; c < report.bursting_per_cycle.size(); ++c) {
        std::cout << "cycle_" << c + 1 << "\t" << report.bursting_per_cycle[c] << "\n";
    }
    std::cout << "bursting_after\t" << report.bursting_after << "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text_file(std::filesystem::path(out_dir) / "rem_network.net", result.final_network.serialize());
        write_text_file(std::filesystem::path(out_dir) / "rem.tsv", format_rem_reports({report}, {-1}));
    }
    return kExitOk;
}

int cmd_plot(const std::string& dir, const std::string& which) {
    const auto path = burstnet::harness::emit_plotdata(dir, which);
    spdlog::info("wrote {}", path.string());
    std::cout << path.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    if (!setup_logging()) return kExitConfig;

    CLI::App app{"burstnet: burst/tonic spiking network simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "run a configured task and write a run directory");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory")->required();

    std::string replay_dir;
    auto* replay = app.add_subcommand("replay", "re-execute a run directory and compare metrics");
    replay->add_option("dir", replay_dir, "run directory")->required();

    std::string store_dir;
    auto* inspect = app.add_subcommand("inspect", "summarize the episodic store of a run");
    inspect->add_option("--store", store_dir, "run directory")->required();

    int cycles = 1;
    std::string rem_out;
    auto* rem = app.add_subcommand("rem", "run the waking phase, then REM replay");
    rem->add_option("--config", config_path, "config file")->required();
    rem->add_option("--cycles", cycles, "replay cycles")->required()->check(CLI::PositiveNumber);
    rem->add_option("--out", rem_out, "optional directory for the consolidated network");

    std::string plot_dir;
    std::string which;
    auto* plot = app.add_subcommand("plot", "write columnar plot data from a run directory");
    plot->add_option("dir", plot_dir, "run directory")->required();
    plot->add_option("--which", which, "burst_curve | modulators | ensembles")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, out_dir);
        if (*replay) return cmd_replay(replay_dir);
        if (*inspect) return cmd_inspect(store_dir);
        if (*rem) return cmd_rem(config_path, cycles, rem_out);
        if (*plot) return cmd_plot(plot_dir, which);
    } catch (const burstnet::Error& e) {
        spdlog::error("{}", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitModule;
    }
    return kExitModule;
}
