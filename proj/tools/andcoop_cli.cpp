// Command-line front end: one subcommand per experiment kind plus
// `reproduce`, which reruns the scenario embedded in a results manifest.
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "andcoop/experiments.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::int64_t cycles = -1;
    std::int64_t seed = -1;
    int workers = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_is_manifest) {
    cmd->add_option("config", opts.config_path,
                    config_is_manifest ? "manifest.txt from a previous run" : "scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory (default: results/<kind>)");
    cmd->add_option("--cycles", opts.cycles, "override the scenario's cycle count");
    cmd->add_option("--seed", opts.seed, "override the scenario's master seed");
    cmd->add_option("--workers", opts.workers, "worker threads (0 = hardware)");
}

andcoop::ExecuteOverrides overrides_from(const CommonOptions& opts) {
    andcoop::ExecuteOverrides overrides;
    if (opts.cycles >= 0) overrides.cycles = opts.cycles;
    if (opts.seed >= 0) overrides.seed = static_cast<std::uint64_t>(opts.seed);
    overrides.workers = opts.workers;
    return overrides;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"System-level simulator and analytic toolkit for channel-aware "
                 "cooperative URLLC downlink scheduling"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(andcoop::kVersion));

    std::vector<std::pair<andcoop::ExperimentKind, CommonOptions>> jobs;
    jobs.reserve(8);
    for (andcoop::ExperimentKind kind :
         {andcoop::ExperimentKind::single, andcoop::ExperimentKind::power_sweep,
          andcoop::ExperimentKind::rate_sweep, andcoop::ExperimentKind::population_sweep,
          andcoop::ExperimentKind::dmt, andcoop::ExperimentKind::optimize,
          andcoop::ExperimentKind::coverage, andcoop::ExperimentKind::pilot_tradeoff}) {
        jobs.emplace_back(kind, CommonOptions{});
        auto* cmd = app.add_subcommand(std::string(andcoop::to_string(kind)),
                                       "run a '" + std::string(andcoop::to_string(kind)) +
                                           "' experiment");
        add_common(cmd, jobs.back().second, false);
    }
    CommonOptions reproduce_opts;
    auto* reproduce =
        app.add_subcommand("reproduce", "rerun the scenario embedded in a manifest");
    add_common(reproduce, reproduce_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        andcoop::ScenarioFile scenario;
        CommonOptions* opts = nullptr;
        if (reproduce->parsed()) {
            scenario = andcoop::scenario_from_manifest(reproduce_opts.config_path);
            opts = &reproduce_opts;
        } else {
            for (auto& [kind, job_opts] : jobs) {
                auto* cmd = app.get_subcommand(std::string(andcoop::to_string(kind)));
                if (!cmd->parsed()) continue;
                scenario = andcoop::parse_scenario(job_opts.config_path);
                if (scenario.experiment.kind != kind)
                    throw andcoop::ScenarioError(
                        job_opts.config_path + ": scenario kind '" +
                        std::string(andcoop::to_string(scenario.experiment.kind)) +
                        "' does not match the '" + std::string(andcoop::to_string(kind)) +
                        "' subcommand");
                opts = &job_opts;
                break;
            }
        }
        std::string out_dir = opts->out_dir;
        if (out_dir.empty())
            out_dir = "results/" + std::string(andcoop::to_string(scenario.experiment.kind));
        andcoop::execute(scenario, out_dir, overrides_from(*opts));
        std::cout << "wrote " << out_dir << "/results.csv\n";
        return 0;
    } catch (const andcoop::ScenarioError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
