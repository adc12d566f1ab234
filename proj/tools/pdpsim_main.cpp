#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pdpsim/experiment.hpp"
#include "pdpsim/report.hpp"
#include "pdpsim/scenarios.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string resolve_out_dir(const std::string& cli_out, const std::string& cfg_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("PDPSIM_OUT_DIR")) return env;
    return cfg_out;
}

int run_config(const std::string& path, std::optional<uint64_t> seed, int threads,
               const std::string& out_dir) {
    pdpsim::ExperimentConfig cfg;
    try {
        cfg = pdpsim::load_config(path);
    } catch (const pdpsim::config_error& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
    if (seed) cfg.seed = *seed;
    if (threads >= 0) cfg.threads = threads;
    cfg.out_dir = resolve_out_dir(out_dir, cfg.out_dir);

    try {
        const pdpsim::RunSummary s = pdpsim::run_experiment(cfg);
        std::cout << "engine " << s.engine << ": " << s.n_trajectories << " trajectories, "
                  << s.first_click.n << " clicked, no-click fraction " << s.no_click_fraction
                  << ", wall " << s.wall_seconds << " s\n";
        std::cout << "artifacts in " << cfg.out_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int run_scenario(const std::string& name, std::optional<uint64_t> seed, int threads,
                 const std::string& out_dir) {
    const pdpsim::Scenario* sc = pdpsim::find_scenario(name);
    if (!sc) {
        std::cerr << "unknown scenario '" << name << "'; see `pdpsim scenarios list`\n";
        return kExitValidation;
    }
    pdpsim::ScenarioContext ctx;
    ctx.seed = seed;
    ctx.threads = threads < 0 ? 0 : threads;
    ctx.out_dir = resolve_out_dir(out_dir, "out");
    try {
        const pdpsim::ScenarioOutcome outcome = sc->run(ctx);
        std::filesystem::create_directories(ctx.out_dir);
        const std::string result_path = ctx.out_dir + "/scenario_" + outcome.name + ".json";
        std::ofstream out(result_path);
        out << nlohmann::json{{"schema_version", 1},
                              {"name", outcome.name},
                              {"criterion", outcome.criterion},
                              {"gate", outcome.gate},
                              {"passed", outcome.passed},
                              {"metrics", outcome.metrics},
                              {"wall_seconds", outcome.wall_seconds}}
                   .dump(2)
            << "\n";
        std::cout << (outcome.passed ? "PASS" : "FAIL") << " criterion " << outcome.criterion
                  << " [" << outcome.name << "]: " << outcome.gate << "\n";
        std::cout << "  metrics: " << outcome.metrics.dump() << "\n";
        std::cout << "  result written to " << result_path << "\n";
        return outcome.passed ? 0 : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pdpsim: piecewise-deterministic detector-click simulation"};
    app.require_subcommand(1);

    std::string config_path, scenario_name, out_dir, csv_path;
    std::optional<uint64_t> seed;
    int threads = -1;
    std::vector<std::string> summaries;

    CLI::App* run = app.add_subcommand("run", "Run a config file or a named scenario");
    run->add_option("--config", config_path, "Path to a JSON experiment config");
    run->add_option("--scenario", scenario_name, "Name of a built-in scenario");
    run->add_option("--seed", seed, "Override the base RNG seed");
    run->add_option("--threads", threads, "Worker thread count (0 = hardware)");
    run->add_option("--out", out_dir, "Output directory (overrides config and PDPSIM_OUT_DIR)");

    CLI::App* validate = app.add_subcommand("validate", "Validate a config file");
    validate->add_option("--config", config_path, "Path to a JSON experiment config")->required();

    CLI::App* report = app.add_subcommand("report", "Merge summary.json files into a report");
    report->add_option("summaries", summaries, "summary.json paths")->required();
    report->add_option("--csv", csv_path, "Also write the merged table as CSV");

    CLI::App* scenarios = app.add_subcommand("scenarios", "Built-in scenario utilities");
    CLI::App* list = scenarios->add_subcommand("list", "List built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        const bool has_config = !config_path.empty();
        const bool has_scenario = !scenario_name.empty();
        if (has_config == has_scenario) {
            std::cerr << "run: exactly one of --config or --scenario is required\n";
            return kExitValidation;
        }
        return has_config ? run_config(config_path, seed, threads, out_dir)
                          : run_scenario(scenario_name, seed, threads, out_dir);
    }

    if (validate->parsed()) {
        try {
            pdpsim::load_config(config_path);
            std::cout << "ok\n";
            return 0;
        } catch (const pdpsim::config_error& e) {
            std::cerr << e.what() << "\n";
            return kExitValidation;
        }
    }

    if (report->parsed()) {
        try {
            std::cout << pdpsim::merge_report(summaries, csv_path);
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "report error: " << e.what() << "\n";
            return kExitValidation;
        }
    }

    if (scenarios->parsed()) {
        if (list->parsed()) {
            for (const auto& s : pdpsim::scenario_registry())
                std::cout << s.name << "  (criterion " << s.criterion << "): " << s.description
                          << "\n";
            return 0;
        }
        std::cerr << "scenarios: expected a subcommand (list)\n";
        return kExitValidation;
    }

    return 0;
}
