#include "sisctl/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

int report_failure(const sisctl::Error& e)
{
    std::cerr << "sisctl: " << e.what() << '\n';
    return sisctl::kExitConfig;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-time networked SIS epidemics with distancing control: simulate, classify, certify."};
    app.require_subcommand(1);

    std::string out_dir;
    std::optional<std::uint64_t> seed;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", out_dir, "Directory for artifacts (overrides outputs.directory)");
        cmd->add_option("--seed", seed, "Master seed (overrides the config seed)");
    };

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("config", config_path, "Scenario JSON file")->required();
    add_common(run);

    std::string grid_path;
    auto* sweep = app.add_subcommand("sweep", "Run a (beta, gamma) grid on one network and one x0");
    sweep->add_option("config", config_path, "Base scenario JSON file")->required();
    sweep->add_option("--grid", grid_path, "Grid JSON file")->required();
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : sisctl::kExitConfig;
    }

    try {
        sisctl::ScenarioConfig config = sisctl::load_scenario_config(config_path);
        if (!out_dir.empty())
            config.outputs.directory = out_dir;
        if (seed)
            config.seed = *seed;

        if (run->parsed()) {
            const sisctl::ScenarioSummary summary = sisctl::run_scenario(config);
            std::cout << sisctl::to_json(summary).dump(2) << '\n';
            for (const auto& m : summary.messages)
                std::cerr << m << '\n';
            return summary.exit_code;
        }

        const auto grid = sisctl::load_grid(grid_path);
        const sisctl::SweepTable table = sisctl::sweep(config, grid, config.seed);
        std::cout << sisctl::to_json(table).dump(2) << '\n';
        return table.exit_code;
    } catch (const sisctl::Error& e) {
        return report_failure(e);
    }
}
