#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "spinlab/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spinlab scenario runner: front geometry, control curves, and the reduced "
                 "scalar flow, with CSV/JSON artifacts per run"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run one scenario from a JSON config");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "JSON scenario config file")->required();
    double eps_override = 0.0;
    double delta_override = 0.0;
    int grid_override = 0;
    std::string out_override;
    auto* opt_eps = run_cmd->add_option("--epsilon", eps_override, "override epsilon");
    auto* opt_grid = run_cmd->add_option("--grid-n", grid_override, "override grid_n");
    auto* opt_delta = run_cmd->add_option("--delta", delta_override, "override delta");
    auto* opt_out = run_cmd->add_option("--out", out_override, "override output directory");

    auto* list_cmd = app.add_subcommand("list", "print the scenario names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (list_cmd->parsed()) {
        for (const auto& name : spinlab::scenario_names())
            std::printf("%s\n", name.c_str());
        return 0;
    }

    try {
        spinlab::Scenario sc = spinlab::load_scenario(config_path);
        if (opt_eps->count())
            sc.epsilon = eps_override;
        if (opt_grid->count())
            sc.grid_n = grid_override;
        if (opt_delta->count())
            sc.delta = delta_override;
        if (opt_out->count())
            sc.out_dir = out_override;

        const spinlab::ScenarioResult res = spinlab::run_scenario(sc);
        if (!res.passed) {
            std::fprintf(stderr, "failed assertions (full report in summary.csv):\n");
            for (const auto& row : res.rows)
                if (!row.pass)
                    std::fprintf(stderr, "  %s measured=%s bound=%s\n", row.name.c_str(),
                                 spinlab::format_full(row.measured).c_str(),
                                 spinlab::format_full(row.bound).c_str());
            return 2;
        }
        std::printf("%s: %zu assertions passed\n", sc.name.c_str(), res.rows.size());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
