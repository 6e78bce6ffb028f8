#include "oscwave/scenario.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

int report(const oscwave::RunResult& result, const std::string& name) {
    for (const auto& warning : result.warnings)
        std::cerr << name << ": warning: " << warning << '\n';
    std::cout << name << ": wrote " << result.files_written.size() << " files\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wave dynamics under rapidly oscillating complex potentials"};
    app.require_subcommand(1);

    std::string target;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::optional<double> dt_override;
    std::optional<std::size_t> grid_n_override;

    CLI::App* run = app.add_subcommand("run", "Run a preset name or a config file");
    run->add_option("config", target, "preset name or JSON config path")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--set", overrides, "field override key.path=value (repeatable)");
    run->add_option("--dt", dt_override, "time step override");
    run->add_option("--grid-n", grid_n_override, "grid size override");

    CLI::App* list = app.add_subcommand("list", "List built-in presets");

    std::vector<std::string> batch_names;
    std::string batch_out;
    CLI::App* batch =
        app.add_subcommand("batch", "Run several presets, one directory each");
    batch->add_option("presets", batch_names, "preset names")->required();
    batch->add_option("--out", batch_out, "base output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is a config error
    }

    try {
        if (list->parsed()) {
            for (const auto& info : oscwave::preset_catalog())
                std::printf("%-20s %s\n", info.name.c_str(),
                            info.description.c_str());
            return 0;
        }
        if (run->parsed()) {
            oscwave::ScenarioConfig config = std::filesystem::exists(target)
                                                 ? oscwave::load_scenario_file(target)
                                                 : oscwave::preset(target);
            for (const auto& assignment : overrides)
                oscwave::apply_override(config, assignment);
            if (dt_override) config.plan.dt = *dt_override;
            if (grid_n_override) config.grid.n = *grid_n_override;
            if (!out_dir.empty()) config.outputs.directory = out_dir;
            return report(oscwave::run_scenario(config), config.name);
        }
        // batch: presets run back to back, each into its own directory
        int worst = 0;
        for (const auto& name : batch_names) {
            oscwave::ScenarioConfig config = oscwave::preset(name);
            if (!batch_out.empty())
                config.outputs.directory =
                    (std::filesystem::path(batch_out) / name).string();
            worst = std::max(worst, report(oscwave::run_scenario(config), name));
        }
        return worst;
    } catch (const oscwave::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
