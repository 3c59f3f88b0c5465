#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ricciflow/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ricciflow - conformal Ricci flow of singular surfaces on the flat torus"};
    app.require_subcommand(1);

    std::string scenario_ref;
    std::string out_dir;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "run a scenario file (or bundled scenario name)");
    run->add_option("scenario", scenario_ref, "scenario JSON path or bundled name")->required();
    run->add_option("--out", out_dir, "output directory (default: $RICCIFLOW_OUT/<name> or ./out/<name>)");
    run->add_option("--override", overrides, "key.path=value scenario overrides")
        ->take_all();

    std::string list_dir;
    auto* list = app.add_subcommand("list", "list bundled and custom scenarios");
    list->add_option("--dir", list_dir, "custom scenario directory (default: $RICCIFLOW_SCENARIO_DIR)");

    auto* schema = app.add_subcommand("schema", "print the scenario JSON schema");

    CLI11_PARSE(app, argc, argv);

    if (schema->parsed()) {
        std::cout << ricci::scenario_schema();
        return 0;
    }
    if (list->parsed()) {
        auto [text, warnings] = ricci::list_scenarios(list_dir);
        std::cout << text;
        (void)warnings;
        return 0;
    }

    const ricci::ScenarioResult result = ricci::run_scenario(scenario_ref, out_dir, overrides);
    if (!result.error.empty()) std::cerr << "error: " << result.error << '\n';
    for (const auto& c : result.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                  << " (value " << c.value << ", threshold " << c.threshold << ")\n";
    if (!result.output_dir.empty()) std::cout << "output: " << result.output_dir << '\n';
    return result.exit_status;
}
