#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "doblab/scenario.hpp"

int main(int argc, char** argv) {
    using namespace doblab;
    CLI::App app{"dob-lab: disturbance-observer motion control analysis toolkit"};
    app.require_subcommand(1, 1);

    const std::map<ScenarioKind, const char*> about{
        {ScenarioKind::constraint_check, "verdict on alpha*g_dob <= g_v/2 with xi and margin"},
        {ScenarioKind::bode, "frequency response of the sensitivity or a closed loop"},
        {ScenarioKind::position_tf, "printed and block-derived position loop transfer functions"},
        {ScenarioKind::force_tf, "force loop transfer functions, zeros and poles"},
        {ScenarioKind::routh, "Routh-Hurwitz verdict for a polynomial or the configured loop"},
        {ScenarioKind::locus, "root locus over the force gain C_f"},
        {ScenarioKind::map, "stability map over one parameter axis"},
        {ScenarioKind::simulate_position, "time-domain position control run"},
        {ScenarioKind::simulate_force, "time-domain force control run against a wall"},
        {ScenarioKind::reproduce_figure, "regenerate a figure bundle (fig3, fig7, fig8, fig9, fig10)"},
    };
    std::string config_path;
    std::string out_dir = ".";
    for (const ScenarioKind kind : all_scenario_kinds()) {
        auto* sub = app.add_subcommand(to_string(kind), about.at(kind));
        sub->add_option("--config", config_path, "scenario file (key = value lines)")->required();
        sub->add_option("--out", out_dir, "output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code(ErrorClass::config);
    }

    const auto kind = parse_scenario_kind(app.get_subcommands().front()->get_name());
    Scenario scenario;
    try {
        scenario = parse_scenario(*kind, read_text_file(config_path));
    } catch (const Error& e) {
        std::cerr << "dob-lab: " << to_string(*kind) << " failed in stage 'config': " << e.what() << "\n";
        return exit_code(e.error_class());
    }
    scenario.output_dir = out_dir;
    return run_scenario(scenario, std::cout, std::cerr);
}
