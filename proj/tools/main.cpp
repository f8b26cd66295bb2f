#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace dlindblad;
using namespace dlindblad::cli;

int main(int argc, char** argv) {
    CLI::App app{"Damped oscillator with deformed dissipation: simulation and analytic cross-checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format_name;
    std::string final_state_path;
    std::string sweep_spec;
    std::uint64_t seed = 0;
    Fig1Options fig1;

    const std::map<std::string, ConfigCommand> config_commands = {
        {"validate", cmd_validate}, {"simulate", cmd_simulate}, {"moments", cmd_moments},
        {"steady", cmd_steady},     {"crosscheck", cmd_crosscheck}};
    const std::map<std::string, std::string> descriptions = {
        {"validate", "Check the environment constraints and the deformation range"},
        {"simulate", "Integrate the master equation and write a trajectory"},
        {"moments", "Integrate the truncated moment system (plus closed forms at T = 0)"},
        {"steady", "Steady-state populations, detailed balance and Boltzmann comparison"},
        {"crosscheck", "Run the oracle comparisons on a small configuration"}};

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "Output file (default: stdout)");
        sub->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed, "Seed for the random test states of crosscheck");
    };
    for (const auto& [name, fn] : config_commands) {
        auto* sub = app.add_subcommand(name, descriptions.at(name));
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--sweep", sweep_spec, "Run one job per value: key.path=v1,v2,...");
        add_common(sub);
        if (name == "simulate") {
            sub->add_option("--final-state", final_state_path, "Write the final density matrix as JSON");
        }
    }
    auto* fig = app.add_subcommand("fig1", "Leading-order <N>, <N^2> curves for q real, q phase and no deformation");
    fig->add_option("--tau-sq", fig1.tau_sq, "Deformation tau^2")->capture_default_str();
    fig->add_option("--n0", fig1.s0.mean_n, "<N(0)>")->capture_default_str();
    fig->add_option("--n2-0", fig1.s0.mean_n2, "<N^2(0)>")->capture_default_str();
    fig->add_option("--points", fig1.points, "Grid points on [0, lambda t max]")->capture_default_str();
    fig->add_option("--lambda-t-max", fig1.lambda_t_max, "End of the lambda t grid")->capture_default_str();
    add_common(fig);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    RunContext ctx;
    if (!out_path.empty()) ctx.out = out_path;
    if (!final_state_path.empty()) ctx.final_state = final_state_path;
    if (format_name == "csv") ctx.format = OutputFormat::Csv;
    if (format_name == "json") ctx.format = OutputFormat::Json;
    ctx.seed = seed;

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "fig1") {
        return guarded([&] { return cmd_fig1(fig1, ctx, std::cout); }, std::cerr);
    }
    const ConfigCommand command = config_commands.at(name);
    return guarded(
        [&] {
            const json config = read_json_file(config_path);
            if (!sweep_spec.empty()) {
                return run_sweep(command, config, ctx, parse_sweep(sweep_spec), std::cerr);
            }
            return command(config, ctx, std::cout);
        },
        std::cerr);
}
