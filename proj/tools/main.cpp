// tippetop command-line tool: simulation, potential analysis, period
// analysis and the verification suite.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tippetop/cli.hpp"
#include "tippetop/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Inverting tippe top: simulation and effective-potential analysis"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    std::uint64_t seed = 987654321ull;
    int jobs = 1;

    auto add_io = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config, "JSON config file")->required();
        cmd->add_option("--out", out_dir, "output directory (default .)");
    };

    auto* sim = app.add_subcommand("simulate", "integrate a rolling-and-gliding trajectory");
    add_io(sim, true);
    auto* pot = app.add_subcommand("potential", "effective-potential scan and minimum path");
    add_io(pot, true);
    auto* per = app.add_subcommand("period", "nutation period analysis over a (D, E~) grid");
    add_io(per, true);
    auto* ver = app.add_subcommand("verify", "run the property and acceptance suites");
    ver->add_option("--seed", seed, "seed for the randomized property sweeps");
    ver->add_option("--jobs", jobs, "number of worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return tippetop::cli::cmd_simulate(config, out_dir);
        if (pot->parsed()) return tippetop::cli::cmd_potential(config, out_dir);
        if (per->parsed()) return tippetop::cli::cmd_period(config, out_dir);
        const auto results = tippetop::verify::run_checks(false, seed, jobs);
        return tippetop::verify::print_table(std::cout, results);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
