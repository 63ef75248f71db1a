// Command-line front end: wigbound <command> --config run.yaml [--out dir] [--threads n]
#include <CLI11.hpp>

#include <iostream>

#include "wigbound/app.hpp"
#include "wigbound/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Wigner functions of a particle confined to an interval"};
    app.require_subcommand(1, 1);
    std::string config;
    std::string out;
    int threads = 0;
    long long seed = 0;
    app.add_option("--config", config, "run configuration (YAML)")->required();
    app.add_option("--out", out, "output directory, overrides output_dir");
    app.add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "reserved; every algorithm is deterministic");
    // Global flags may follow the subcommand.
    app.fallthrough();
    app.add_subcommand("transform", "Wigner transform and boundary-condition report");
    app.add_subcommand("spectrum", "box eigenvalues by shooting over an energy range");
    app.add_subcommand("verify", "star-genvalue residual, stationarity and conservation");
    app.add_subcommand("solve", "eigenproblem with the smoothed boundary potential");
    app.add_subcommand("trajectories", "equi-Wigner contours and approximate trajectories");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        wigbound::RunConfig cfg = wigbound::load_config(config);
        if (!out.empty()) cfg.output_dir = out;
        wigbound::set_num_threads(threads);
        return wigbound::run_command(command, cfg, std::cout);
    } catch (const wigbound::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const wigbound::InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const wigbound::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
