#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv)
{
    using namespace gensub::cli;
    RunConfig config;
    config.tol = default_tolerance();

    CLI::App app{"Generalized-subsystem reductions, dynamics and entanglement tests"};
    app.usage(usage());
    app.add_option("command", config.command, "command to run")->required();
    app.add_option("--input,-i", config.inputs, "input JSON file");
    app.add_option("--output,-o", config.output, "write the report here instead of stdout");
    app.add_option("--dt", config.dt, "RK4 step size")->capture_default_str();
    app.add_option("--t", config.t_final, "final time")->capture_default_str();
    app.add_option("--seed", config.seed, "random seed")->capture_default_str();
    app.add_option("--tol", config.tol, "tolerance (default 1e-8 or GENSUB_TOL)");
    app.add_option("--modes", config.modes, "number of modes for quasifree")->capture_default_str();
    app.add_option("--det-sweep", config.det_sweep, "two-boson: number of sweep rows, CSV output");
    app.add_flag("--csv", config.csv, "emit CSV where a command supports it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n' << usage();
        return kUsage;
    }
    return dispatch(config, std::cout, std::cerr);
}
