#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hb/config.hpp"
#include "hb/errors.hpp"
#include "hb/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Degenerate Hessian Dirichlet problems via Bellman policy iteration"};
    app.set_version_flag("--version", "hessian-bellman 1.0.0");

    std::string command, config_path, out_dir = ".";
    long seed = -1;
    app.add_option("command", command, "one of: solve, ladder, props, audit")
        ->required()
        ->check(CLI::IsMember({"solve", "ladder", "props", "audit"}));
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_dir, "output directory (default: current directory)");
    app.add_option("--seed", seed, "override net.seed and props.seed")->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    hb::RunConfig cfg;
    try {
        cfg = hb::load_config(config_path);
    } catch (const hb::ConfigError& e) {
        std::cerr << "config error (" << e.field << "): " << e.what() << "\n";
        return 1;
    }
    return hb::run_command(command, std::move(cfg), out_dir, seed, std::cout);
}
