// g2lab verify: run verification suites and write a JSON or CSV report.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "g2lab/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks of G2 moduli geometry on model families"};
    app.require_subcommand(1);
    CLI::App* verify = app.add_subcommand("verify", "Run verification suites and emit a report");

    g2lab::ConfigOverrides flags;
    std::string config_path;
    std::vector<std::string> suites;
    std::string model, out, format;
    std::uint64_t seed = 0;
    double fd_step = 0.0, tol = 0.0;

    auto* suite_opt = verify->add_option("--suite", suites, "kernel, g2, flat7, full35, t3k3, period or all")->delimiter(',');
    auto* model_opt = verify->add_option("--model", model, "flat7, full35 or t3k3");
    auto* seed_opt = verify->add_option("--seed", seed, "Seed (falls back to G2LAB_SEED)");
    auto* step_opt = verify->add_option("--fd-step", fd_step, "Finite-difference step for every jet order");
    auto* tol_opt = verify->add_option("--tol", tol, "Multiplier applied to every tolerance");
    auto* config_opt = verify->add_option("--config", config_path, "JSON config file");
    auto* out_opt = verify->add_option("--out", out, "Report path (standard output if omitted)");
    auto* format_opt = verify->add_option("--format", format, "json or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*suite_opt) flags.suites = suites;
    if (*model_opt) flags.model = model;
    if (*seed_opt) flags.seed = seed;
    if (*step_opt) flags.fd_step = fd_step;
    if (*tol_opt) flags.tol = tol;
    if (*out_opt) flags.out = out;
    if (*format_opt) flags.format = format;

    g2lab::RunConfig cfg;
    try {
        cfg = g2lab::resolve_config(*config_opt ? std::optional<std::string>(config_path) : std::nullopt, flags,
                                    std::getenv("G2LAB_SEED"));
    } catch (const g2lab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return g2lab::run(cfg, std::cout, std::cerr);
}
