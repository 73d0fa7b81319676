#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "trustgame/errors.hpp"
#include "trustgame/io.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string output;
    std::string class_name;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double debug_sigma_scale = 1.0;
};

int run(trustgame::Command cmd, const CliOverrides& ov) {
    trustgame::RunConfig cfg = trustgame::load_config_file(ov.config_path);
    cfg.command = cmd;
    if (!ov.output.empty()) cfg.output = ov.output;
    if (ov.seed_set) cfg.sim.seed = ov.seed;
    if (!ov.class_name.empty()) {
        auto cls = trustgame::eq_class_from_string(ov.class_name);
        if (!cls) {
            std::fprintf(stderr, "error: unknown class \"%s\"\n", ov.class_name.c_str());
            return 1;
        }
        cfg.class_filter = cls;
    }
    cfg.debug_sigma_scale = ov.debug_sigma_scale;
    return trustgame::run_command(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov-perfect trust/oversight inspection game: solver, "
                 "verification oracle, and simulator"};
    app.require_subcommand(1);

    CliOverrides ov;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", ov.config_path, "JSON config file")->required();
        sub->add_option("--output", ov.output, "output directory (overrides config)");
        sub->add_option("--seed", ov.seed, "RNG seed (overrides config)")
            ->each([&](const std::string&) { ov.seed_set = true; });
        sub->add_option("--class", ov.class_name, "equilibrium class filter");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve all equilibrium classes");
    add_common(solve);
    CLI::App* check = app.add_subcommand(
        "check", "verify closed forms against the grid oracle and Monte Carlo");
    add_common(check);
    check->add_option("--debug-sigma-scale", ov.debug_sigma_scale,
                      "scale sigma* before checking (diagnostics)");
    CLI::App* simulate = app.add_subcommand("simulate", "simulate equilibrium play");
    add_common(simulate);
    CLI::App* sweep = app.add_subcommand("sweep", "map equilibrium existence over (k,u)");
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 1;
    }

    try {
        if (app.got_subcommand(solve)) return run(trustgame::Command::Solve, ov);
        if (app.got_subcommand(check)) return run(trustgame::Command::Check, ov);
        if (app.got_subcommand(simulate)) return run(trustgame::Command::Simulate, ov);
        if (app.got_subcommand(sweep)) return run(trustgame::Command::Sweep, ov);
    } catch (const trustgame::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 1;
    } catch (const trustgame::ValidationError& e) {
        std::fprintf(stderr, "invalid config (%s): %s\n", e.field().c_str(), e.what());
        return 1;
    } catch (const trustgame::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
