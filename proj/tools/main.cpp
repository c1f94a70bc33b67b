#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aronsson/runner.hpp"

using namespace aronsson;

int main(int argc, char** argv) {
    CLI::App app{"aronsson: solvers and verification tools for the equation "
                 "D_inf u - tau |Du|^2 = 0"};
    app.require_subcommand(1);

    std::string config_path, out_override, input_csv, fixtures_dir;
    int threads = 0;
    std::uint64_t seed = 0;
    bool seed_given = false, threads_given = false;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        sub->add_option("--config", config_path, "run configuration file")
            ->required(config_required);
        sub->add_option("--out", out_override, "output directory (overrides out.dir)");
        sub->add_option("--threads", threads, "worker threads")->each([&](const std::string&) {
            threads_given = true;
        });
        sub->add_option("--seed", seed, "seed for the sampling checks")->each(
            [&](const std::string&) { seed_given = true; });
    };

    CLI::App* sg = app.add_subcommand("solve-game", "tug-of-war value iteration (minimal solution)");
    add_common(sg, true);
    CLI::App* sv = app.add_subcommand("solve-variational",
                                      "L^p descent for the absolute minimizer (maximal solution)");
    add_common(sv, true);
    CLI::App* se = app.add_subcommand("exact1d", "closed-form 1D solution family");
    add_common(se, true);
    CLI::App* sc = app.add_subcommand("classify", "well/flat-piece classification of a CSV field");
    sc->add_option("--input", input_csv, "GridFunction CSV")->required();
    add_common(sc, false);
    CLI::App* sf = app.add_subcommand("verify", "run the full battery on a fixture directory");
    sf->add_option("--fixtures", fixtures_dir, "directory of *.cfg fixtures")->required();
    sf->add_option("--out", out_override, "output directory")->required();
    sf->add_option("--threads", threads, "worker threads")->each([&](const std::string&) {
        threads_given = true;
    });
    sf->add_option("--seed", seed, "seed for the sampling checks")->each(
        [&](const std::string&) { seed_given = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (sf->parsed()) {
            return run_verify(fixtures_dir, out_override, seed_given ? &seed : nullptr,
                              threads_given ? &threads : nullptr);
        }

        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = parse_config_file(config_path);
        } else {
            cfg.finalize();  // defaults (classify without config)
        }
        if (seed_given) cfg.seed = seed;
        if (threads_given) {
            cfg.threads = threads;
            cfg.game.threads = threads;
            cfg.lp.threads = threads;
        }
        std::string out = out_override.empty() ? cfg.out_dir : out_override;

        if (sg->parsed()) return run_solve_game(cfg, out);
        if (sv->parsed()) return run_solve_variational(cfg, out);
        if (se->parsed()) return run_exact1d(cfg, out);
        if (sc->parsed()) return run_classify(input_csv, cfg.analysis, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitConfig;
}
