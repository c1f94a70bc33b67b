#pragma once

#include <cstdint>
#include <string>

#include "aronsson/analysis.hpp"
#include "aronsson/game.hpp"
#include "aronsson/grid.hpp"
#include "aronsson/variational.hpp"

namespace aronsson {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key=value run configuration (see README for the key table).
struct RunConfig {
    DomainSpec domain;
    std::string g_expr = "0";
    double tau = 1.0;

    GameParams game;   // game.eps defaults to 5h when not given
    bool eps_given = false;
    LpParams lp;
    AnalysisParams analysis;

    int exact1d_count = 5;
    double sup_tol = 0.05;            // verify: sup-norm tolerance for cross-checks
    double residual_eps = 0.0;        // verify: supersolution-residual step (0 -> game.eps)
    AbsMinParams absmin;

    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 1;
    std::string kernels = "auto";

    /// Applies defaults that depend on other keys (eps = 5h) and validates.
    void finalize();
};

RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig parse_config_file(const std::string& path);

}  // namespace aronsson
