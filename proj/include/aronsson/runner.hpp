#pragma once

#include <string>

#include "aronsson/config.hpp"

namespace aronsson {

/// Exit codes shared by the CLI: 0 success, 1 hard error, 2 config error,
/// 3 solver did not converge or a check failed (artifacts still written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotConverged = 3;

Problem make_problem(const RunConfig& cfg);

int run_solve_game(const RunConfig& cfg, const std::string& out_dir, bool zero_wall = false);
int run_solve_variational(const RunConfig& cfg, const std::string& out_dir,
                          bool zero_wall = false);
int run_exact1d(const RunConfig& cfg, const std::string& out_dir);
int run_classify(const std::string& csv_path, const AnalysisParams& params,
                 const std::string& out_dir);

/// Runs both solvers plus the full check battery on every *.cfg fixture in
/// `fixtures_dir`, writing per-fixture artifacts under out_dir/<stem>/.
/// Deterministic: identical inputs and seed give byte-identical artifacts.
int run_verify(const std::string& fixtures_dir, const std::string& out_dir,
               const std::uint64_t* seed_override = nullptr,
               const int* threads_override = nullptr);

}  // namespace aronsson
