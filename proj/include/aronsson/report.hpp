#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace aronsson {

inline constexpr const char* kSpecVersion = "1.0";

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LpSubReport {
    double p = 0;
    long steps = 0;
    long accepted = 0;
    long backtracks = 0;
    double final_root_energy = 0;  // (integral H^p)^(1/p)
    double scale = 0;              // max integrand used for overflow-safe accumulation
    double final_step = 0;
    bool converged = false;
};

struct SolveReport {
    std::string solver;
    bool converged = false;
    std::string reason;
    long iterations = 0;
    double residual = std::numeric_limits<double>::quiet_NaN();
    double sup_change = std::numeric_limits<double>::quiet_NaN();
    bool sign_swapped = false;  // tau < 0 handled by solving (-g, -tau) and negating
    double tau_scale = 1.0;     // lambda applied to reduce to tau = 1
    double shift = 0.0;         // boundary shift M (variational)
    bool wells_clear = true;    // variational post-condition
    double eps = std::numeric_limits<double>::quiet_NaN();  // game step length
    std::string sweep;                                      // game sweep kind
    int threads = 1;
    double wall_ms = 0.0;
    std::vector<LpSubReport> lp;
};

nlohmann::json report_json(const SolveReport& r);

}  // namespace aronsson
