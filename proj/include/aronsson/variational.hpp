#pragma once

#include <span>
#include <utility>
#include <vector>

#include "aronsson/grid.hpp"
#include "aronsson/report.hpp"

namespace aronsson {

/// L^p descent schedule and backtracking line-search parameters.
struct LpParams {
    std::vector<double> p_schedule{2, 4, 8, 16, 32, 64};
    double descent_tol = 1e-15;  // relative decrease counted as stalled
    long max_steps = 50000;      // per exponent
    double step0 = 1.0;          // initial step size
    double shrink = 0.5;         // backtracking factor
    double armijo_c = 1e-4;      // sufficient-decrease constant
    int stall_limit = 15;    // consecutive stalled steps that stop a p-stage
    long smoothing_sweeps = 5000;  // averaging sweeps building the first iterate
    int threads = 1;

    void validate() const;  // throws SolverError
};

/// (g - M, M) with M = max g over boundary nodes, so the shifted data is <= 0.
std::pair<std::vector<double>, double> shift_normalize(const BoundaryData& g);

/// Auxiliary Hamiltonian 1/2 |p|^2 - min(z, 0); always >= 1/2 |p|^2 >= 0.
double hhat_eval(std::span<const double> p_vec, double z);
inline double hhat_eval(double p_scalar, double z) {
    return hhat_eval(std::span<const double>(&p_scalar, 1), z);
}

/// h^n * sum over interior nodes of Hhat(Dh u, u)^p, accumulated as
/// sum (Hhat_i / scale)^p with scale = max Hhat_i so p = 64 stays finite.
struct EnergyValue {
    double scaled_sum = 0;  // sum (Hhat_i/scale)^p * h^n
    double scale = 0;       // max integrand
    double p = 1;
    /// (energy)^(1/p); finite for every p.
    double root() const;
    /// scale^p * scaled_sum; may overflow for large p (reported as inf).
    double value() const;
};
EnergyValue lp_energy(const GridFunction& u, double p);

/// Analytic gradient of lp_energy with respect to the interior values
/// (boundary pinned). Matches central finite differences of lp_energy.
GridFunction lp_energy_gradient(const GridFunction& u, double p);

/// Gradient descent over the p-schedule with warm starts: the discrete
/// L^p-approximation route to the absolute minimizer, i.e. the maximal
/// viscosity solution for tau > 0. Requires tau handling per the sign/scale
/// normalization (done internally; recorded in the report).
std::pair<GridFunction, SolveReport> minimize_lp(const Problem& problem, const LpParams& params);

}  // namespace aronsson
