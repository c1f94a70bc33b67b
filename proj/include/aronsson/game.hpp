#pragma once

#include <utility>

#include "aronsson/grid.hpp"
#include "aronsson/report.hpp"

namespace aronsson {

/// Value-iteration parameters for the tug-of-war dynamic programming
/// operator T(u) = 1/2(max + min over the eps-ball) - eps^2 tau / 2.
struct GameParams {
    double eps = 0.1;     // game step length, >= grid spacing
    double tol = 1e-8;    // sup-norm stopping threshold
    long max_iter = 200000;

    enum class Init { boundary_max, boundary_min, supplied };
    Init init = Init::boundary_max;
    const GridFunction* initial = nullptr;  // for Init::supplied

    enum class Sweep { jacobi, gauss_seidel };
    Sweep sweep = Sweep::gauss_seidel;

    int threads = 1;  // jacobi only; gauss-seidel is single-writer
};

/// One application of the DPP operator at an interior node. Boundary nodes
/// in the stencil contribute the g values stored in u.
double dpp_update(const GridFunction& u, std::size_t cell, double eps, double tau);

/// Iterates the DPP operator to its fixed point: the discrete continuum
/// value function, i.e. the minimal viscosity solution for tau > 0. For
/// tau < 0 solves (-g, -tau) and negates (roles of maximal/minimal swap;
/// recorded in the report). tau = 0 is the infinity-Laplacian case.
std::pair<GridFunction, SolveReport> value_iteration(const Problem& problem,
                                                     const GameParams& params);

/// Per interior node, u(node) - T(u)(node). A discrete supersolution keeps
/// this field >= -o(eps^2); on flat regions it equals +eps^2 tau / 2.
GridFunction supersolution_residual(const GridFunction& u, double eps, double tau);

}  // namespace aronsson
