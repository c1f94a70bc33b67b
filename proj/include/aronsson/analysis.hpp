#pragma once

#include <cstdint>
#include <vector>

#include "aronsson/grid.hpp"

namespace aronsson {

struct AnalysisParams {
    double well_tol_rel = 1e-3;  // well depth threshold, relative to range(u)
    double flat_tol_rel = 1e-6;  // local oscillation threshold, relative to range(u)
    double r_min_cells = 3.0;    // flat pieces must contain a ball of this radius (in cells)
};

/// A sublevel component {u < threshold} whose closure avoids the boundary
/// collar, with interior min strictly below the threshold.
struct Well {
    std::vector<std::uint32_t> cells;
    double threshold = 0;
    double witness_min = 0;
    double depth() const { return threshold - witness_min; }
};

/// A maximal connected set of nodes with chained local oscillation below
/// tolerance, wide enough to contain a discrete ball of radius r_min.
struct FlatPiece {
    std::vector<std::uint32_t> cells;
    double height = 0;
    double inradius = 0;
};

enum class Verdict { unique, absolute_minimizer_only, value_function_only, intermediate };
const char* to_string(Verdict v);

struct Classification {
    bool has_wells = false;
    bool has_flats = false;
    Verdict verdict = Verdict::unique;
};

std::vector<Well> detect_wells(const GridFunction& u, const AnalysisParams& params = {});
std::vector<FlatPiece> detect_flat_pieces(const GridFunction& u, const AnalysisParams& params = {});

/// Truth table: (no wells, no flats) -> unique; (no wells, flats) ->
/// absolute_minimizer_only; (wells, no flats) -> value_function_only;
/// (wells, flats) -> intermediate.
Classification classify(const GridFunction& u, const AnalysisParams& params = {});

/// Lifts every collar-avoiding sublevel basin to its spill threshold
/// (morphological hole filling). Returns the number of basins lifted.
int fill_basins(GridFunction& u);

struct MaxPrincipleCheck {
    bool ok = false;
    double margin = 0;     // max boundary g - max interior u
    double below_min = 0;  // max(0, min boundary g - min interior u)
};
MaxPrincipleCheck check_max_principle(const GridFunction& u, double tol = 1e-9);

struct OrderingCheck {
    bool ok = false;
    double worst_violation = 0;  // max(u_min - u_max), > 0 where the ordering fails
    double max_gap = 0;          // max(u_max - u_min)
};
OrderingCheck check_ordering(const GridFunction& u_min, const GridFunction& u_max, double tol);

/// Inclusive index rectangle (iy fields ignored in 1D).
struct CellRect {
    int ix0 = 0, ix1 = 0, iy0 = 0, iy1 = 0;
};
CellRect full_rect(const Grid& g);

/// Discrete esssup over the interior nodes of V of H(Dh u, u) with
/// H(p,z) = 1/2 |p|^2 - z (tau normalized to 1 by the caller).
double esssup_hamiltonian(const GridFunction& u, const CellRect& V);

struct AbsMinParams {
    int trials = 20;          // random sub-rectangles V
    int perturbations = 10;   // bump competitors per V
    std::uint64_t seed = 1;
    double slack = 0.05;      // beat margin counted as a failure
};

struct AbsMinCheck {
    int trials = 0;
    int perturbations_total = 0;
    double esssup_whole = 0;  // esssup of H(Du,u) over the whole interior
    double worst_beat = 0;    // max over competitors of esssup(u|V) - esssup(v|V)
    bool beaten = false;      // worst_beat > slack
};

/// Sampling test of the absolute-minimizer property: random compact V and
/// random bump competitors agreeing with u on the ring around V. A pass is
/// evidence, not proof.
AbsMinCheck check_absolute_minimizing(const GridFunction& u, const AbsMinParams& params = {});

}  // namespace aronsson
