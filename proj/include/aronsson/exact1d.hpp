#pragma once

#include <memory>
#include <string>
#include <vector>

#include "aronsson/grid.hpp"

namespace aronsson::exact1d {

struct Exact1DError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed-form solution of (u')^2 u'' - |u'|^2 = 0 on [l,r] with u(l)=g_l,
/// u(r)=g_r: descending parabola / flat piece / ascending parabola,
///   u(x) = c + 1/2 pos(x-m2)^2 + 1/2 pos(m1-x)^2,   pos(t) = max(t,0),
/// with vertices m1 <= m2 (possibly outside [l,r]) and flat height c.
struct ParabolaFlatSolution {
    double l = 0, r = 0;
    double m1 = 0, m2 = 0;
    double c = 0;
    double g_l = 0, g_r = 0;

    double value(double x) const;
    double derivative(double x) const;
    /// Intersection of [m1,m2] with (l,r); empty when width <= 0.
    double flat_lo() const;
    double flat_hi() const;
    bool has_interior_flat() const { return flat_hi() - flat_lo() > 1e-12; }
};

/// The one-parameter family of all such solutions for the given boundary
/// data: flat heights c in [c_min, c_max]. When the data force a single
/// monotone parabola, c_min == c_max.
class SolutionFamily {
public:
    double l, r, g_l, g_r;
    double c_min, c_max;

    bool single() const { return !(c_max > c_min); }
    ParabolaFlatSolution member(double c) const;
    ParabolaFlatSolution minimal() const { return member(c_min); }
    ParabolaFlatSolution maximal() const { return member(c_max); }
    /// count equispaced flat heights across [c_min, c_max] (count >= 2; a
    /// single-member family returns one solution).
    std::vector<ParabolaFlatSolution> enumerate(int count = 5) const;
};

SolutionFamily family(double l, double r, double g_l, double g_r);
ParabolaFlatSolution minimal(double l, double r, double g_l, double g_r);
ParabolaFlatSolution maximal(double l, double r, double g_l, double g_r);

struct PieceCheck {
    std::string piece;
    bool ok;
    double residual;
    std::string note;
};

/// Certification of a candidate solution: structural invariants, the
/// viscosity conditions for the Dirichlet form Δ∞u - |Du|² = 0, and whether
/// the function also solves the normalized form u'' = 1 (it fails on any
/// interior flat piece: the quadratic probe u(x0) + 1/4|x-x0|^2 has second
/// derivative 1/2 < 1).
struct ViscosityReport {
    bool invariants_ok = true;
    bool solves_dirichlet_form = true;
    bool solves_normalized_form = true;
    bool flat_in_interior = false;
    double flat_lo = 0, flat_hi = 0;
    std::vector<PieceCheck> checks;
};

ViscosityReport verify_viscosity(const ParabolaFlatSolution& sol);

/// Evaluates the closed form at every node of a 1D grid over [l,r].
/// Throws on grid/interval mismatch.
GridFunction sample(const ParabolaFlatSolution& sol, std::shared_ptr<const Grid> grid);

}  // namespace aronsson::exact1d
