#pragma once

#include <span>

#include "aronsson/grid.hpp"

namespace aronsson::detail {

// Edge-averaged gradient-magnitude quadrature at an interior node:
//   |Du|^2 ~ sum_axes (forward^2 + backward^2) / 2.
// Both neighbors of an interior node are nodes (interior or boundary), so
// the formula is uniform. Plain centered differences are not usable here:
// they annihilate the odd/even checkerboard mode, which an energy descent
// then exploits.
inline double grad_sq_at(const Grid& g, std::span<const double> v, int ix, int iy) {
    std::size_t c = g.cell(ix, iy);
    double h2 = g.h() * g.h();
    double fx = v[c + 1] - v[c];
    double bx = v[c] - v[c - 1];
    double q = 0.5 * (fx * fx + bx * bx) / h2;
    if (g.dim() == 2) {
        double fy = v[c + g.nx] - v[c];
        double by = v[c] - v[c - g.nx];
        q += 0.5 * (fy * fy + by * by) / h2;
    }
    return q;
}

// H(Du, u) = 1/2 |Du|^2 - u at an interior node (tau = 1 convention).
inline double hamiltonian_at(const Grid& g, std::span<const double> v, int ix, int iy) {
    return 0.5 * grad_sq_at(g, v, ix, iy) - v[g.cell(ix, iy)];
}

}  // namespace aronsson::detail
