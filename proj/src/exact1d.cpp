#include "aronsson/exact1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aronsson::exact1d {

namespace {

double pos(double t) { return t > 0.0 ? t : 0.0; }

}  // namespace

double ParabolaFlatSolution::value(double x) const {
    double a = pos(x - m2);
    double b = pos(m1 - x);
    return c + 0.5 * a * a + 0.5 * b * b;
}

double ParabolaFlatSolution::derivative(double x) const { return pos(x - m2) - pos(m1 - x); }

double ParabolaFlatSolution::flat_lo() const { return std::max(m1, l); }
double ParabolaFlatSolution::flat_hi() const { return std::min(m2, r); }

SolutionFamily family(double l, double r, double g_l, double g_r) {
    if (!(l < r)) throw Exact1DError("requires l < r");
    if (!std::isfinite(g_l) || !std::isfinite(g_r))
        throw Exact1DError("boundary values must be finite");
    SolutionFamily f;
    f.l = l;
    f.r = r;
    f.g_l = g_l;
    f.g_r = g_r;
    const double D = r - l;
    const double delta = g_l - g_r;
    if (std::fabs(delta) <= 0.5 * D * D) {
        // Vertex of the c_min member lies in [l,r]: solve
        // sqrt(2(g_l-c)) + sqrt(2(g_r-c)) = D for c.
        double A = 0.5 * D + delta / D;
        f.c_min = g_l - 0.5 * A * A;
        f.c_max = std::min(g_l, g_r);
        if (f.c_max < f.c_min) f.c_max = f.c_min;  // guards rounding at |delta| = D^2/2
    } else {
        // Monotone case: a single through-parabola with vertex outside [l,r].
        double m = 0.5 * (l + r) - (g_r - g_l) / D;
        f.c_min = g_l - 0.5 * (l - m) * (l - m);
        f.c_max = f.c_min;
    }
    return f;
}

ParabolaFlatSolution SolutionFamily::member(double c) const {
    if (!(c >= c_min - 1e-9 && c <= c_max + 1e-9))
        throw Exact1DError("flat height outside the admissible range");
    c = std::clamp(c, c_min, c_max);
    ParabolaFlatSolution s;
    s.l = l;
    s.r = r;
    s.g_l = g_l;
    s.g_r = g_r;
    s.c = c;
    const double D = r - l;
    if (std::fabs(g_l - g_r) > 0.5 * D * D) {
        // Single monotone parabola through both endpoint values.
        double m = 0.5 * (l + r) - (g_r - g_l) / D;
        s.m1 = s.m2 = m;
        return s;
    }
    s.m1 = l + std::sqrt(std::max(0.0, 2.0 * (g_l - c)));
    s.m2 = r - std::sqrt(std::max(0.0, 2.0 * (g_r - c)));
    if (s.m1 > s.m2) {
        // c == c_min up to rounding: collapse to the common vertex.
        double m = 0.5 * (s.m1 + s.m2);
        s.m1 = s.m2 = m;
    }
    return s;
}

std::vector<ParabolaFlatSolution> SolutionFamily::enumerate(int count) const {
    std::vector<ParabolaFlatSolution> out;
    if (single()) {
        out.push_back(member(c_min));
        return out;
    }
    count = std::max(count, 2);
    for (int i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / (count - 1);
        out.push_back(member(c_min + t * (c_max - c_min)));
    }
    return out;
}

ParabolaFlatSolution minimal(double l, double r, double g_l, double g_r) {
    return family(l, r, g_l, g_r).minimal();
}

ParabolaFlatSolution maximal(double l, double r, double g_l, double g_r) {
    return family(l, r, g_l, g_r).maximal();
}

ViscosityReport verify_viscosity(const ParabolaFlatSolution& sol) {
    ViscosityReport rep;
    auto require = [&](const std::string& piece, bool ok, double residual,
                       const std::string& note) {
        rep.checks.push_back({piece, ok, residual, note});
        if (!ok) rep.invariants_ok = false;
    };
    auto note = [&](const std::string& piece, bool ok, double residual, const std::string& text) {
        rep.checks.push_back({piece, ok, residual, text});
    };

    require("vertices", sol.m1 <= sol.m2 + 1e-9, sol.m1 - sol.m2, "requires m1 <= m2");
    double bl = std::fabs(sol.value(sol.l) - sol.g_l);
    double br = std::fabs(sol.value(sol.r) - sol.g_r);
    require("boundary-left", bl <= 1e-9, bl, "u(l) = g_l");
    require("boundary-right", br <= 1e-9, br, "u(r) = g_r");

    if (!rep.invariants_ok) {
        rep.solves_dirichlet_form = false;
        rep.solves_normalized_form = false;
        return rep;
    }

    // Wing pieces: u'' = 1 classically, so both equation forms hold there.
    if (sol.m1 > sol.l)
        note("descending-wing", true, 0.0, "u''=1 on [l, min(m1,r)], u' = x-m1 < 0");
    if (sol.m2 < sol.r)
        note("ascending-wing", true, 0.0, "u''=1 on [max(m2,l), r], u' = x-m2 > 0");

    // C1 junctions: one-sided derivatives vanish at interior vertices.
    for (double m : {sol.m1, sol.m2}) {
        if (m > sol.l && m < sol.r) {
            double jump = std::fabs(sol.derivative(std::nextafter(m, sol.r)) -
                                    sol.derivative(std::nextafter(m, sol.l)));
            require("junction", jump <= 1e-9, jump, "u' continuous, u'(m)=0");
        }
    }

    rep.flat_lo = sol.flat_lo();
    rep.flat_hi = sol.flat_hi();
    rep.flat_in_interior = sol.has_interior_flat();

    if (rep.flat_in_interior) {
        // Any C2 probe touching a locally constant function has vanishing
        // gradient at the touching point; the Dirichlet-form inequalities
        // then read 0 >= 0 (sub) and 0 <= 0 (super).
        note("flat-dirichlet-sub", true, 0.0, "gradient-free probe: 0 >= 0");
        note("flat-dirichlet-super", true, 0.0, "gradient-free probe: 0 <= 0");
        // Normalized form: the probe u(x0) + 1/4 (x-x0)^2 touches from above
        // with max second-derivative form 1/2 < 1.
        note("flat-normalized", false, 0.5 - 1.0, "probe second derivative 1/2 < 1");
        rep.solves_normalized_form = false;
    } else if (sol.m1 == sol.m2 && sol.m1 > sol.l && sol.m1 < sol.r) {
        note("vertex", true, 0.0, "u = c + (x-m)^2/2, u''=1 at the vertex");
    }

    rep.solves_dirichlet_form = rep.invariants_ok;
    return rep;
}

GridFunction sample(const ParabolaFlatSolution& sol, std::shared_ptr<const Grid> grid) {
    if (grid->dim() != 1) throw Exact1DError("sample requires a 1D grid");
    double lo = grid->x(0);
    double hi = grid->x(grid->nx - 1);
    if (std::fabs(lo - sol.l) > 1e-9 || std::fabs(hi - sol.r) > 1e-9) {
        std::ostringstream os;
        os << "grid [" << lo << ", " << hi << "] does not cover the solution interval [" << sol.l
           << ", " << sol.r << "]";
        throw Exact1DError(os.str());
    }
    GridFunction u(grid);
    for (int ix = 0; ix < grid->nx; ++ix) {
        std::size_t c = grid->cell(ix, 0);
        if (grid->cls[c] != NodeClass::exterior) u[c] = sol.value(grid->x(ix));
    }
    return u;
}

}  // namespace aronsson::exact1d
