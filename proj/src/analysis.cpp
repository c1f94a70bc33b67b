#include "aronsson/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aronsson/rng.hpp"
#include "fd_common.hpp"

namespace aronsson {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::unique: return "Unique";
        case Verdict::absolute_minimizer_only: return "AbsoluteMinimizerOnly";
        case Verdict::value_function_only: return "ValueFunctionOnly";
        case Verdict::intermediate: return "Intermediate";
    }
    return "?";
}

namespace {

// Union-find over activated interior cells with member lists (small-to-large).
struct Components {
    std::vector<std::int32_t> parent;  // -1: inactive
    std::vector<double> min_value;
    std::vector<char> tainted;  // closure touches the boundary collar
    std::vector<std::vector<std::uint32_t>> members;

    explicit Components(std::size_t n)
        : parent(n, -1), min_value(n, 0), tainted(n, 0), members(n) {}

    bool active(std::size_t c) const { return parent[c] >= 0; }

    std::size_t find(std::size_t c) {
        while (parent[c] != static_cast<std::int32_t>(c)) {
            parent[c] = parent[parent[c]];
            c = parent[c];
        }
        return c;
    }

    void activate(std::size_t c, double v, bool taint) {
        parent[c] = static_cast<std::int32_t>(c);
        min_value[c] = v;
        tainted[c] = taint;
        members[c] = {static_cast<std::uint32_t>(c)};
    }

    std::size_t merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (members[a].size() < members[b].size()) std::swap(a, b);
        parent[b] = static_cast<std::int32_t>(a);
        min_value[a] = std::min(min_value[a], min_value[b]);
        tainted[a] = tainted[a] || tainted[b];
        members[a].insert(members[a].end(), members[b].begin(), members[b].end());
        members[b].clear();
        members[b].shrink_to_fit();
        return a;
    }
};

std::vector<std::uint32_t> axis_neighbors(const Grid& g, std::uint32_t c) {
    std::vector<std::uint32_t> out;
    int ix = g.ix_of(c), iy = g.iy_of(c);
    auto push = [&](int jx, int jy) {
        if (jx < 0 || jx >= g.nx || jy < 0 || jy >= g.ny) return;
        out.push_back(static_cast<std::uint32_t>(g.cell(jx, jy)));
    };
    push(ix - 1, iy);
    push(ix + 1, iy);
    if (g.dim() == 2) {
        push(ix, iy - 1);
        push(ix, iy + 1);
    }
    return out;
}

bool boundary_adjacent(const Grid& g, std::uint32_t c) {
    for (std::uint32_t n : axis_neighbors(g, c))
        if (g.cls[n] == NodeClass::boundary) return true;
    return false;
}

}  // namespace

namespace {

// Activates interior cells in ascending value order; just before value t the
// active set is exactly {u < t}. A clean (collar-avoiding) component is
// recorded the moment it would touch the collar, i.e. at its death
// threshold. Recorded in death order.
std::vector<Well> watershed_basins(const GridFunction& u, double well_tol) {
    const Grid& g = u.grid();
    std::vector<std::uint32_t> order(g.interior.begin(), g.interior.end());
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return u[a] < u[b]; });

    Components comp(g.cells());
    std::vector<Well> wells;

    for (std::uint32_t c : order) {
        double t = u[c];
        bool self_taint = boundary_adjacent(g, c);
        std::vector<std::size_t> roots;
        for (std::uint32_t n : axis_neighbors(g, c)) {
            if (g.cls[n] != NodeClass::interior || !comp.active(n)) continue;
            std::size_t r = comp.find(n);
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
        bool any_taint = self_taint;
        for (std::size_t r : roots) any_taint = any_taint || comp.tainted[r];
        if (any_taint) {
            for (std::size_t r : roots) {
                if (comp.tainted[r]) continue;
                if (t - comp.min_value[r] > well_tol) {
                    Well w;
                    w.cells = comp.members[r];
                    std::sort(w.cells.begin(), w.cells.end());
                    w.threshold = t;
                    w.witness_min = comp.min_value[r];
                    wells.push_back(std::move(w));
                }
            }
        }
        comp.activate(c, t, any_taint);
        std::size_t root = c;
        for (std::size_t r : roots) root = comp.merge(root, r);
        comp.tainted[comp.find(root)] = any_taint || comp.tainted[comp.find(root)];
    }
    return wells;
}

}  // namespace

std::vector<Well> detect_wells(const GridFunction& u, const AnalysisParams& params) {
    auto wells = watershed_basins(u, params.well_tol_rel * u.range());
    std::sort(wells.begin(), wells.end(),
              [](const Well& a, const Well& b) { return a.cells.front() < b.cells.front(); });
    return wells;
}

int fill_basins(GridFunction& u) {
    int filled = 0;
    for (int round = 0; round < 8; ++round) {
        auto basins = watershed_basins(u, 0.0);
        if (basins.empty()) break;
        // Death order: nested basins are lifted inside-out.
        for (const auto& b : basins)
            for (std::uint32_t c : b.cells)
                if (u[c] < b.threshold) u[c] = b.threshold;
        filled += static_cast<int>(basins.size());
    }
    return filled;
}

std::vector<FlatPiece> detect_flat_pieces(const GridFunction& u, const AnalysisParams& params) {
    const Grid& g = u.grid();
    double flat_tol = params.flat_tol_rel * u.range();

    // Flat nodes: local oscillation over the node's h-neighborhood below tol.
    std::vector<char> flat(g.cells(), 0);
    for (std::uint32_t c : g.interior) {
        double lo = u[c], hi = u[c];
        for (std::uint32_t n : axis_neighbors(g, c)) {
            if (g.cls[n] == NodeClass::exterior) continue;
            lo = std::min(lo, u[n]);
            hi = std::max(hi, u[n]);
        }
        flat[c] = (hi - lo) <= flat_tol;
    }

    // Ball offsets for the r_min test.
    double R = params.r_min_cells;
    double R2 = R * R * (1.0 + 1e-9) + 1e-9;
    int kR = static_cast<int>(std::floor(std::sqrt(R2)));
    std::vector<std::pair<int, int>> ball;
    int klo = g.dim() == 1 ? 0 : -kR;
    int khi = g.dim() == 1 ? 0 : kR;
    for (int dy = klo; dy <= khi; ++dy)
        for (int dx = -kR; dx <= kR; ++dx)
            if (dx * dx + dy * dy <= R2) ball.push_back({dx, dy});

    std::vector<char> seen(g.cells(), 0);
    std::vector<FlatPiece> out;
    for (std::uint32_t start : g.interior) {
        if (!flat[start] || seen[start]) continue;
        // BFS over flat interior nodes.
        std::vector<std::uint32_t> comp{start};
        seen[start] = 1;
        for (std::size_t qi = 0; qi < comp.size(); ++qi) {
            for (std::uint32_t n : axis_neighbors(g, comp[qi])) {
                if (seen[n] || !flat[n] || g.cls[n] != NodeClass::interior) continue;
                seen[n] = 1;
                comp.push_back(n);
            }
        }
        std::sort(comp.begin(), comp.end());
        std::vector<char> member(g.cells(), 0);
        for (std::uint32_t c : comp) member[c] = 1;

        bool has_ball = false;
        for (std::uint32_t c : comp) {
            int ix = g.ix_of(c), iy = g.iy_of(c);
            bool fits = true;
            for (auto [dx, dy] : ball) {
                int jx = ix + dx, jy = iy + dy;
                if (jx < 0 || jx >= g.nx || jy < 0 || jy >= g.ny ||
                    !member[g.cell(jx, jy)]) {
                    fits = false;
                    break;
                }
            }
            if (fits) {
                has_ball = true;
                break;
            }
        }
        if (!has_ball) continue;

        FlatPiece fp;
        fp.cells = comp;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::uint32_t c : comp) {
            lo = std::min(lo, u[c]);
            hi = std::max(hi, u[c]);
        }
        fp.height = 0.5 * (lo + hi);

        // Inradius: max over members of the distance to the nearest
        // non-member cell (ring scan).
        std::vector<std::uint32_t> ring;
        for (std::uint32_t c : comp)
            for (std::uint32_t n : axis_neighbors(g, c))
                if (!member[n]) ring.push_back(n);
        std::sort(ring.begin(), ring.end());
        ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
        double best = 0.0;
        for (std::uint32_t c : comp) {
            int ix = g.ix_of(c), iy = g.iy_of(c);
            double dmin = std::numeric_limits<double>::infinity();
            for (std::uint32_t n : ring) {
                double dx = (g.ix_of(n) - ix);
                double dy = (g.iy_of(n) - iy);
                dmin = std::min(dmin, dx * dx + dy * dy);
            }
            best = std::max(best, dmin);
        }
        fp.inradius = ring.empty() ? std::numeric_limits<double>::infinity()
                                   : std::sqrt(best) * g.h();
        out.push_back(std::move(fp));
    }
    return out;
}

Classification classify(const GridFunction& u, const AnalysisParams& params) {
    Classification c;
    c.has_wells = !detect_wells(u, params).empty();
    c.has_flats = !detect_flat_pieces(u, params).empty();
    if (c.has_wells && c.has_flats)
        c.verdict = Verdict::intermediate;
    else if (c.has_wells)
        c.verdict = Verdict::value_function_only;
    else if (c.has_flats)
        c.verdict = Verdict::absolute_minimizer_only;
    else
        c.verdict = Verdict::unique;
    return c;
}

MaxPrincipleCheck check_max_principle(const GridFunction& u, double tol) {
    const Grid& g = u.grid();
    double bmax = -std::numeric_limits<double>::infinity(), bmin = -bmax;
    for (std::uint32_t c : g.boundary) {
        bmax = std::max(bmax, u[c]);
        bmin = std::min(bmin, u[c]);
    }
    MaxPrincipleCheck r;
    r.margin = bmax - u.max_interior();
    r.below_min = std::max(0.0, bmin - u.min_interior());
    r.ok = r.margin >= -tol;
    return r;
}

OrderingCheck check_ordering(const GridFunction& u_min, const GridFunction& u_max, double tol) {
    const Grid& a = u_min.grid();
    const Grid& b = u_max.grid();
    if (a.nx != b.nx || a.ny != b.ny) throw GridError("grid mismatch in check_ordering");
    OrderingCheck r;
    double worst = -std::numeric_limits<double>::infinity();
    double gap = worst;
    for (std::uint32_t c : a.interior) {
        worst = std::max(worst, u_min[c] - u_max[c]);
        gap = std::max(gap, u_max[c] - u_min[c]);
    }
    r.worst_violation = worst;
    r.max_gap = std::max(gap, 0.0);
    r.ok = worst <= tol;
    return r;
}

CellRect full_rect(const Grid& g) { return {0, g.nx - 1, 0, g.ny - 1}; }

double esssup_hamiltonian(const GridFunction& u, const CellRect& V) {
    const Grid& g = u.grid();
    std::span<const double> v = u.values();
    double ess = -std::numeric_limits<double>::infinity();
    int jy0 = g.dim() == 1 ? 0 : std::max(V.iy0, 0);
    int jy1 = g.dim() == 1 ? 0 : std::min(V.iy1, g.ny - 1);
    for (int iy = jy0; iy <= jy1; ++iy)
        for (int ix = std::max(V.ix0, 0); ix <= std::min(V.ix1, g.nx - 1); ++ix) {
            if (g.cls[g.cell(ix, iy)] != NodeClass::interior) continue;
            ess = std::max(ess, detail::hamiltonian_at(g, v, ix, iy));
        }
    return ess;
}

namespace {

// Competitor base: v = u outside V, smooth interpolant of u's ring values
// inside V (averaging sweeps with everything outside V pinned).
GridFunction ring_interpolant(const GridFunction& u, const CellRect& V) {
    const Grid& g = u.grid();
    GridFunction v = u;
    std::vector<std::uint32_t> inside;
    for (int iy = V.iy0; iy <= V.iy1; ++iy)
        for (int ix = V.ix0; ix <= V.ix1; ++ix) {
            std::size_t c = g.cell(ix, iy);
            if (g.cls[c] == NodeClass::interior) inside.push_back(static_cast<std::uint32_t>(c));
        }
    for (int sweep = 0; sweep < 400; ++sweep) {
        double delta = 0.0;
        for (std::uint32_t c : inside) {
            double acc = v[c - 1] + v[c + 1];
            int cnt = 2;
            if (g.dim() == 2) {
                acc += v[c - g.nx] + v[c + g.nx];
                cnt = 4;
            }
            double nv = acc / cnt;
            delta = std::max(delta, std::fabs(nv - v[c]));
            v[c] = nv;
        }
        if (delta < 1e-12) break;
    }
    return v;
}

}  // namespace

AbsMinCheck check_absolute_minimizing(const GridFunction& u, const AbsMinParams& params) {
    const Grid& g = u.grid();
    AbsMinCheck rep;
    rep.trials = params.trials;
    rep.esssup_whole = esssup_hamiltonian(u, full_rect(g));
    double amp_scale = 0.5 * std::max(u.range(), 1e-6);

    SplitMix64 rng(params.seed);
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < params.trials; ++trial) {
        // Random interior sub-rectangle at least 5 cells wide per axis.
        CellRect V;
        if (g.nx - 2 < 5) break;
        V.ix0 = static_cast<int>(rng.rangei(1, g.nx - 2 - 4));
        V.ix1 = static_cast<int>(rng.rangei(V.ix0 + 4, g.nx - 2));
        if (g.dim() == 2) {
            if (g.ny - 2 < 5) break;
            V.iy0 = static_cast<int>(rng.rangei(1, g.ny - 2 - 4));
            V.iy1 = static_cast<int>(rng.rangei(V.iy0 + 4, g.ny - 2));
        }
        double ess_u = esssup_hamiltonian(u, V);
        if (!std::isfinite(ess_u)) continue;  // V missed the interior (disc corners)

        // Bump-modified interpolants of u's ring values: k = 0 is the plain
        // interpolant; further competitors add one random bump each,
        // supported strictly inside V so v == u on the ring.
        GridFunction base = ring_interpolant(u, V);
        GridFunction v = base;
        for (int k = 0; k < params.perturbations; ++k) {
            ++rep.perturbations_total;
            v = base;
            if (k > 0) {
                int cx = static_cast<int>(rng.rangei(V.ix0 + 1, V.ix1 - 1));
                int cy = g.dim() == 2 ? static_cast<int>(rng.rangei(V.iy0 + 1, V.iy1 - 1)) : 0;
                int max_r = std::min(cx - V.ix0, V.ix1 - cx);
                if (g.dim() == 2) max_r = std::min({max_r, cy - V.iy0, V.iy1 - cy});
                if (max_r < 1) continue;
                double rho = rng.uniform(1.0, max_r + 0.999);
                double amp = rng.uniform(-amp_scale, amp_scale);
                int ir = static_cast<int>(rho);
                for (int dy = g.dim() == 2 ? -ir : 0; dy <= (g.dim() == 2 ? ir : 0); ++dy)
                    for (int dx = -ir; dx <= ir; ++dx) {
                        double d = std::sqrt(static_cast<double>(dx) * dx +
                                             static_cast<double>(dy) * dy);
                        if (d >= rho) continue;
                        std::size_t cc = g.cell(cx + dx, cy + dy);
                        if (g.cls[cc] != NodeClass::interior) continue;
                        double s = std::cos(0.5 * M_PI * d / rho);
                        v[cc] += amp * s * s;
                    }
            }
            double ess_v = esssup_hamiltonian(v, V);
            worst = std::max(worst, ess_u - ess_v);
        }
    }
    rep.worst_beat = std::isfinite(worst) ? worst : 0.0;
    rep.beaten = rep.worst_beat > params.slack;
    return rep;
}

}  // namespace aronsson
