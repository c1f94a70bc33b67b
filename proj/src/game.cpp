#include "aronsson/game.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>

#include "aronsson/kernels.hpp"
#include "aronsson/parallel.hpp"

namespace aronsson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dual-view padded lattice for the windowed max/min sweeps: vmax carries
/// -inf at non-node slots, vmin +inf, so window kernels never need masks.
struct SweepState {
    const Grid* grid = nullptr;
    StencilShape shape;
    int pad = 0, stride = 0;
    double shift = 0.0;
    std::vector<double> vmax, vmin, nmax, nmin;
    std::vector<std::pair<int, std::vector<int>>> groups;  // (halfwidth, dy offsets)
    std::vector<char> row_has_interior;

    std::size_t idx(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * stride + ix + pad;
    }

    void init(const Grid& g, const StencilShape& s, double shift_, const GridFunction& u0) {
        grid = &g;
        shape = s;
        shift = shift_;
        pad = s.k;
        stride = g.nx + 2 * pad;
        std::size_t total = static_cast<std::size_t>(stride) * g.ny;
        vmax.assign(total, -kInf);
        vmin.assign(total, kInf);
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                std::size_t c = g.cell(ix, iy);
                if (g.cls[c] == NodeClass::exterior) continue;
                vmax[idx(ix, iy)] = vmin[idx(ix, iy)] = u0[c];
            }
        nmax = vmax;
        nmin = vmin;

        int klo = g.dim() == 1 ? 0 : -s.k;
        int khi = g.dim() == 1 ? 0 : s.k;
        for (int dy = klo; dy <= khi; ++dy) {
            int w = s.halfwidth[g.dim() == 1 ? s.k : dy + s.k];
            if (w < 0) continue;
            auto it = std::find_if(groups.begin(), groups.end(),
                                   [&](const auto& gw) { return gw.first == w; });
            if (it == groups.end())
                groups.push_back({w, {dy}});
            else
                it->second.push_back(dy);
        }

        row_has_interior.assign(g.ny, 0);
        for (std::uint32_t c : g.interior) row_has_interior[g.iy_of(c)] = 1;
    }

    /// T(u) for one output row into rowbuf[pad .. pad+nx).
    void apply_row(int j, const kern::KernelTable& K, double* gmax, double* gmin, double* wmax,
                   double* wmin, double* amax, double* amin, double* rowbuf) const {
        const Grid& g = *grid;
        std::fill(amax, amax + stride, -kInf);
        std::fill(amin, amin + stride, kInf);
        for (const auto& [w, dys] : groups) {
            bool any = false;
            for (int dy : dys) {
                int jj = j + dy;
                if (jj < 0 || jj >= g.ny) continue;
                const double* rmax = vmax.data() + static_cast<std::size_t>(jj) * stride;
                const double* rmin = vmin.data() + static_cast<std::size_t>(jj) * stride;
                if (!any) {
                    std::memcpy(gmax, rmax, sizeof(double) * stride);
                    std::memcpy(gmin, rmin, sizeof(double) * stride);
                    any = true;
                } else {
                    K.join_max(gmax, rmax, stride);
                    K.join_min(gmin, rmin, stride);
                }
            }
            if (!any) continue;
            K.window_max(gmax + pad, wmax + pad, g.nx, w);
            K.window_min(gmin + pad, wmin + pad, g.nx, w);
            K.join_max(amax + pad, wmax + pad, g.nx);
            K.join_min(amin + pad, wmin + pad, g.nx);
        }
        K.avg_shift(amax + pad, amin + pad, shift, rowbuf + pad, g.nx);
    }

    /// One Jacobi sweep (or, with commit=false, a residual measurement).
    /// Returns sup |T(u) - u| over interior nodes.
    double jacobi_sweep(int threads, bool commit) {
        const Grid& g = *grid;
        const kern::KernelTable& K = kern::active_table();
        std::vector<double> row_delta(g.ny, 0.0);
        parallel_chunks(threads, g.ny, [&](int jb, int je) {
            std::vector<double> scratch(6 * static_cast<std::size_t>(stride));
            double* gmax = scratch.data();
            double* gmin = gmax + stride;
            double* wmax = gmin + stride;
            double* wmin = wmax + stride;
            double* amax = wmin + stride;
            double* amin = amax + stride;
            std::vector<double> rowbuf(stride);
            for (int j = jb; j < je; ++j) {
                if (!row_has_interior[j]) continue;
                apply_row(j, K, gmax, gmin, wmax, wmin, amax, amin, rowbuf.data());
                const NodeClass* cls = g.cls.data() + static_cast<std::size_t>(j) * g.nx;
                double d = 0.0;
                for (int ix = 0; ix < g.nx; ++ix) {
                    if (cls[ix] != NodeClass::interior) continue;
                    std::size_t p = idx(ix, j);
                    double nv = rowbuf[ix + pad];
                    d = std::max(d, std::fabs(nv - vmax[p]));
                    if (commit) nmax[p] = nmin[p] = nv;
                }
                row_delta[j] = d;
            }
        });
        if (commit) {
            // Boundary/exterior slots agree in both buffers from init, and
            // every interior slot is rewritten each sweep, so a plain swap
            // keeps both views consistent.
            vmax.swap(nmax);
            vmin.swap(nmin);
        }
        double delta = 0.0;
        for (double d : row_delta) delta = std::max(delta, d);
        return delta;
    }

    /// One in-place Gauss-Seidel sweep over the fixed interior order
    /// (ascending cells when backward=false, descending otherwise).
    double gs_sweep(bool backward) {
        const Grid& g = *grid;
        double delta = 0.0;
        auto update = [&](std::uint32_t c) {
            int ix = g.ix_of(c), iy = g.iy_of(c);
            double mx = -kInf, mn = kInf;
            int klo = g.dim() == 1 ? 0 : -shape.k;
            int khi = g.dim() == 1 ? 0 : shape.k;
            for (int dy = klo; dy <= khi; ++dy) {
                int jj = iy + dy;
                if (jj < 0 || jj >= g.ny) continue;
                int w = shape.halfwidth[g.dim() == 1 ? shape.k : dy + shape.k];
                if (w < 0) continue;
                const double* rmax = vmax.data() + static_cast<std::size_t>(jj) * stride + pad;
                const double* rmin = vmin.data() + static_cast<std::size_t>(jj) * stride + pad;
                for (int t = ix - w; t <= ix + w; ++t) {
                    if (rmax[t] > mx) mx = rmax[t];
                    if (rmin[t] < mn) mn = rmin[t];
                }
            }
            double nv = 0.5 * (mx + mn) - shift;
            std::size_t p = idx(ix, iy);
            delta = std::max(delta, std::fabs(nv - vmax[p]));
            vmax[p] = vmin[p] = nv;
        };
        if (!backward)
            for (std::uint32_t c : g.interior) update(c);
        else
            for (auto it = g.interior.rbegin(); it != g.interior.rend(); ++it) update(*it);
        return delta;
    }

    void extract(GridFunction& out) const {
        const Grid& g = *grid;
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                std::size_t c = g.cell(ix, iy);
                if (g.cls[c] != NodeClass::exterior) out[c] = vmax[idx(ix, iy)];
            }
    }
};

BoundaryData negated(const BoundaryData& g) {
    BoundaryData out = g;
    for (double& v : out.values) v = -v;
    out.expr_src = "-(" + g.expr_src + ")";
    return out;
}

}  // namespace

double dpp_update(const GridFunction& u, std::size_t cell, double eps, double tau) {
    const Grid& g = u.grid();
    if (g.cls[cell] != NodeClass::interior)
        throw SolverError("dpp_update requires an interior node");
    double mx = -kInf, mn = kInf;
    for (std::uint32_t s : ball_stencil(g, cell, eps)) {
        double v = u[s];
        if (v > mx) mx = v;
        if (v < mn) mn = v;
    }
    return 0.5 * (mx + mn) - 0.5 * eps * eps * tau;
}

GridFunction supersolution_residual(const GridFunction& u, double eps, double tau) {
    GridFunction res(u.grid_ptr(), 0.0);
    for (std::uint32_t c : u.grid().interior) res[c] = u[c] - dpp_update(u, c, eps, tau);
    return res;
}

std::pair<GridFunction, SolveReport> value_iteration(const Problem& problem,
                                                     const GameParams& params) {
    const Grid& g = *problem.grid;
    if (problem.g.values.size() != g.boundary.size())
        throw SolverError("boundary data is not sampled on this grid");
    if (!std::isfinite(problem.tau)) throw SolverError("tau must be finite");
    if (!(params.tol > 0.0)) throw SolverError("tol must be positive");
    if (params.max_iter < 1) throw SolverError("max_iter must be >= 1");

    if (problem.tau < 0.0) {
        // Remark-1.2 sign normalization: solve (-g, -tau), negate. The value
        // function of the original problem is then the maximal solution.
        Problem neg{problem.grid, negated(problem.g), -problem.tau};
        auto [u, rep] = value_iteration(neg, params);
        for (std::uint32_t c : g.interior) u[c] = -u[c];
        for (std::uint32_t c : g.boundary) u[c] = -u[c];
        rep.sign_swapped = true;
        return {std::move(u), std::move(rep)};
    }

    auto t0 = std::chrono::steady_clock::now();
    StencilShape shape = StencilShape::make(params.eps, g.h());

    GridFunction u0(problem.grid, 0.0);
    switch (params.init) {
        case GameParams::Init::boundary_max:
            for (std::uint32_t c : g.interior) u0[c] = problem.g.max_value();
            break;
        case GameParams::Init::boundary_min:
            for (std::uint32_t c : g.interior) u0[c] = problem.g.min_value();
            break;
        case GameParams::Init::supplied:
            if (!params.initial) throw SolverError("Init::supplied without an initial function");
            u0 = *params.initial;
            break;
    }
    u0.impose_boundary(problem.g);
    if (!u0.all_finite()) throw SolverError("initial iterate has non-finite values");

    SweepState st;
    st.init(g, shape, 0.5 * params.eps * params.eps * problem.tau, u0);

    SolveReport rep;
    rep.solver = "game";
    rep.eps = params.eps;
    rep.sweep = params.sweep == GameParams::Sweep::jacobi ? "jacobi" : "gauss-seidel";
    rep.threads = params.threads;

    double delta = kInf;
    long m = 0;
    bool converged = false;
    double residual = kInf;
    while (m < params.max_iter) {
        ++m;
        delta = params.sweep == GameParams::Sweep::jacobi
                    ? st.jacobi_sweep(params.threads, true)
                    : st.gs_sweep(m % 2 == 0);
        if (!std::isfinite(delta))
            throw SolverError("NaN/overflow during value iteration at sweep " + std::to_string(m));
        if (delta < params.tol) {
            residual = st.jacobi_sweep(params.threads, false);
            if (residual < params.tol) {
                converged = true;
                break;
            }
        }
    }
    if (!converged) residual = st.jacobi_sweep(params.threads, false);

    rep.converged = converged;
    if (!converged) rep.reason = "max_iter exhausted before tol";
    rep.iterations = m;
    rep.residual = residual;
    rep.sup_change = delta;
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    GridFunction out(problem.grid, 0.0);
    st.extract(out);
    out.impose_boundary(problem.g);
    return {std::move(out), std::move(rep)};
}

}  // namespace aronsson
