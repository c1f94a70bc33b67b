#include "aronsson/variational.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "aronsson/analysis.hpp"
#include "aronsson/kernels.hpp"
#include "fd_common.hpp"

namespace aronsson {

void LpParams::validate() const {
    if (p_schedule.empty()) throw SolverError("p_schedule must not be empty");
    double prev = 0.0;
    for (double p : p_schedule) {
        if (!(p > prev)) throw SolverError("p_schedule must be strictly increasing");
        prev = p;
    }
    if (!(p_schedule.front() >= 2.0)) throw SolverError("p_schedule must start at >= 2");
    if (!(descent_tol > 0.0) || !(step0 > 0.0) || !(shrink > 0.0 && shrink < 1.0) ||
        !(armijo_c > 0.0))
        throw SolverError("descent parameters must be positive (shrink in (0,1))");
    if (max_steps < 1) throw SolverError("max_steps must be >= 1");
}

double hhat_eval(std::span<const double> p_vec, double z) {
    double q = 0.0;
    for (double v : p_vec) q += v * v;
    return 0.5 * q - std::min(z, 0.0);
}

double EnergyValue::root() const {
    if (scale <= 0.0 || scaled_sum <= 0.0) return 0.0;
    return scale * std::pow(scaled_sum, 1.0 / p);
}

double EnergyValue::value() const {
    if (scale <= 0.0 || scaled_sum <= 0.0) return 0.0;
    return std::pow(scale, p) * scaled_sum;
}

namespace {

constexpr double kTinyScale = 1e-300;

bool integer_p(double p, long& out) {
    double r = std::round(p);
    if (std::fabs(p - r) <= 1e-9 && r >= 1.0 && r < 1e9) {
        out = static_cast<long>(r);
        return true;
    }
    return false;
}

struct EnergyCtx {
    const Grid* g;
    bool z_term;  // tau > 0 path uses Hhat = 1/2|Du|^2 - min(u,0)
    double cell_volume;

    std::vector<double> hh;            // integrand per interior node
    std::vector<double> fx, bx;        // per-axis edge differences
    std::vector<double> fy, by;
    std::vector<double> pw;            // (hh/scale)^(p or p-1) scratch

    explicit EnergyCtx(const Grid& grid, bool zt) : g(&grid), z_term(zt) {
        cell_volume = grid.dim() == 1 ? grid.h() : grid.h() * grid.h();
        std::size_t n = grid.interior.size();
        hh.resize(n);
        fx.resize(n);
        bx.resize(n);
        if (grid.dim() == 2) {
            fy.resize(n);
            by.resize(n);
        }
        pw.resize(n);
    }

    // Fills hh (and the edge differences when grads is true); returns
    // scale = max integrand.
    double integrand(const GridFunction& u, bool grads) {
        std::span<const double> v = u.values();
        double h2 = g->h() * g->h();
        double s = 0.0;
        for (std::size_t i = 0; i < g->interior.size(); ++i) {
            std::size_t c = g->interior[i];
            double f = v[c + 1] - v[c];
            double b = v[c] - v[c - 1];
            double q = 0.5 * (f * f + b * b) / h2;
            if (grads) {
                fx[i] = f;
                bx[i] = b;
            }
            if (g->dim() == 2) {
                double f2 = v[c + g->nx] - v[c];
                double b2 = v[c] - v[c - g->nx];
                q += 0.5 * (f2 * f2 + b2 * b2) / h2;
                if (grads) {
                    fy[i] = f2;
                    by[i] = b2;
                }
            }
            double val = 0.5 * q;
            if (z_term) val -= std::min(v[c], 0.0);
            hh[i] = val;
            if (val > s) s = val;
        }
        return s;
    }

    // r = h^n * sum (hh/s)^p (uses kernels for integer p).
    double scaled_sum(double s, double p) {
        const std::size_t n = hh.size();
        double inv = 1.0 / s;
        long pi;
        const kern::KernelTable& K = kern::active_table();
        if (integer_p(p, pi)) {
            K.pow_scaled(hh.data(), inv, pi, pw.data(), n);
            return cell_volume * K.sum(pw.data(), n);
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::pow(hh[i] * inv, p);
        return cell_volume * acc;
    }

    // Weights (hh/s)^(p-1) into pw.
    void weights(double s, double p) {
        const std::size_t n = hh.size();
        double inv = 1.0 / s;
        long pm1;
        if (integer_p(p - 1.0, pm1)) {
            kern::active_table().pow_scaled(hh.data(), inv, pm1, pw.data(), n);
            return;
        }
        for (std::size_t i = 0; i < n; ++i) pw[i] = std::pow(hh[i] * inv, p - 1.0);
    }

    // Accumulates sum_i coef[i] * dHhat_i/du into grad (interior slots only;
    // boundary values are pinned, so their terms are dropped).
    void scatter(const GridFunction& u, std::span<const double> coef, GridFunction& grad) {
        std::span<const double> v = u.values();
        double inv2h2 = 0.5 / (g->h() * g->h());
        std::fill(grad.values().begin(), grad.values().end(), 0.0);
        for (std::size_t i = 0; i < g->interior.size(); ++i) {
            std::size_t c = g->interior[i];
            double k = coef[i];
            if (k == 0.0) continue;
            if (z_term && v[c] < 0.0) grad[c] -= k;
            {
                std::size_t wc = c - 1, ec = c + 1;
                grad[c] += k * (bx[i] - fx[i]) * inv2h2;
                if (g->cls[ec] == NodeClass::interior) grad[ec] += k * fx[i] * inv2h2;
                if (g->cls[wc] == NodeClass::interior) grad[wc] -= k * bx[i] * inv2h2;
            }
            if (g->dim() == 2) {
                std::size_t sc = c - g->nx, nc = c + g->nx;
                grad[c] += k * (by[i] - fy[i]) * inv2h2;
                if (g->cls[nc] == NodeClass::interior) grad[nc] += k * fy[i] * inv2h2;
                if (g->cls[sc] == NodeClass::interior) grad[sc] -= k * by[i] * inv2h2;
            }
        }
    }

    // F = (energy)^(1/p); when grad is non-null also computes the gradient
    // of F and its squared norm over the interior.
    double eval(const GridFunction& u, double p, GridFunction* grad, double* gnorm2,
                double* scale_out = nullptr) {
        double s = integrand(u, grad != nullptr);
        if (scale_out) *scale_out = s;
        if (s < kTinyScale) {
            if (grad) {
                std::fill(grad->values().begin(), grad->values().end(), 0.0);
                *gnorm2 = 0.0;
            }
            return 0.0;
        }
        if (!grad) {
            double r = scaled_sum(s, p);
            return s * std::pow(r, 1.0 / p);
        }
        weights(s, p);
        // r = h^n sum t^p = h^n dot(t^(p-1), hh)/s
        double r = cell_volume * kern::active_table().dot(pw.data(), hh.data(), hh.size()) / s;
        double sigma = std::pow(r, (1.0 - p) / p) * cell_volume;
        for (double& w : pw) w *= sigma;
        scatter(u, pw, *grad);
        double gn = 0.0;
        for (std::uint32_t c : g->interior) gn += (*grad)[c] * (*grad)[c];
        *gnorm2 = gn;
        return s * std::pow(r, 1.0 / p);
    }
};

// Symmetric banded LDL^T with half-bandwidth 2 (1D Newton systems).
// Returns false on a non-positive pivot.
struct Banded5 {
    std::size_t n = 0;
    std::vector<double> d0, d1, d2;  // diagonal and sub-diagonals

    void resize(std::size_t n_) {
        n = n_;
        d0.assign(n, 0.0);
        d1.assign(n > 1 ? n - 1 : 0, 0.0);
        d2.assign(n > 2 ? n - 2 : 0, 0.0);
    }

    bool solve(std::vector<double>& rhs, double damping) {
        std::vector<double> D(n), L1(n, 0.0), L2(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double l2 = j >= 2 ? d2[j - 2] : 0.0;  // A[j][j-2]
            double l1 = j >= 1 ? d1[j - 1] : 0.0;  // A[j][j-1]
            if (j >= 2) l2 /= D[j - 2];
            if (j >= 1) {
                if (j >= 2) l1 -= l2 * D[j - 2] * L1[j - 1];
                l1 /= D[j - 1];
            }
            double dj = d0[j] + damping;
            if (j >= 1) dj -= l1 * l1 * D[j - 1];
            if (j >= 2) dj -= l2 * l2 * D[j - 2];
            if (!(dj > 0.0) || !std::isfinite(dj)) return false;
            D[j] = dj;
            L1[j] = l1;  // L[j][j-1]
            L2[j] = l2;  // L[j][j-2]
        }
        // Forward substitution L z = rhs.
        for (std::size_t j = 0; j < n; ++j) {
            double v = rhs[j];
            if (j >= 1) v -= L1[j] * rhs[j - 1];
            if (j >= 2) v -= L2[j] * rhs[j - 2];
            rhs[j] = v;
        }
        for (std::size_t j = 0; j < n; ++j) rhs[j] /= D[j];
        // Backward substitution L^T x = z.
        for (std::size_t jj = n; jj-- > 0;) {
            double v = rhs[jj];
            if (jj + 1 < n) v -= L1[jj + 1] * rhs[jj + 1];
            if (jj + 2 < n) v -= L2[jj + 2] * rhs[jj + 2];
            rhs[jj] = v;
        }
        return true;
    }
};

}  // namespace

std::pair<std::vector<double>, double> shift_normalize(const BoundaryData& g) {
    double M = g.max_value();
    std::vector<double> out = g.values;
    for (double& v : out) v -= M;
    return {std::move(out), M};
}

EnergyValue lp_energy(const GridFunction& u, double p) {
    if (!(p >= 1.0)) throw SolverError("lp_energy requires p >= 1");
    EnergyCtx ctx(u.grid(), true);
    EnergyValue ev;
    ev.p = p;
    ev.scale = ctx.integrand(u, false);
    ev.scaled_sum = ev.scale < kTinyScale ? 0.0 : ctx.scaled_sum(ev.scale, p);
    return ev;
}

GridFunction lp_energy_gradient(const GridFunction& u, double p) {
    if (!(p >= 1.0)) throw SolverError("lp_energy_gradient requires p >= 1");
    EnergyCtx ctx(u.grid(), true);
    ctx.integrand(u, true);
    // dE/du_j = h^n p sum_i Hhat_i^(p-1) dHhat_i/du_j, unscaled.
    std::vector<double> coef(ctx.hh.size());
    for (std::size_t i = 0; i < coef.size(); ++i)
        coef[i] = ctx.cell_volume * p * std::pow(ctx.hh[i], p - 1.0);
    GridFunction grad(u.grid_ptr(), 0.0);
    ctx.scatter(u, coef, grad);
    return grad;
}

namespace {

// Laplace-like averaging of the boundary data: the warm start for the first
// exponent.
GridFunction averaged_interpolant(const std::shared_ptr<const Grid>& grid,
                                  const std::vector<double>& bvals, long sweeps) {
    const Grid& g = *grid;
    GridFunction u(grid, 0.0);
    for (std::size_t i = 0; i < g.boundary.size(); ++i) u[g.boundary[i]] = bvals[i];
    double mean = 0.0, mx = 0.0;
    for (double v : bvals) {
        mean += v;
        mx = std::max(mx, std::fabs(v));
    }
    mean /= std::max<std::size_t>(bvals.size(), 1);
    for (std::uint32_t c : g.interior) u[c] = mean;

    double stop = 1e-13 * std::max(1.0, mx);
    for (long s = 0; s < sweeps; ++s) {
        double delta = 0.0;
        for (std::uint32_t c : g.interior) {
            double acc = u[c - 1] + u[c + 1];
            int cnt = 2;
            if (g.dim() == 2) {
                acc += u[c - g.nx] + u[c + g.nx];
                cnt = 4;
            }
            double nv = acc / cnt;
            delta = std::max(delta, std::fabs(nv - u[c]));
            u[c] = nv;
        }
        if (delta < stop) break;
    }
    return u;
}

}  // namespace

std::pair<GridFunction, SolveReport> minimize_lp(const Problem& problem, const LpParams& params) {
    params.validate();
    const Grid& g = *problem.grid;
    if (problem.g.values.size() != g.boundary.size())
        throw SolverError("boundary data is not sampled on this grid");
    if (!std::isfinite(problem.tau)) throw SolverError("tau must be finite");

    if (problem.tau < 0.0) {
        BoundaryData neg = problem.g;
        for (double& v : neg.values) v = -v;
        neg.expr_src = "-(" + problem.g.expr_src + ")";
        Problem flipped{problem.grid, neg, -problem.tau};
        auto [u, rep] = minimize_lp(flipped, params);
        for (std::uint32_t c : g.interior) u[c] = -u[c];
        for (std::uint32_t c : g.boundary) u[c] = -u[c];
        rep.sign_swapped = true;
        return {std::move(u), std::move(rep)};
    }

    auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.solver = "variational";
    rep.threads = params.threads;

    const bool z_term = problem.tau > 0.0;
    const double lambda = z_term ? problem.tau : 1.0;
    rep.tau_scale = lambda;

    // Scale to tau = 1 (u = lambda * w with w solving the data g/lambda),
    // then shift so the working data is <= 0.
    std::vector<double> bvals = problem.g.values;
    for (double& v : bvals) v /= lambda;
    double M = 0.0;
    if (z_term) {
        M = -std::numeric_limits<double>::infinity();
        for (double v : bvals) M = std::max(M, v);
        for (double& v : bvals) v -= M;
    }
    rep.shift = M;

    GridFunction u = averaged_interpolant(problem.grid, bvals, params.smoothing_sweeps);
    if (!u.all_finite()) throw SolverError("initial iterate has non-finite values");

    EnergyCtx ctx(g, z_term);
    GridFunction grad(problem.grid, 0.0);
    GridFunction trial(problem.grid, 0.0);

    GridFunction prev_u(problem.grid, 0.0);
    GridFunction prev_grad(problem.grid, 0.0);

    // First-order stage: Barzilai-Borwein trial steps under the Armijo
    // backtracking rule. Used in 2D, and as the fallback in 1D.
    auto stage_bb = [&](double p, LpSubReport& sub) -> bool {
        double gnorm2 = 0.0, scale = 0.0;
        double F = ctx.eval(u, p, &grad, &gnorm2, &scale);
        if (!std::isfinite(F)) throw SolverError("non-finite objective during descent");
        double step = params.step0;
        int consec = 0;
        bool stage_done = false;
        while (sub.steps < params.max_steps) {
            ++sub.steps;
            if (gnorm2 <= 0.0) {
                stage_done = true;
                break;
            }
            double t = step;
            bool ok = false;
            int bt = 0;
            double Ftry = F;
            for (; bt <= 60; ++bt) {
                trial = u;
                // min(.,0) is 1-Lipschitz and leaves the z-part unchanged, so
                // projecting onto u <= 0 (valid for the shifted data) never
                // increases the energy and keeps the iterate in the smooth
                // region of Hhat.
                for (std::uint32_t c : g.interior) {
                    double val = u[c] - t * grad[c];
                    trial[c] = ctx.z_term ? std::min(val, 0.0) : val;
                }
                // Projected Armijo: decrease measured against the realized
                // displacement, not the free step.
                double req = 0.0;
                for (std::uint32_t c : g.interior) req += grad[c] * (trial[c] - u[c]);
                if (!(req < 0.0)) {
                    t *= params.shrink;
                    ++sub.backtracks;
                    continue;
                }
                Ftry = ctx.eval(trial, p, nullptr, nullptr);
                if (std::isfinite(Ftry) && Ftry <= F + params.armijo_c * req) {
                    ok = true;
                    break;
                }
                t *= params.shrink;
                ++sub.backtracks;
            }
            if (!ok) {
                // Cannot decrease further: numerical optimum for this stage
                // if any progress was made, otherwise a genuine failure.
                if (sub.accepted > 0) break;
                return false;
            }
            double rel = (F - Ftry) / std::max(std::fabs(F), 1e-300);
            prev_u = u;
            prev_grad = grad;
            std::swap(u, trial);
            ++sub.accepted;
            F = ctx.eval(u, p, &grad, &gnorm2, &scale);
            double ss = 0.0, sy = 0.0;
            for (std::uint32_t c : g.interior) {
                double s = u[c] - prev_u[c];
                double y = grad[c] - prev_grad[c];
                ss += s * s;
                sy += s * y;
            }
            step = (sy > 1e-300 && ss > 0.0) ? std::clamp(ss / sy, 1e-12, 1e8)
                                             : std::min(t * 2.0, 1e8);
            consec = rel < params.descent_tol ? consec + 1 : 0;
            if (consec >= params.stall_limit) {
                stage_done = true;
                break;
            }
        }
        sub.converged = true;
        (void)stage_done;
        sub.final_root_energy = F;
        sub.scale = scale;
        sub.final_step = step;
        return true;
    };

    // Damped-Newton stage for 1D: the large-p objective is too flat for
    // first-order steps, while the 1D Hessian is pentadiagonal and exact.
    auto stage_newton = [&](double p, LpSubReport& sub) -> bool {
        const std::size_t n = g.interior.size();
        Banded5 H;
        std::vector<double> rhs(n), w1(n), w2(n);
        const double V = ctx.cell_volume;
        const kern::KernelTable& K = kern::active_table();
        long pi = 0;
        bool p_is_int = integer_p(p, pi);
        int consec = 0;
        double F = 0.0, scale = 0.0;
        double lambda = 0.0;
        while (sub.steps < params.max_steps) {
            ++sub.steps;
            double s = ctx.integrand(u, true);
            scale = s;
            if (s < kTinyScale) {
                F = 0.0;
                break;
            }
            double inv = 1.0 / s;
            if (p_is_int) {
                K.pow_scaled(ctx.hh.data(), inv, pi - 1, w1.data(), n);
                K.pow_scaled(ctx.hh.data(), inv, pi - 2, w2.data(), n);
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    w1[i] = std::pow(ctx.hh[i] * inv, p - 1.0);
                    w2[i] = std::pow(ctx.hh[i] * inv, p - 2.0);
                }
            }
            double r = V * K.dot(w1.data(), ctx.hh.data(), n) * inv;
            F = s * std::pow(r, 1.0 / p);
            double kappa = std::pow(r, (1.0 - p) / p) * V;

            // Gradient and Hessian of sum t^p (up to a common positive
            // factor) in DOF numbering = position in the interior list.
            const double inv2h2 = 0.5 / (g.h() * g.h());
            H.resize(n);
            std::fill(rhs.begin(), rhs.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t c = g.interior[i];
                bool w_dof = g.cls[c - 1] == NodeClass::interior;
                bool e_dof = g.cls[c + 1] == NodeClass::interior;
                double ac = (ctx.bx[i] - ctx.fx[i]) * inv2h2;
                if (ctx.z_term && u[c] < 0.0) ac -= 1.0;
                double ae = ctx.fx[i] * inv2h2;
                double aw = -ctx.bx[i] * inv2h2;
                rhs[i] -= w1[i] * ac;
                if (e_dof) rhs[i + 1] -= w1[i] * ae;
                if (w_dof) rhs[i - 1] -= w1[i] * aw;

                double oc = (p - 1.0) * w2[i] * inv;
                double q2 = 2.0 * inv2h2;  // 1/h^2
                H.d0[i] += oc * ac * ac + w1[i] * q2;
                if (e_dof) {
                    H.d0[i + 1] += oc * ae * ae + w1[i] * inv2h2;
                    H.d1[i] += oc * ac * ae - w1[i] * inv2h2;
                }
                if (w_dof) {
                    H.d0[i - 1] += oc * aw * aw + w1[i] * inv2h2;
                    H.d1[i - 1] += oc * ac * aw - w1[i] * inv2h2;
                }
                if (e_dof && w_dof) H.d2[i - 1] += oc * aw * ae;
            }

            double gnorm = 0.0, hdiag = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                gnorm = std::max(gnorm, std::fabs(rhs[i]));
                hdiag = std::max(hdiag, H.d0[i]);
            }
            if (gnorm <= 0.0) break;

            std::vector<double> d;
            double slope = 0.0;
            for (int attempt = 0; attempt < 40; ++attempt) {
                d = rhs;
                if (H.solve(d, lambda)) {
                    slope = 0.0;
                    for (std::size_t i = 0; i < n; ++i) slope += kappa * (-rhs[i]) * d[i];
                    if (slope < 0.0) break;
                }
                lambda = lambda == 0.0 ? 1e-10 * hdiag : lambda * 10.0;
            }
            if (!(slope < 0.0)) return false;

            double t = 1.0;
            bool ok = false;
            double Ftry = F;
            for (int bt = 0; bt <= 60; ++bt) {
                trial = u;
                // projected step: see the note in the first-order stage
                for (std::size_t i = 0; i < n; ++i) {
                    double val = u[g.interior[i]] + t * d[i];
                    trial[g.interior[i]] = ctx.z_term ? std::min(val, 0.0) : val;
                }
                // Projected Armijo against the realized displacement.
                double req = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t c = g.interior[i];
                    req += kappa * (-rhs[i]) * (trial[c] - u[c]);
                }
                if (!(req < 0.0)) {
                    t *= params.shrink;
                    ++sub.backtracks;
                    continue;
                }
                Ftry = ctx.eval(trial, p, nullptr, nullptr);
                if (std::isfinite(Ftry) && Ftry <= F + params.armijo_c * req) {
                    ok = true;
                    break;
                }
                t *= params.shrink;
                ++sub.backtracks;
            }
            if (!ok) {
                if (sub.accepted > 0) break;
                return false;
            }
            double rel = (F - Ftry) / std::max(std::fabs(F), 1e-300);
            double moved = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                moved = std::max(moved, std::fabs(trial[g.interior[i]] - u[g.interior[i]]));
            std::swap(u, trial);
            F = Ftry;
            ++sub.accepted;
            lambda *= 0.25;
            sub.final_step = t;
            if (moved < 1e-11 * (1.0 + u.range())) break;  // iterate stopped moving
            consec = rel < params.descent_tol ? consec + 1 : 0;
            if (consec >= params.stall_limit) break;
        }
        sub.converged = true;
        sub.final_root_energy = F;
        sub.scale = scale;
        return true;
    };

    bool failed = false;
    for (double p : params.p_schedule) {
        LpSubReport sub;
        sub.p = p;
        bool ok = g.dim() == 1 ? stage_newton(p, sub) : stage_bb(p, sub);
        // Large exponents cannot see nodes whose integrand sits below the
        // current max in double precision, so stages can leave micro-basins
        // behind. Lifting a basin to its spill level shrinks the edge
        // differences and the z-term of every node involved, so it never
        // increases the energy at any p; exact minimizers have no interior
        // basins at all.
        fill_basins(u);
        if (!ok) {
            sub.converged = false;
            failed = true;
        }
        rep.lp.push_back(sub);
        rep.iterations += sub.steps;
        if (failed) break;
    }

    // Undo the shift and the tau scaling; boundary gets the original data.
    GridFunction out(problem.grid, 0.0);
    for (std::uint32_t c : g.interior) out[c] = lambda * (u[c] + M);
    out.impose_boundary(problem.g);

    rep.converged = !failed;
    if (failed) rep.reason = "descent failed to decrease; returning last stable iterate";

    auto wells = detect_wells(out);
    rep.wells_clear = wells.empty();
    if (!rep.wells_clear) {
        rep.converged = false;
        if (!rep.reason.empty()) rep.reason += "; ";
        rep.reason += "well check failed on the output";
    }

    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(out), std::move(rep)};
}

}  // namespace aronsson
