#include "aronsson/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "aronsson/analysis.hpp"
#include "aronsson/csv.hpp"
#include "aronsson/exact1d.hpp"
#include "aronsson/game.hpp"
#include "aronsson/kernels.hpp"
#include "aronsson/report.hpp"
#include "aronsson/variational.hpp"

namespace fs = std::filesystem;

namespace aronsson {

namespace {

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw SolverError("cannot open for writing: " + path);
    os << j.dump(2) << '\n';
}

nlohmann::json analysis_json(const GridFunction& u, const AnalysisParams& ap) {
    const Grid& g = u.grid();
    nlohmann::json j;
    j["spec_version"] = kSpecVersion;

    auto wells = detect_wells(u, ap);
    nlohmann::json jw = nlohmann::json::array();
    for (const auto& w : wells) {
        double xlo = 1e300, xhi = -1e300;
        for (std::uint32_t c : w.cells) {
            xlo = std::min(xlo, g.x(g.ix_of(c)));
            xhi = std::max(xhi, g.x(g.ix_of(c)));
        }
        jw.push_back({{"size", w.cells.size()},
                      {"threshold", w.threshold},
                      {"witness_min", w.witness_min},
                      {"depth", w.depth()},
                      {"x_lo", xlo},
                      {"x_hi", xhi}});
    }
    j["wells"] = jw;

    auto flats = detect_flat_pieces(u, ap);
    nlohmann::json jf = nlohmann::json::array();
    for (const auto& f : flats) {
        double xlo = 1e300, xhi = -1e300;
        for (std::uint32_t c : f.cells) {
            xlo = std::min(xlo, g.x(g.ix_of(c)));
            xhi = std::max(xhi, g.x(g.ix_of(c)));
        }
        jf.push_back({{"size", f.cells.size()},
                      {"height", f.height},
                      {"inradius", f.inradius},
                      {"x_lo", xlo},
                      {"x_hi", xhi}});
    }
    j["flat_pieces"] = jf;

    Classification cl;
    cl.has_wells = !wells.empty();
    cl.has_flats = !flats.empty();
    cl.verdict = cl.has_wells ? (cl.has_flats ? Verdict::intermediate
                                              : Verdict::value_function_only)
                              : (cl.has_flats ? Verdict::absolute_minimizer_only
                                              : Verdict::unique);
    j["verdict"] = to_string(cl.verdict);

    auto mp = check_max_principle(u);
    j["max_principle"] = {{"ok", mp.ok}, {"margin", mp.margin}, {"below_min", mp.below_min}};
    return j;
}

}  // namespace

Problem make_problem(const RunConfig& cfg) {
    kern::set_kernel_override(cfg.kernels);
    auto grid = build_grid(cfg.domain);
    Expression g = parse_expr(cfg.g_expr);
    return Problem{grid, sample_boundary(g, *grid), cfg.tau};
}

int run_solve_game(const RunConfig& cfg, const std::string& out_dir, bool zero_wall) {
    fs::create_directories(out_dir);
    Problem pb = make_problem(cfg);
    auto [u, rep] = value_iteration(pb, cfg.game);
    if (zero_wall) rep.wall_ms = 0.0;
    write_csv(out_dir + "/game_solution.csv", u);
    write_json(out_dir + "/game_report.json", report_json(rep));
    write_json(out_dir + "/game_analysis.json", analysis_json(u, cfg.analysis));
    return rep.converged ? kExitOk : kExitNotConverged;
}

int run_solve_variational(const RunConfig& cfg, const std::string& out_dir, bool zero_wall) {
    fs::create_directories(out_dir);
    Problem pb = make_problem(cfg);
    auto [u, rep] = minimize_lp(pb, cfg.lp);
    if (zero_wall) rep.wall_ms = 0.0;
    write_csv(out_dir + "/variational_solution.csv", u);
    write_json(out_dir + "/variational_report.json", report_json(rep));
    write_json(out_dir + "/variational_analysis.json", analysis_json(u, cfg.analysis));
    return rep.converged ? kExitOk : kExitNotConverged;
}

int run_exact1d(const RunConfig& cfg, const std::string& out_dir) {
    if (cfg.domain.dim() != 1)
        throw SolverError("exact1d requires an interval domain");
    fs::create_directories(out_dir);
    kern::set_kernel_override(cfg.kernels);
    auto grid = build_grid(cfg.domain);
    Expression g = parse_expr(cfg.g_expr);
    double l = cfg.domain.x0, r = cfg.domain.x1;
    auto fam = exact1d::family(l, r, g.eval(l), g.eval(r));

    nlohmann::json j;
    j["spec_version"] = kSpecVersion;
    j["l"] = fam.l;
    j["r"] = fam.r;
    j["g_l"] = fam.g_l;
    j["g_r"] = fam.g_r;
    j["c_min"] = fam.c_min;
    j["c_max"] = fam.c_max;
    j["single"] = fam.single();
    nlohmann::json members = nlohmann::json::array();
    auto sols = fam.enumerate(cfg.exact1d_count);
    for (std::size_t i = 0; i < sols.size(); ++i) {
        const auto& s = sols[i];
        auto rep = exact1d::verify_viscosity(s);
        members.push_back({{"l", s.l},
                           {"r", s.r},
                           {"m1", s.m1},
                           {"m2", s.m2},
                           {"c", s.c},
                           {"solves_dirichlet_form", rep.solves_dirichlet_form},
                           {"solves_normalized_form", rep.solves_normalized_form}});
        write_csv(out_dir + "/family_member_" + std::to_string(i) + ".csv",
                  exact1d::sample(s, grid));
    }
    j["members"] = members;
    write_json(out_dir + "/family.json", j);
    return kExitOk;
}

int run_classify(const std::string& csv_path, const AnalysisParams& params,
                 const std::string& out_dir) {
    fs::create_directories(out_dir);
    GridFunction u = load_csv(csv_path);
    nlohmann::json j = analysis_json(u, params);
    write_json(out_dir + "/classification.json", j);
    std::cout << j["verdict"].get<std::string>() << "\n";
    return kExitOk;
}

namespace {

struct CheckList {
    nlohmann::json checks = nlohmann::json::array();
    bool all = true;

    void add(const std::string& name, bool ok, double value, double limit) {
        checks.push_back({{"name", name}, {"ok", ok}, {"value", value}, {"limit", limit}});
        all = all && ok;
    }
};

}  // namespace

int run_verify(const std::string& fixtures_dir, const std::string& out_dir,
               const std::uint64_t* seed_override, const int* threads_override) {
    std::vector<fs::path> fixtures;
    for (const auto& e : fs::directory_iterator(fixtures_dir))
        if (e.path().extension() == ".cfg") fixtures.push_back(e.path());
    std::sort(fixtures.begin(), fixtures.end());
    if (fixtures.empty()) throw ConfigError("no *.cfg fixtures in " + fixtures_dir);

    nlohmann::json summary;
    summary["spec_version"] = kSpecVersion;
    nlohmann::json per_fixture;
    bool all_pass = true;

    for (const auto& f : fixtures) {
        RunConfig cfg = parse_config_file(f.string());
        if (seed_override) cfg.seed = *seed_override;
        if (threads_override) {
            cfg.threads = *threads_override;
            cfg.game.threads = *threads_override;
            cfg.lp.threads = *threads_override;
        }
        std::string sub = out_dir + "/" + f.stem().string();
        fs::create_directories(sub);

        Problem pb = make_problem(cfg);
        auto [gu, grep] = value_iteration(pb, cfg.game);
        auto [vu, vrep] = minimize_lp(pb, cfg.lp);
        grep.wall_ms = 0.0;
        vrep.wall_ms = 0.0;

        write_csv(sub + "/game_solution.csv", gu);
        write_json(sub + "/game_report.json", report_json(grep));
        write_json(sub + "/game_analysis.json", analysis_json(gu, cfg.analysis));
        write_csv(sub + "/variational_solution.csv", vu);
        write_json(sub + "/variational_report.json", report_json(vrep));
        write_json(sub + "/variational_analysis.json", analysis_json(vu, cfg.analysis));

        CheckList cl;
        cl.add("game_converged", grep.converged, grep.residual, cfg.game.tol);
        cl.add("variational_converged", vrep.converged, 0.0, 0.0);

        auto ord = check_ordering(gu, vu, cfg.sup_tol);
        write_json(sub + "/ordering_report.json",
                   {{"spec_version", kSpecVersion},
                    {"ok", ord.ok},
                    {"worst_violation", ord.worst_violation},
                    {"max_gap", ord.max_gap},
                    {"tolerance", cfg.sup_tol}});
        cl.add("ordering_game_below_variational", ord.ok, ord.worst_violation, cfg.sup_tol);

        cl.add("game_no_flat_pieces", detect_flat_pieces(gu, cfg.analysis).empty(), 0, 0);
        cl.add("variational_no_wells", detect_wells(vu, cfg.analysis).empty(), 0, 0);
        auto mpg = check_max_principle(gu, cfg.game.tol * 10);
        auto mpv = check_max_principle(vu, cfg.sup_tol);
        cl.add("game_max_principle", mpg.ok, mpg.margin, 0);
        cl.add("variational_max_principle", mpv.ok, mpv.margin, 0);

        if (cfg.domain.dim() == 1 && cfg.tau > 0.0) {
            run_exact1d(cfg, sub);
            double l = cfg.domain.x0, r = cfg.domain.x1;
            Expression g = parse_expr(cfg.g_expr);
            // exact endpoints under the tau scaling: u = tau * w(g/tau)
            auto fam = exact1d::family(l, r, g.eval(l) / cfg.tau, g.eval(r) / cfg.tau);
            GridFunction lo = exact1d::sample(fam.minimal(), pb.grid);
            GridFunction hi = exact1d::sample(fam.maximal(), pb.grid);
            for (std::size_t c = 0; c < pb.grid->cells(); ++c)
                if (pb.grid->cls[c] != NodeClass::exterior) {
                    lo[c] *= cfg.tau;
                    hi[c] *= cfg.tau;
                }
            cl.add("game_matches_exact_minimal", sup_diff_interior(gu, lo) <= cfg.sup_tol,
                   sup_diff_interior(gu, lo), cfg.sup_tol);
            cl.add("variational_matches_exact_maximal", sup_diff_interior(vu, hi) <= cfg.sup_tol,
                   sup_diff_interior(vu, hi), cfg.sup_tol);

            // Theorem-2.4 side: every family member is a discrete
            // supersolution up to -0.01 eps^2.
            double reps = cfg.residual_eps > 0.0 ? cfg.residual_eps : cfg.game.eps;
            double floor_limit = -0.01 * reps * reps;
            double worst_floor = 0.0;
            for (const auto& s : fam.enumerate(cfg.exact1d_count)) {
                GridFunction su = exact1d::sample(s, pb.grid);
                for (std::size_t c = 0; c < pb.grid->cells(); ++c)
                    if (pb.grid->cls[c] != NodeClass::exterior) su[c] *= cfg.tau;
                GridFunction res = supersolution_residual(su, reps, cfg.tau);
                for (std::uint32_t c : pb.grid->interior)
                    worst_floor = std::min(worst_floor, res[c]);
            }
            cl.add("family_supersolution_floor", worst_floor >= floor_limit, worst_floor,
                   floor_limit);
        }

        if (cfg.tau > 0.0) {
            // Absolute-minimizer sampling battery on the tau-normalized output.
            GridFunction un = vu;
            if (cfg.tau != 1.0)
                for (std::size_t c = 0; c < un.grid().cells(); ++c)
                    if (un.grid().cls[c] != NodeClass::exterior) un[c] /= cfg.tau;
            AbsMinParams ap = cfg.absmin;
            ap.seed = cfg.seed;
            auto am = check_absolute_minimizing(un, ap);
            write_json(sub + "/absolute_minimizer_check.json",
                       {{"spec_version", kSpecVersion},
                        {"trials", am.trials},
                        {"perturbations", am.perturbations_total},
                        {"esssup_whole", am.esssup_whole},
                        {"worst_beat", am.worst_beat},
                        {"beaten", am.beaten}});
            cl.add("variational_not_beaten", !am.beaten, am.worst_beat, ap.slack);
        }

        write_json(sub + "/battery.json",
                   {{"spec_version", kSpecVersion}, {"checks", cl.checks}, {"pass", cl.all}});
        per_fixture[f.stem().string()] = cl.all;
        all_pass = all_pass && cl.all;
    }

    summary["fixtures"] = per_fixture;
    summary["all_pass"] = all_pass;
    write_json(out_dir + "/battery_summary.json", summary);
    return all_pass ? kExitOk : kExitNotConverged;
}

}  // namespace aronsson
