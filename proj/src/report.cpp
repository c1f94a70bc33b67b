#include "aronsson/report.hpp"

#include <cmath>

namespace aronsson {

namespace {

// JSON has no inf/nan literals; nlohmann would emit null, which is fine for
// reading but we prefer explicit numbers for round-tripping reports.
nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

nlohmann::json report_json(const SolveReport& r) {
    nlohmann::json j;
    j["spec_version"] = kSpecVersion;
    j["solver"] = r.solver;
    j["converged"] = r.converged;
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["iterations"] = r.iterations;
    j["residual"] = num(r.residual);
    j["sup_change"] = num(r.sup_change);
    j["sign_swapped"] = r.sign_swapped;
    j["tau_scale"] = r.tau_scale;
    j["threads"] = r.threads;
    j["wall_ms"] = r.wall_ms;
    if (r.solver == "game") {
        j["eps"] = num(r.eps);
        j["sweep"] = r.sweep;
    }
    if (r.solver == "variational") {
        j["shift"] = r.shift;
        j["wells_clear"] = r.wells_clear;
        nlohmann::json stages = nlohmann::json::array();
        for (const auto& s : r.lp) {
            nlohmann::json js;
            js["p"] = s.p;
            js["steps"] = s.steps;
            js["accepted"] = s.accepted;
            js["backtracks"] = s.backtracks;
            js["final_root_energy"] = num(s.final_root_energy);
            js["scale"] = num(s.scale);
            js["final_step"] = num(s.final_step);
            js["converged"] = s.converged;
            stages.push_back(js);
        }
        j["lp_stages"] = stages;
    }
    return j;
}

}  // namespace aronsson
