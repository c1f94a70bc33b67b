#include "aronsson/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace aronsson {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    const char* begin = v.c_str();
    char* end = nullptr;
    double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError("invalid " + key + " '" + v + "': expected a number");
    return x;
}

long parse_long(const std::string& key, const std::string& v) {
    const char* begin = v.c_str();
    char* end = nullptr;
    long x = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError("invalid " + key + " '" + v + "': expected an integer");
    return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("invalid " + key + " '" + v + "': empty list");
    return out;
}

}  // namespace

void RunConfig::finalize() {
    domain.validate();
    if (!eps_given) game.eps = 5.0 * domain.h;
    if (game.eps < 2.0 * domain.h * (1.0 - 1e-12))
        throw ConfigError("game.eps must be at least 2*h");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    game.threads = threads;
    lp.threads = threads;
    lp.validate();
    try {
        parse_expr(g_expr);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("invalid g.expr: ") + e.what());
    }
}

RunConfig parse_config_text(const std::string& text, const std::string& name) {
    RunConfig cfg;
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
        if (kv.count(key))
            throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key " + key);
        kv[key] = val;
    }

    bool have_y = false;
    for (const auto& [key, v] : kv) {
        if (key == "domain.kind") {
            if (v == "interval")
                cfg.domain.kind = DomainKind::interval;
            else if (v == "rectangle")
                cfg.domain.kind = DomainKind::rectangle;
            else if (v == "disc")
                cfg.domain.kind = DomainKind::disc;
            else
                throw ConfigError("invalid domain.kind '" + v + "'");
        } else if (key == "domain.x0")
            cfg.domain.x0 = parse_double(key, v);
        else if (key == "domain.x1")
            cfg.domain.x1 = parse_double(key, v);
        else if (key == "domain.y0") {
            cfg.domain.y0 = parse_double(key, v);
            have_y = true;
        } else if (key == "domain.y1") {
            cfg.domain.y1 = parse_double(key, v);
            have_y = true;
        } else if (key == "domain.h")
            cfg.domain.h = parse_double(key, v);
        else if (key == "domain.cx")
            cfg.domain.cx = parse_double(key, v);
        else if (key == "domain.cy")
            cfg.domain.cy = parse_double(key, v);
        else if (key == "domain.radius")
            cfg.domain.radius = parse_double(key, v);
        else if (key == "g.expr")
            cfg.g_expr = v;
        else if (key == "tau")
            cfg.tau = parse_double(key, v);
        else if (key == "game.eps") {
            cfg.game.eps = parse_double(key, v);
            cfg.eps_given = true;
        } else if (key == "game.tol")
            cfg.game.tol = parse_double(key, v);
        else if (key == "game.max_iter")
            cfg.game.max_iter = parse_long(key, v);
        else if (key == "game.sweep") {
            if (v == "jacobi")
                cfg.game.sweep = GameParams::Sweep::jacobi;
            else if (v == "gauss-seidel")
                cfg.game.sweep = GameParams::Sweep::gauss_seidel;
            else
                throw ConfigError("invalid game.sweep '" + v + "'");
        } else if (key == "game.init") {
            if (v == "boundary-max")
                cfg.game.init = GameParams::Init::boundary_max;
            else if (v == "boundary-min")
                cfg.game.init = GameParams::Init::boundary_min;
            else
                throw ConfigError("invalid game.init '" + v + "'");
        } else if (key == "lp.schedule")
            cfg.lp.p_schedule = parse_list(key, v);
        else if (key == "lp.tol")
            cfg.lp.descent_tol = parse_double(key, v);
        else if (key == "lp.max_steps")
            cfg.lp.max_steps = parse_long(key, v);
        else if (key == "lp.step0")
            cfg.lp.step0 = parse_double(key, v);
        else if (key == "lp.shrink")
            cfg.lp.shrink = parse_double(key, v);
        else if (key == "lp.armijo")
            cfg.lp.armijo_c = parse_double(key, v);
        else if (key == "lp.smoothing_sweeps")
            cfg.lp.smoothing_sweeps = parse_long(key, v);
        else if (key == "analysis.well_tol_rel")
            cfg.analysis.well_tol_rel = parse_double(key, v);
        else if (key == "analysis.flat_tol_rel")
            cfg.analysis.flat_tol_rel = parse_double(key, v);
        else if (key == "analysis.r_min_cells")
            cfg.analysis.r_min_cells = parse_double(key, v);
        else if (key == "exact1d.count")
            cfg.exact1d_count = static_cast<int>(parse_long(key, v));
        else if (key == "check.sup_tol")
            cfg.sup_tol = parse_double(key, v);
        else if (key == "check.residual_eps")
            cfg.residual_eps = parse_double(key, v);
        else if (key == "check.absmin_trials")
            cfg.absmin.trials = static_cast<int>(parse_long(key, v));
        else if (key == "check.absmin_perturbations")
            cfg.absmin.perturbations = static_cast<int>(parse_long(key, v));
        else if (key == "check.absmin_slack")
            cfg.absmin.slack = parse_double(key, v);
        else if (key == "out.dir")
            cfg.out_dir = v;
        else if (key == "seed")
            cfg.seed = static_cast<std::uint64_t>(parse_long(key, v));
        else if (key == "threads")
            cfg.threads = static_cast<int>(parse_long(key, v));
        else if (key == "kernels")
            cfg.kernels = v;
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
    if (cfg.domain.kind == DomainKind::rectangle && !have_y)
        throw ConfigError("rectangle domain requires domain.y0 and domain.y1");
    cfg.finalize();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace aronsson
