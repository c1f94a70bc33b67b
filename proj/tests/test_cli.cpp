#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aronsson/config.hpp"
#include "aronsson/csv.hpp"
#include "aronsson/runner.hpp"

using namespace aronsson;
namespace fs = std::filesystem;

namespace {

const char* kExampleCfg = R"(# canonical fixture
domain.kind = interval
domain.x0 = -1
domain.x1 = 1
domain.h = 0.0125
g.expr = 0
tau = 1
game.eps = 0.05
game.tol = 1e-8
seed = 7
)";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("aronsson_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

}  // namespace

TEST_CASE("config parsing") {
    RunConfig cfg = parse_config_text(kExampleCfg, "test");
    CHECK(cfg.domain.kind == DomainKind::interval);
    CHECK(cfg.domain.h == doctest::Approx(0.0125));
    CHECK(cfg.tau == 1.0);
    CHECK(cfg.game.eps == doctest::Approx(0.05));
    CHECK(cfg.seed == 7);

    // eps defaults to 5h when not given
    RunConfig d = parse_config_text(
        "domain.kind = interval\ndomain.x0 = 0\ndomain.x1 = 1\ndomain.h = 0.01\n", "t");
    CHECK(d.game.eps == doctest::Approx(0.05));
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config_text("tau = abc\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nonsense.key = 1\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("tau\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("tau = 1\ntau = 2\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("g.expr = x +\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("domain.kind = trapezoid\n", "t"), ConfigError);
    // eps below 2h
    CHECK_THROWS_AS(
        parse_config_text("domain.h = 0.1\ndomain.x0 = -1\ndomain.x1 = 1\ngame.eps = 0.15\n",
                          "t"),
        ConfigError);
    // rectangle without y extents
    CHECK_THROWS_AS(parse_config_text("domain.kind = rectangle\n", "t"), ConfigError);
}

TEST_CASE("solve runners write artifacts and exit codes") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kExampleCfg, "test");
    int rc = run_solve_game(cfg, tmp.path.string());
    CHECK(rc == kExitOk);
    CHECK(fs::exists(tmp.path / "game_solution.csv"));
    CHECK(fs::exists(tmp.path / "game_report.json"));
    CHECK(fs::exists(tmp.path / "game_analysis.json"));

    // non-convergence maps to the dedicated exit code, artifacts still written
    RunConfig hard = cfg;
    hard.game.max_iter = 2;
    hard.game.tol = 1e-14;
    TempDir tmp2;
    CHECK(run_solve_game(hard, tmp2.path.string()) == kExitNotConverged);
    CHECK(fs::exists(tmp2.path / "game_solution.csv"));

    int rv = run_solve_variational(cfg, tmp.path.string());
    CHECK(rv == kExitOk);
    CHECK(fs::exists(tmp.path / "variational_solution.csv"));
}

TEST_CASE("exact1d runner emits the family") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kExampleCfg, "test");
    CHECK(run_exact1d(cfg, tmp.path.string()) == kExitOk);
    std::ifstream is(tmp.path / "family.json");
    std::stringstream ss;
    ss << is.rdbuf();
    auto j = nlohmann::json::parse(ss.str());
    CHECK(j["c_min"].get<double>() == doctest::Approx(-0.5));
    CHECK(j["c_max"].get<double>() == doctest::Approx(0.0));
    CHECK(j["members"].size() == 5);
    CHECK(fs::exists(tmp.path / "family_member_0.csv"));
    CHECK(fs::exists(tmp.path / "family_member_4.csv"));
    // endpoints match the canonical pair
    CHECK(j["members"][0]["solves_normalized_form"].get<bool>());
    CHECK(!j["members"][4]["solves_normalized_form"].get<bool>());
}

TEST_CASE("classify runner reads a CSV field") {
    TempDir tmp;
    RunConfig cfg = parse_config_text(kExampleCfg, "test");
    run_exact1d(cfg, tmp.path.string());
    AnalysisParams ap;
    CHECK(run_classify((tmp.path / "family_member_0.csv").string(), ap, tmp.path.string()) ==
          kExitOk);
    std::ifstream is(tmp.path / "classification.json");
    std::stringstream ss;
    ss << is.rdbuf();
    auto j = nlohmann::json::parse(ss.str());
    CHECK(j["verdict"].get<std::string>() == "ValueFunctionOnly");
}

TEST_CASE("verify runner passes on the canonical fixture and is deterministic") {
    TempDir fixtures, out1, out2;
    std::ofstream(fixtures.path / "example.cfg") << kExampleCfg;
    CHECK(run_verify(fixtures.path.string(), out1.path.string()) == kExitOk);
    CHECK(run_verify(fixtures.path.string(), out2.path.string()) == kExitOk);
    // byte-identical artifact trees
    int compared = 0;
    for (const auto& e : fs::recursive_directory_iterator(out1.path)) {
        if (!e.is_regular_file()) continue;
        fs::path rel = fs::relative(e.path(), out1.path);
        std::ifstream a(e.path(), std::ios::binary), b(out2.path / rel, std::ios::binary);
        REQUIRE(b.good());
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
        ++compared;
    }
    CHECK(compared >= 10);
    CHECK(fs::exists(out1.path / "battery_summary.json"));
    CHECK(fs::exists(out1.path / "example" / "ordering_report.json"));
}
