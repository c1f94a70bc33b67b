#include <doctest.h>

#include <cmath>

#include "aronsson/analysis.hpp"
#include "aronsson/exact1d.hpp"
#include "aronsson/rng.hpp"

using namespace aronsson;

namespace {

std::shared_ptr<const Grid> unit_interval(double h = 0.01) {
    return build_grid(DomainSpec::interval(-1, 1, h));
}

GridFunction fill(const std::shared_ptr<const Grid>& g,
                  const std::function<double(double, double)>& f) {
    GridFunction u(g, 0.0);
    for (std::size_t c = 0; c < g->cells(); ++c)
        if (g->cls[c] != NodeClass::exterior)
            u[c] = f(g->x(g->ix_of(c)), g->y(g->iy_of(c)));
    return u;
}

}  // namespace

TEST_CASE("detect_wells on the canonical shapes") {
    auto g = unit_interval();
    // parabola dips below the zero boundary: one well with witness -0.5
    GridFunction u2 = fill(g, [](double x, double) { return 0.5 * x * x - 0.5; });
    auto wells = detect_wells(u2);
    REQUIRE(wells.size() == 1);
    CHECK(wells[0].witness_min == doctest::Approx(-0.5));
    CHECK(wells[0].depth() > 0.4);

    // constant: no wells
    GridFunction z(g, 0.0);
    CHECK(detect_wells(z).empty());

    // intermediate fixture: one well containing the flat piece
    auto mid = exact1d::sample(exact1d::family(-1, 1, 0, 0).member(-0.125), g);
    auto wm = detect_wells(mid);
    REQUIRE(wm.size() == 1);
    CHECK(wm[0].witness_min == doctest::Approx(-0.125));
    double xlo = 1e300, xhi = -1e300;
    for (auto c : wm[0].cells) {
        xlo = std::min(xlo, g->x(g->ix_of(c)));
        xhi = std::max(xhi, g->x(g->ix_of(c)));
    }
    CHECK(xlo <= -0.5);
    CHECK(xhi >= 0.5);
}

TEST_CASE("detect_flat_pieces on the canonical shapes") {
    auto g = unit_interval();
    GridFunction z(g, 0.0);
    auto f = detect_flat_pieces(z);
    REQUIRE(f.size() == 1);
    CHECK(f[0].cells.size() == g->interior.size());

    GridFunction u2 = fill(g, [](double x, double) { return 0.5 * x * x - 0.5; });
    CHECK(detect_flat_pieces(u2).empty());

    auto mid = exact1d::sample(exact1d::family(-1, 1, 0, 0).member(-0.125), g);
    auto fm = detect_flat_pieces(mid);
    REQUIRE(fm.size() == 1);
    CHECK(fm[0].height == doctest::Approx(-0.125));
    double xlo = 1e300, xhi = -1e300;
    for (auto c : fm[0].cells) {
        xlo = std::min(xlo, g->x(g->ix_of(c)));
        xhi = std::max(xhi, g->x(g->ix_of(c)));
    }
    CHECK(xlo == doctest::Approx(-0.5).epsilon(0.05));
    CHECK(xhi == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("classify truth table on the exact family") {
    auto g = unit_interval();
    auto fam = exact1d::family(-1, 1, 0, 0);

    CHECK(classify(exact1d::sample(fam.minimal(), g)).verdict == Verdict::value_function_only);
    CHECK(classify(exact1d::sample(fam.maximal(), g)).verdict ==
          Verdict::absolute_minimizer_only);
    for (double c : {-0.375, -0.25, -0.125})
        CHECK(classify(exact1d::sample(fam.member(c), g)).verdict == Verdict::intermediate);

    // unique-solution data: neither wells nor flats
    auto ufam = exact1d::family(-1, 1, 0, 10);
    auto ug = exact1d::sample(ufam.minimal(), g);
    CHECK(classify(ug).verdict == Verdict::unique);
}

TEST_CASE("detectors are invariant under constant shifts") {
    auto g = unit_interval();
    auto fam = exact1d::family(-1, 1, 0, 0);
    for (double c : {-0.5, -0.125, 0.0}) {
        auto u = exact1d::sample(fam.member(c), g);
        GridFunction v = u;
        for (std::size_t i = 0; i < g->cells(); ++i)
            if (g->cls[i] != NodeClass::exterior) v[i] += 17.25;
        CHECK(detect_wells(u).size() == detect_wells(v).size());
        CHECK(detect_flat_pieces(u).size() == detect_flat_pieces(v).size());
    }
}

TEST_CASE("wells appear exactly below the maximal member") {
    auto g = unit_interval();
    double h = g->h();
    SplitMix64 rng(2024);
    for (int t = 0; t < 10; ++t) {
        auto fam = exact1d::family(-1, 1, rng.uniform(-2, 2), rng.uniform(-2, 2));
        if (fam.single()) continue;
        for (const auto& m : fam.enumerate(5)) {
            auto u = exact1d::sample(m, g);
            if (m.c >= fam.c_max - 1e-12) {
                CHECK(detect_wells(u).empty());
                continue;
            }
            // at grid resolution the basin must clear the boundary collar and
            // the relative depth tolerance to count
            double depth = std::min(m.g_l, m.g_r) - m.c;
            bool resolvable = m.m1 > -1 + 2 * h && m.m2 < 1 - 2 * h &&
                              depth > 2e-3 * u.range();
            if (resolvable) CHECK(!detect_wells(u).empty());
        }
    }
}

TEST_CASE("fill_basins removes interior basins and only lifts") {
    auto g = unit_interval(0.05);
    GridFunction u = fill(g, [](double x, double) { return x * x; });
    // carve a basin
    std::size_t mid = g->cell(g->nx / 2, 0);
    GridFunction v = u;
    v[mid - 1] -= 0.3;
    v[mid] -= 0.4;
    v[mid + 1] -= 0.3;
    CHECK(!detect_wells(v).empty());
    int lifted = fill_basins(v);
    CHECK(lifted > 0);
    CHECK(detect_wells(v).empty());
    for (std::uint32_t c : g->interior) CHECK(v[c] >= u[c] - 0.41);  // lifts only
}

TEST_CASE("check_max_principle") {
    auto g = unit_interval();
    GridFunction u2 = fill(g, [](double x, double) { return 0.5 * x * x - 0.5; });
    auto r = check_max_principle(u2);
    CHECK(r.ok);
    CHECK(r.margin >= 0.0);
    CHECK(r.below_min == doctest::Approx(0.5).epsilon(1e-3));  // dips 1/2 below min g

    GridFunction z(g, 0.0);
    auto rz = check_max_principle(z);
    CHECK(rz.ok);
    CHECK(rz.margin == doctest::Approx(0.0));
    CHECK(rz.below_min == doctest::Approx(0.0));

    // synthetic bump above the boundary max fails
    GridFunction bump = z;
    bump[g->cell(g->nx / 2, 0)] = 0.3;
    CHECK(!check_max_principle(bump).ok);
}

TEST_CASE("check_ordering") {
    auto g = unit_interval();
    GridFunction u2 = fill(g, [](double x, double) { return 0.5 * x * x - 0.5; });
    GridFunction z(g, 0.0);
    auto r = check_ordering(u2, z, 1e-9);
    CHECK(r.ok);
    CHECK(r.max_gap == doctest::Approx(0.5));
    auto same = check_ordering(z, z, 1e-9);
    CHECK(same.ok);
    CHECK(same.max_gap == 0.0);
    auto swapped = check_ordering(z, u2, 1e-9);
    CHECK(!swapped.ok);
    CHECK(swapped.worst_violation == doctest::Approx(0.5));
}

TEST_CASE("esssup Hamiltonian: the paper margin on the canonical pair") {
    auto g = unit_interval();
    GridFunction u2 = fill(g, [](double x, double) { return 0.5 * x * x - 0.5; });
    GridFunction z(g, 0.0);
    double e2 = esssup_hamiltonian(u2, full_rect(*g));
    double e0 = esssup_hamiltonian(z, full_rect(*g));
    CHECK(e2 - e0 == doctest::Approx(0.5).epsilon(0.02));  // 0.5 +- 0.01
    CHECK(e0 == doctest::Approx(0.0));
}

TEST_CASE("absolute-minimizer battery") {
    auto g = unit_interval();
    // the zero solution is never beaten
    GridFunction z(g, 0.0);
    AbsMinParams ap;
    ap.trials = 20;
    ap.perturbations = 10;
    ap.seed = 42;
    auto rz = check_absolute_minimizing(z, ap);
    CHECK(!rz.beaten);
    CHECK(rz.esssup_whole == doctest::Approx(0.0));

    // the value function u2 is beaten by competitors pushing toward zero
    GridFunction u2 = fill(g, [](double x, double) { return 0.5 * x * x - 0.5; });
    AbsMinParams ap2 = ap;
    ap2.trials = 60;
    ap2.perturbations = 30;
    auto r2 = check_absolute_minimizing(u2, ap2);
    CHECK(r2.beaten);

    // determinism: identical seeds give identical outcomes
    auto r2b = check_absolute_minimizing(u2, ap2);
    CHECK(r2.worst_beat == r2b.worst_beat);
}
