#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leafspace/catalog.hpp"
#include "leafspace/error.hpp"
#include "leafspace/recurrence.hpp"

using namespace leafspace;

TEST_CASE("scenario construction and parameter validation") {
    for (const auto& name : scenario_names()) CHECK(scenario_known(name));
    CHECK_FALSE(scenario_known("moebius"));
    CHECK_THROWS_AS(make_scenario("moebius"), Error);
    CHECK_THROWS_AS(make_scenario("wedge", 2), Error);
    CHECK_NOTHROW(make_scenario("wedge", 3));
}

TEST_CASE("wedge leaf-range oracle: W for theta0 = 1/2 is (1 - n/2, n/2 - 1)") {
    Scenario sc = make_scenario("wedge", 4);
    auto [lo, hi] = sc.oracles.escape_interval(polar(1.5, 0.5));
    CHECK(lo == doctest::Approx(-1.0));
    CHECK(hi == doctest::Approx(1.0));
    CHECK(hi - lo == doctest::Approx(sc.n - 2.0));
    // interior points are complete
    auto [ilo, ihi] = sc.oracles.escape_interval(polar(0.5, 0.5));
    CHECK(ilo < -1e20);
    CHECK(ihi > 1e20);
}

TEST_CASE("full disc isotropy and recurrence expectations for n = 5") {
    Scenario sc = make_scenario("full_disc", 5);
    CHECK(sc.expected.isotropy_at_center == 5);
    CHECK(sc.oracles.isotropy_order(Vec{0.0, 0.0}) == 5);
    CHECK(sc.oracles.isotropy_order(polar(1.0, 0.2)) == 1);
    std::vector<Vec> orbit = sc.oracles.recurrence(polar(1.0, 0.07), 10);
    CHECK(orbit.size() == 5);

    IntersectionSet rec = recurrence_set(sc.algebra, sc.group, polar(1.0, 0.07), 10);
    CHECK(rec.members.size() == 5);
}

TEST_CASE("translation plane expectations") {
    Scenario sc = make_scenario("translation_plane");
    CHECK(sc.expected.proper == true);
    CHECK(sc.expected.free_action == true);
    std::vector<Vec> rec = sc.oracles.recurrence(Vec{0.3, 0.4}, 8);
    REQUIRE(rec.size() == 1);  // trivial recurrence
    CHECK(distance(rec[0], Vec{0.3, 0.4}) == 0.0);

    IntersectionSet numeric = recurrence_set(sc.algebra, sc.group, Vec{0.3, 0.4}, 8);
    REQUIRE(numeric.members.size() == 1);
    CHECK(distance(numeric.members[0].point, Vec{0.3, 0.4}) <= 1e-9);
}

TEST_CASE("expected verdict table matches the catalog wiring") {
    CHECK(make_scenario("wedge", 4).expected.hausdorff == true);
    CHECK(make_scenario("wedge_plus_ray", 4).expected.hausdorff == false);
    CHECK(make_scenario("wedge_plus_ray", 4).expected.orbifold_like == true);
    CHECK(make_scenario("full_disc", 4, GroupKind::line).expected.proper == false);
    CHECK(make_scenario("wedge", 4).expected.proper == true);
}

TEST_CASE("oracle comparison harness") {
    Scenario sc = make_scenario("wedge", 4);
    Vec x0 = polar(1.5, 0.5);

    OracleResidual lift_res = oracle_compare_trajectory(sc, x0, -0.99, 0.99, 64);
    CHECK(lift_res.residual <= 1e-6);

    OracleResidual esc = oracle_compare_escape(sc, x0);
    CHECK(esc.residual <= 1e-3);

    Scenario full = make_scenario("full_disc", 4);
    OracleResidual rec = oracle_compare_recurrence(full, polar(1.0, 0.1), 8);
    CHECK(rec.residual <= 1e-6);

    Scenario tp = make_scenario("translation_plane");
    CHECK_NOTHROW(oracle_compare_escape(tp, Vec{0.0, 0.0}));
    Scenario aff = make_scenario("affine_line");
    CHECK_THROWS_AS(oracle_compare_recurrence(aff, Vec{0.1}, 4), Error);
}

TEST_CASE("complete scenarios: cover recurrence trivial, circle recurrence = Z orbits") {
    Scenario line = make_scenario("full_disc", 4, GroupKind::line);
    Scenario circle = make_scenario("full_disc", 4, GroupKind::circle);
    CounterRng rng(73);
    for (int i = 0; i < 10; ++i) {
        Vec x = line.random_point(rng, 0.1);
        IntersectionSet cover_rec = recurrence_set(line.algebra, line.group, x, 8);
        REQUIRE(cover_rec.members.size() == 1);
        CHECK(distance(cover_rec.members[0].point, x) <= 1e-9);

        IntersectionSet disc_rec = recurrence_set(circle.algebra, circle.group, x, 8);
        std::vector<Vec> oracle = circle.oracles.recurrence(x, 8);
        CHECK(disc_rec.members.size() == oracle.size());
        for (const Vec& m : oracle) CHECK(disc_rec.contains(m, 1e-6));
    }
}

TEST_CASE("oracles agree with the numerics across rotation orders") {
    CounterRng rng(83);
    for (int n : {3, 5, 7}) {
        Scenario sc = make_scenario("wedge", n);
        for (int i = 0; i < 5; ++i) {
            Vec x = sc.random_point(rng, 0.08);
            CHECK(oracle_compare_escape(sc, x).residual <= 1e-3);
            CHECK(oracle_compare_recurrence(sc, x, std::max(8, 2 * n)).residual <= 1e-6);
        }
        // leaf intervals at annulus points have length n - 2
        Vec mid = polar(1.5, 0.5);
        LeafRange lr = leaf_range(sc.algebra, sc.group, mid, 2.0 * n);
        CHECK(lr.length() == doctest::Approx(n - 2.0).epsilon(2e-3));
        CHECK(lr.rays[0].bracket_verified);
        CHECK(lr.rays[1].bracket_verified);
    }
}

TEST_CASE("wedge plus ray splits the escape interval at the slit") {
    Scenario sc = make_scenario("wedge_plus_ray", 4);
    // below the ray: arc (1/4, 1/2), theta0 = 0.45 -> W = (4(0.25-0.45), 4(0.5-0.45))
    auto [lo, hi] = sc.oracles.escape_interval(polar(1.5, 0.45));
    CHECK(lo == doctest::Approx(-0.8));
    CHECK(hi == doctest::Approx(0.2));
    OracleResidual esc = oracle_compare_escape(sc, polar(1.5, 0.45));
    CHECK(esc.residual <= 1e-3);
}
