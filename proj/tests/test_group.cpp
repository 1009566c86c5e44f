#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leafspace/catalog.hpp"
#include "leafspace/error.hpp"
#include "leafspace/group.hpp"
#include "leafspace/rng.hpp"

using namespace leafspace;

TEST_CASE("projection to the fundamental domain") {
    GroupSpec circle(1, {Vec{1.0}});
    CHECK(circle.project(Vec{1.25})[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(circle.project(Vec{-0.75})[0] == doctest::Approx(0.25).epsilon(1e-15));

    GroupSpec line(1);
    CHECK(line.project(Vec{1.25})[0] == 1.25);

    CounterRng rng(5);
    GroupSpec lat2(2, {Vec{1.0, 0.0}, Vec{0.5, 1.0}});
    for (int i = 0; i < 100; ++i) {
        Vec g = rng.uniform_vec(2, -7.0, 7.0);
        Vec p = lat2.project(g);
        CHECK(distance(lat2.project(p), p) <= 1e-12);  // idempotent
        // difference is a lattice element
        Vec diff = g - p;
        double a1 = diff[1] / 1.0;                  // coefficient on (0.5, 1)
        double a0 = diff[0] - 0.5 * a1;             // coefficient on (1, 0)
        CHECK(std::abs(a0 - std::round(a0)) <= 1e-9);
        CHECK(std::abs(a1 - std::round(a1)) <= 1e-9);
    }
}

TEST_CASE("deck orbit enumeration within a window") {
    GroupSpec circle(1, {Vec{1.0}});
    std::vector<Vec> orbit = circle.deck_orbit_in_window(Vec{0.25}, 2.0, 8);
    REQUIRE(orbit.size() == 4);
    CHECK(orbit[0][0] == doctest::Approx(-1.75));
    CHECK(orbit[1][0] == doctest::Approx(-0.75));
    CHECK(orbit[2][0] == doctest::Approx(0.25));
    CHECK(orbit[3][0] == doctest::Approx(1.25));

    // brute-force cross-check of the window predicate
    GroupSpec lat2(2, {Vec{1.0, 0.0}, Vec{0.0, 1.0}});
    Vec base{0.3, -0.4};
    auto got = lat2.deck_orbit_in_window(base, 1.5, 6);
    int expected = 0;
    for (int a = -6; a <= 6; ++a)
        for (int b = -6; b <= 6; ++b) {
            Vec g = base + Vec{static_cast<double>(a), static_cast<double>(b)};
            if (g.inf_norm() <= 1.5) ++expected;
        }
    CHECK(static_cast<int>(got.size()) == expected);
}

TEST_CASE("lattice generators must be independent") {
    CHECK_THROWS_AS(GroupSpec(2, {Vec{1.0, 0.0}, Vec{2.0, 0.0}}), Error);
}

TEST_CASE("mc velocity of paths") {
    Vec v{0.7, -0.3};
    GroupPath lin = GroupPath::linear(Vec{0.0, 0.0}, v);
    for (double t : {0.1, 0.5, 0.9}) CHECK(distance(mc_velocity(lin, t), v) <= 1e-14);

    GroupPath constant = GroupPath::linear(Vec{0.2}, Vec{0.2});
    CHECK(mc_velocity(constant, 0.5).norm() == 0.0);

    // winding path c(t) = k t over R/Z: the integral of the velocity is k
    double k = 3.0;
    GroupPath winding = GroupPath::linear(Vec{0.0}, Vec{k});
    double integral = 0.0;
    int steps = 1000;
    for (int i = 0; i < steps; ++i)
        integral += mc_velocity(winding, (i + 0.5) / steps)[0] / steps;
    CHECK(integral == doctest::Approx(k).epsilon(1e-12));
    CHECK(distance(winding.end() - winding.start(), Vec{k}) <= 1e-12);
}

TEST_CASE("junction parameters are rejected") {
    GroupPath poly = GroupPath::polyline({Vec{0.0}, Vec{1.0}, Vec{0.5}});
    CHECK_THROWS_AS(poly.velocity(0.5), Error);
    CHECK_NOTHROW(poly.velocity(0.25));
    CHECK(poly.is_junction(0.5));
    CHECK_FALSE(poly.is_junction(0.3));
}

TEST_CASE("discontinuous segment lists are rejected") {
    GroupPath::Segment s1{0.0, 0.5, {Vec{0.0}, Vec{1.0}}};
    GroupPath::Segment s2{0.5, 1.0, {Vec{2.0}, Vec{1.0}}};  // starts at 2, previous ends at 1
    CHECK_THROWS_AS(GroupPath(1, {s1, s2}), Error);
}

TEST_CASE("concatenation and interior velocities agree segment-wise") {
    GroupPath a = GroupPath::linear(Vec{0.0}, Vec{1.0});
    GroupPath b = GroupPath::linear(Vec{0.0}, Vec{-0.5});
    GroupPath ab = a.then(b);
    CHECK(distance(ab.value(0.0), Vec{0.0}) <= 1e-12);
    CHECK(distance(ab.value(0.5), Vec{1.0}) <= 1e-12);
    CHECK(distance(ab.value(1.0), Vec{0.5}) <= 1e-12);
    // halves traversed at twice the speed
    CHECK(ab.velocity(0.25)[0] == doctest::Approx(2.0));
    CHECK(ab.velocity(0.75)[0] == doctest::Approx(-1.0));
}

TEST_CASE("flatness defect classifies algebra/group pairings") {
    Scenario rot = make_scenario("full_disc", 4);
    FlatnessReport fr = flatness_defect(rot.algebra, rot.group, polar(0.8, 0.1), 1e-3);
    CHECK(fr.total() <= 1e-6);
    CHECK_FALSE(fr.flagged_nonabelian);

    Scenario aff = make_scenario("affine_line");
    FlatnessReport fa = flatness_defect(aff.algebra, aff.group, Vec{0.7}, 1e-3);
    CHECK(fa.total() >= 1.0);  // c^1_12 = 1 cannot pair with an abelian group
    CHECK(fa.flagged_nonabelian);

    // two commuting translation fields on R^2 with the 2-d line group
    ChartDomain plane(2, "plane", make_full_space(2));
    StructureConstants c(2);
    VectorFieldAlgebra commuting(plane,
                                 {[](const Vec&) { return Vec{1.0, 0.0}; },
                                  [](const Vec&) { return Vec{0.0, 1.0}; }},
                                 c);
    FlatnessReport fc = flatness_defect(commuting, GroupSpec(2), Vec{0.3, 0.4}, 1e-3);
    CHECK(fc.total() <= 1e-6);
}
