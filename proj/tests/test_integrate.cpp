#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leafspace/catalog.hpp"
#include "leafspace/error.hpp"
#include "leafspace/rng.hpp"

using namespace leafspace;

namespace {
const Vec kX{1.0};
}

TEST_CASE("rotation flow has period n on the full disc") {
    Scenario sc = make_scenario("full_disc", 4);
    Vec x0 = polar(1.0, 0.25);
    FlowOutcome f = flow(sc.algebra, kX, 4.0, x0);
    REQUIRE(f.reached());
    CHECK(distance(f.endpoint, x0) <= 1e-6);
}

TEST_CASE("flow with t = 0 returns the start exactly") {
    Scenario sc = make_scenario("wedge", 4);
    Vec x0 = polar(1.5, 0.5);
    FlowOutcome f = flow(sc.algebra, kX, 0.0, x0);
    REQUIRE(f.reached());
    CHECK(distance(f.endpoint, x0) == 0.0);
}

TEST_CASE("wedge escape parameters reproduce 1 < |t + n theta0| < n-1") {
    Scenario sc = make_scenario("wedge", 4);
    Vec x0 = polar(1.5, 0.5);  // forward escape at +1, backward at -1

    FlowOutcome fwd = flow(sc.algebra, kX, 4.0, x0);
    REQUIRE(fwd.escaped());
    CHECK(fwd.escape_parameter == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(fwd.escape_parameter) < 4.0);

    FlowOutcome bwd = flow(sc.algebra, kX, -4.0, x0);
    REQUIRE(bwd.escaped());
    CHECK(bwd.escape_parameter == doctest::Approx(-1.0).epsilon(1e-3));

    // the final trajectory point sits within tolerance of the boundary
    auto [inside, dist] = in_domain(sc.algebra.domain(), fwd.last_inside);
    CHECK(inside);
    CHECK(dist <= 1e-6);
}

TEST_CASE("escape monotonicity: longer flows escape at the same parameter") {
    Scenario sc = make_scenario("wedge", 4);
    Vec x0 = polar(1.2, 0.4);
    FlowOutcome a = flow(sc.algebra, kX, 3.0, x0);
    REQUIRE(a.escaped());
    FlowOutcome b = flow(sc.algebra, kX, 9.0, x0);
    REQUIRE(b.escaped());
    CHECK(a.escape_parameter == doctest::Approx(b.escape_parameter).epsilon(1e-3));
}

TEST_CASE("trajectory agrees with the closed form over the liftable interval") {
    Scenario sc = make_scenario("wedge", 4);
    Vec x0 = polar(1.5, 0.5);
    OracleResidual res = oracle_compare_trajectory(sc, x0, -0.999, 0.999, 128);
    CHECK(res.points > 10);
    CHECK(res.residual <= 1e-6);
}

TEST_CASE("time reversal returns to the start") {
    Scenario sc = make_scenario("full_disc", 5);
    CounterRng rng(11);
    for (int i = 0; i < 30; ++i) {
        Vec x0 = sc.random_point(rng);
        double t = rng.uniform(-3.0, 3.0);
        FlowOutcome out = flow(sc.algebra, kX, t, x0);
        REQUIRE(out.reached());
        FlowOutcome back = flow(sc.algebra, kX, -t, out.endpoint);
        REQUIRE(back.reached());
        CHECK(distance(back.endpoint, x0) <= 1e-6);
    }
}

TEST_CASE("flow group law on the full disc") {
    Scenario sc = make_scenario("full_disc", 3);
    CounterRng rng(13);
    for (int i = 0; i < 100; ++i) {
        Vec x0 = sc.random_point(rng);
        double s = rng.uniform(-2.0, 2.0), t = rng.uniform(-2.0, 2.0);
        FlowOutcome first = flow(sc.algebra, kX, t, x0);
        REQUIRE(first.reached());
        FlowOutcome second = flow(sc.algebra, kX, s, first.endpoint);
        REQUIRE(second.reached());
        FlowOutcome direct = flow(sc.algebra, kX, s + t, x0);
        REQUIRE(direct.reached());
        CHECK(distance(second.endpoint, direct.endpoint) <= 1e-6);
    }
}

TEST_CASE("fixed point at the origin short-circuits") {
    Scenario sc = make_scenario("wedge", 4);
    Vec zero{0.0, 0.0};
    FlowOutcome f = flow(sc.algebra, kX, 1000.0, zero);
    REQUIRE(f.reached());
    CHECK(distance(f.endpoint, zero) == 0.0);
}

TEST_CASE("slit obstacles of width 1e-9 are detected") {
    Scenario sc = make_scenario("wedge_plus_ray", 4);
    // forward flow from theta 0.45 crosses the ray at theta = 1/2 after t = 0.2
    Vec x0 = polar(1.5, 0.45);
    FlowOutcome f = flow(sc.algebra, kX, 2.0, x0);
    REQUIRE(f.escaped());
    CHECK(f.escape_parameter == doctest::Approx(0.2).epsilon(1e-3));

    // under the inner end of the slit the passage stays open
    Vec below = polar(0.9, 0.45);
    FlowOutcome g = flow(sc.algebra, kX, 2.0, below);
    REQUIRE(g.reached());
    CHECK(distance(g.endpoint, polar(0.9, 0.95)) <= 1e-6);
}

TEST_CASE("nonfinite fields are reported as errors") {
    ChartDomain dom(1, "line", make_disc(Vec{0.0}, 2.0));
    StructureConstants c(1);
    VectorFieldAlgebra alg(dom, {[](const Vec& x) {
                               return Vec{x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0};
                           }},
                           c);
    CHECK_THROWS_AS(flow(alg, kX, 2.0, Vec{0.0}), Error);
}

TEST_CASE("points outside the domain are rejected") {
    Scenario sc = make_scenario("wedge", 4);
    CHECK_THROWS_AS(flow(sc.algebra, kX, 1.0, polar(1.5, 0.1)), Error);
}
