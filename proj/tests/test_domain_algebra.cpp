#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leafspace/catalog.hpp"
#include "leafspace/error.hpp"
#include "leafspace/rng.hpp"

using namespace leafspace;

TEST_CASE("wedge-removed domain containment") {
    Scenario sc = make_scenario("wedge", 4);
    const ChartDomain& dom = sc.algebra.domain();

    // the removed annular wedge covers r >= 1, |theta| <= 1/4
    CHECK_FALSE(dom.contains(polar(1.5, 0.0)));
    CHECK(dom.contains(polar(0.5, 0.0)));
    CHECK_FALSE(dom.contains(polar(2.5, 0.3)));
    // closed obstacle: the bounding radius belongs to the wedge
    CHECK_FALSE(dom.contains(polar(1.5, 0.25)));
    CHECK(dom.contains(polar(1.5, 0.26)));
    CHECK(dom.contains(Vec{0.0, 0.0}));
}

TEST_CASE("signed distance is sign-consistent with containment") {
    Scenario sc = make_scenario("wedge_plus_ray", 4);
    const ChartDomain& dom = sc.algebra.domain();
    CounterRng rng(7);
    int inside_count = 0;
    for (int i = 0; i < 2000; ++i) {
        Vec p{rng.uniform(-2.2, 2.2), rng.uniform(-2.2, 2.2)};
        auto [in, dist] = in_domain(dom, p);
        if (dist > 0.0) CHECK(in);
        if (dist < 0.0) CHECK_FALSE(in);
        if (in) {
            ++inside_count;
            CHECK(dist > 0.0);  // the domain is open
        }
    }
    CHECK(inside_count > 100);
}

TEST_CASE("distance estimates are 1-Lipschitz") {
    // step capping relies on distance fields never over-promising clearance
    for (const char* name : {"wedge", "wedge_plus_ray", "full_disc"}) {
        Scenario sc = make_scenario(name, 4);
        const ChartDomain& dom = sc.algebra.domain();
        CounterRng rng(19);
        for (int i = 0; i < 1500; ++i) {
            Vec a{rng.uniform(-2.1, 2.1), rng.uniform(-2.1, 2.1)};
            Vec b = a + rng.uniform(1e-4, 0.3) * rng.unit_vec(2);
            double gap = std::abs(dom.signed_distance(a) - dom.signed_distance(b));
            CHECK(gap <= distance(a, b) * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("slit distance estimate near the removed ray") {
    Scenario sc = make_scenario("wedge_plus_ray", 4);
    const ChartDomain& dom = sc.algebra.domain();
    Vec just_off = polar(1.5, 0.5 + 1e-3);
    CHECK(dom.contains(just_off));
    double d = dom.signed_distance(just_off);
    CHECK(d > 0.0);
    CHECK(d < 1.5 * kTurn * 1.1e-3);  // close to the arc distance from the slit
    CHECK_FALSE(dom.contains(polar(1.5, 0.5)));
}

TEST_CASE("evaluate: rotation field values and linearity") {
    Scenario sc = make_scenario("full_disc", 4);
    const auto& alg = sc.algebra;

    Vec v = alg.evaluate(Vec{1.0}, Vec{1.0, 0.0});
    CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));

    Vec at_zero = alg.evaluate(Vec{1.0}, Vec{0.0, 0.0});
    CHECK(at_zero.norm() == 0.0);

    Vec zero_coeff = alg.evaluate(Vec{0.0}, Vec{0.3, 0.4});
    CHECK(zero_coeff.norm() == 0.0);

    CHECK_THROWS_AS(alg.evaluate(Vec{1.0}, Vec{2.5, 0.0}), Error);

    CounterRng rng(3);
    Scenario aff = make_scenario("affine_line");
    for (int i = 0; i < 50; ++i) {
        Vec x{rng.uniform(-3.0, 3.0)};
        double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        Vec X = rng.uniform_vec(2, -1.0, 1.0), Y = rng.uniform_vec(2, -1.0, 1.0);
        Vec lhs = aff.algebra.evaluate(a * X + b * Y, x);
        Vec rhs = a * aff.algebra.evaluate(X, x) + b * aff.algebra.evaluate(Y, x);
        CHECK(distance(lhs, rhs) <= 1e-14);
    }
}

TEST_CASE("bracket defect detects homomorphisms and their failure") {
    // single-generator algebra commutes with itself
    Scenario rot = make_scenario("full_disc", 4);
    CHECK(bracket_defect(rot.algebra, 0, 0, Vec{0.7, 0.2}, 1e-3) <= 1e-6);

    // affine algebra on R: [d_x, x d_x] = d_x holds exactly
    Scenario aff = make_scenario("affine_line");
    CHECK(bracket_defect(aff.algebra, 0, 1, Vec{0.7}, 1e-3) <= 1e-4);

    // perturbed second generator x^2 d_x with unchanged constants:
    // true bracket is 2x d_x, declared one is d_x, mismatch |2x-1| = 1 at x=1
    StructureConstants c(2);
    c.set(0, 0, 1, 1.0);
    ChartDomain dom(1, "line", make_disc(Vec{0.0}, 4.0));
    VectorFieldAlgebra bad(dom,
                           {[](const Vec&) { return Vec{1.0}; },
                            [](const Vec& x) { return Vec{x[0] * x[0]}; }},
                           c);
    CHECK(bracket_defect(bad, 0, 1, Vec{1.0}, 1e-3) > 0.1);
}

TEST_CASE("bracket defect guards its stencil") {
    Scenario sc = make_scenario("wedge", 4);
    Vec near_edge = polar(1.5, 0.2505);
    CHECK_THROWS_AS(bracket_defect(sc.algebra, 0, 0, near_edge, 1e-2), Error);
}

TEST_CASE("structure constants are validated symbolically") {
    StructureConstants good(3);
    good.set(2, 0, 1, 1.0);  // [e0,e1] = e2, heisenberg: jacobi holds
    ChartDomain dom(1, "line", make_disc(Vec{0.0}, 2.0));
    auto zero_field = [](const Vec&) { return Vec{0.0}; };
    CHECK_NOTHROW(VectorFieldAlgebra(dom, {zero_field, zero_field, zero_field}, good));

    StructureConstants bad(3);
    bad.set(1, 0, 1, 1.0);  // [e0,e1] = e1
    bad.set(2, 1, 2, 1.0);  // [e1,e2] = e2  -> jacobi residual = 1
    CHECK(bad.jacobi_residual() > 0.5);
    CHECK_THROWS_AS(VectorFieldAlgebra(dom, {zero_field, zero_field, zero_field}, bad), Error);
}
