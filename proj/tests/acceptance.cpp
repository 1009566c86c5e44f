// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one pass/fail line each. Exit code 0 iff all criteria pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "leafspace/bundle.hpp"
#include "leafspace/completion.hpp"
#include "leafspace/runner.hpp"

using namespace leafspace;

namespace {

struct Criterion {
    int id;
    std::string title;
    double time_budget_s;
    std::function<bool(std::string&)> body;
};

bool run_criterion(const Criterion& c) {
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = c.body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = secs < c.time_budget_s;
    std::printf("[%s] criterion %2d: %s (%.2f s / %.0f s)%s%s\n",
                ok && in_budget ? "PASS" : "FAIL", c.id, c.title.c_str(), secs, c.time_budget_s,
                detail.empty() ? "" : " -- ", detail.c_str());
    return ok && in_budget;
}

Vec rotate_turns(const Vec& x, double turns) {
    return Mat::rotation2(kTurn * turns).apply(x);
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;

    // 1. Closed-form lift agreement on the wedge scenario.
    criteria.push_back({1, "closed-form lift agreement (wedge n=4, deviation <= 1e-6)", 1.0,
                        [](std::string& detail) {
                            Scenario sc = make_scenario("wedge", 4);
                            Vec x0 = polar(1.5, 0.5);
                            OracleResidual res =
                                oracle_compare_trajectory(sc, x0, -0.999, 0.999, 256);
                            std::ostringstream os;
                            os << "max deviation " << res.residual << " over " << res.points
                               << " samples";
                            detail = os.str();
                            return res.points > 50 && res.residual <= 1e-6;
                        }});

    // 2. Escape interval and leaf range.
    criteria.push_back({2, "escape parameters +-1 within 1e-3, leaf range of length n-2", 1.0,
                        [](std::string& detail) {
                            Scenario sc = make_scenario("wedge", 4);
                            Vec x0 = polar(1.5, 0.5);
                            FlowOutcome fwd = flow(sc.algebra, Vec{1.0}, 4.0, x0);
                            FlowOutcome bwd = flow(sc.algebra, Vec{1.0}, -4.0, x0);
                            if (!fwd.escaped() || !bwd.escaped()) return false;
                            LeafRange lr = leaf_range(sc.algebra, sc.group, x0, 10.0);
                            std::ostringstream os;
                            os << "t+ = " << fwd.escape_parameter << ", t- = "
                               << bwd.escape_parameter << ", |W| = " << lr.length();
                            detail = os.str();
                            return std::abs(fwd.escape_parameter - 1.0) <= 1e-3 &&
                                   std::abs(bwd.escape_parameter + 1.0) <= 1e-3 &&
                                   std::abs(lr.t_plus() - 1.0) <= 1e-3 &&
                                   std::abs(lr.t_minus() + 1.0) <= 1e-3 &&
                                   std::abs(lr.length() - 2.0) <= 2e-3;
                        }});

    // 3. Recurrence cardinality across n, plus cover-group singletons.
    criteria.push_back(
        {3, "recurrence |I(e;e,x)| = n for n in {3,4,5,8}, singletons over the cover", 10.0,
         [](std::string& detail) {
             CounterRng rng(101);
             for (int n : {3, 4, 5, 8}) {
                 Scenario sc = make_scenario("full_disc", n);
                 int budget = std::max(8, n);
                 for (int i = 0; i < 50; ++i) {
                     Vec x = sc.random_point(rng, 0.05);
                     if (x.norm() < 0.05) continue;
                     IntersectionSet rec = recurrence_set(sc.algebra, sc.group, x, budget);
                     if (static_cast<int>(rec.members.size()) != n) {
                         detail = "cardinality mismatch at n=" + std::to_string(n);
                         return false;
                     }
                     for (int z = 0; z < n; ++z)
                         if (!rec.contains(rotate_turns(x, static_cast<double>(z) / n), 1e-6)) {
                             detail = "member off the Z_n orbit at n=" + std::to_string(n);
                             return false;
                         }
                 }
             }
             Scenario line = make_scenario("full_disc", 4, GroupKind::line);
             for (int i = 0; i < 50; ++i) {
                 Vec x = line.random_point(rng, 0.05);
                 IntersectionSet rec = recurrence_set(line.algebra, line.group, x, 8);
                 if (rec.members.size() != 1 || distance(rec.members[0].point, x) > 1e-9) {
                     detail = "cover recurrence not a singleton";
                     return false;
                 }
             }
             detail = "4 x 50 circle points + 50 cover points";
             return true;
         }});

    // 4. Orbifold isotropy at the center and uniformity at atlas samples.
    criteria.push_back(
        {4, "isotropy Z_n at 0, rotation Jacobians, orbifold verdict on the wedge", 10.0,
         [](std::string& detail) {
             Scenario sc = make_scenario("wedge", 4);
             UniformityReport center =
                 uniformity_check(sc.algebra, sc.group, Vec{0.0, 0.0}, 0.05, 8);
             if (center.isotropy_order != 4 || !center.uniform ||
                 !center.properly_discontinuous) {
                 detail = "center isotropy/uniformity failed: " + center.note;
                 return false;
             }
             for (int k = 1; k <= 4; ++k) {
                 HolonomyTransform tr = holonomy_transform(
                     sc.algebra, GroupPath::linear(Vec{0.0}, Vec{static_cast<double>(k)}),
                     {Vec{0.0, 0.0}});
                 if ((tr.jacobians[0] - Mat::rotation2(kTurn * k / 4)).max_abs() > 1e-6) {
                     detail = "holonomy Jacobian at 0 is not the expected rotation";
                     return false;
                 }
             }
             CounterRng rng(103);
             for (int i = 0; i < 50; ++i) {
                 Vec x = sc.random_point(rng);
                 double r = uniform_ball_radius(sc.algebra, sc.group, x, 8, 0.05);
                 UniformityReport u = uniformity_check(sc.algebra, sc.group, x, r, 8);
                 if (!u.uniform || !u.properly_discontinuous) {
                     detail = "uniformity failed at a sample: " + u.note;
                     return false;
                 }
             }
             detail = "center order 4, 50 samples uniform and properly discontinuous";
             return true;
         }});

    // 5. Identity suite: 200 randomized trials, zero violations.
    criteria.push_back({5, "intersection-set identity suite, 200 trials, 0 violations", 30.0,
                        [](std::string& detail) {
                            CounterRng rng(107);
                            Scenario full = make_scenario("full_disc", 4);
                            auto fs = [&full](CounterRng& r) { return full.random_point(r); };
                            IdentityReport a =
                                identity_check(full.algebra, full.group, fs, 100, 8, rng, 1.2);
                            Scenario wedge = make_scenario("wedge", 4);
                            auto ws = [&wedge](CounterRng& r) { return wedge.random_point(r); };
                            IdentityReport b =
                                identity_check(wedge.algebra, wedge.group, ws, 100, 8, rng, 1.2);
                            std::ostringstream os;
                            os << a.checks + b.checks << " checks, "
                               << a.violations + b.violations << " violations";
                            detail = os.str();
                            if (a.violations + b.violations > 0 && !a.failures.empty())
                                detail += " [" + a.failures.front() + "]";
                            return a.violations + b.violations == 0;
                        }});

    // 6. Hausdorff discrimination with witness family.
    criteria.push_back(
        {6, "hausdorff: wedge passes, wedge_plus_ray fails with a witness", 30.0,
         [](std::string& detail) {
             CounterRng rng(109);
             Scenario wedge = make_scenario("wedge", 4);
             std::vector<Vec> loci = wedge.interesting_loci;
             for (int i = 0; i < 20; ++i) loci.push_back(wedge.random_point(rng));
             auto fams = generate_families(wedge.algebra, wedge.group, loci, 8, rng);
             HausdorffReport pass = hausdorff_check(wedge.algebra, wedge.group, fams, 8);

             Scenario ray = make_scenario("wedge_plus_ray", 4);
             std::vector<Vec> rloci = ray.interesting_loci;
             for (int i = 0; i < 20; ++i) rloci.push_back(ray.random_point(rng));
             auto rfams = generate_families(ray.algebra, ray.group, rloci, 8, rng);
             HausdorffReport fail_rep = hausdorff_check(ray.algebra, ray.group, rfams, 8);

             std::ostringstream os;
             os << "wedge " << pass.families_passed << "/" << pass.families_checked
                << " families; wedge_plus_ray counterexample "
                << (fail_rep.counterexample ? fail_rep.counterexample->origin : "none");
             detail = os.str();
             return pass.hausdorff && pass.families_checked > 20 && !fail_rep.hausdorff &&
                    fail_rep.counterexample.has_value();
         }});

    // 7. Properness discrimination.
    criteria.push_back(
        {7, "properness: translation proper, cover rotation non-proper at 0, wedge proper", 30.0,
         [](std::string& detail) {
             CounterRng rng(113);
             Scenario tp = make_scenario("translation_plane");
             std::vector<Vec> tloci = tp.interesting_loci;
             for (int i = 0; i < 8; ++i) tloci.push_back(tp.random_point(rng));
             auto tf = generate_proper_families(tp.algebra, tp.group, tloci, 0, 10.0, rng);
             ProperReport trep = proper_check(tp.algebra, tp.group, tf, 10.0, 8);

             Scenario rot = make_scenario("full_disc", 4, GroupKind::line);
             std::vector<Vec> rloci = {Vec{0.0, 0.0}};
             for (int i = 0; i < 8; ++i) rloci.push_back(rot.random_point(rng));
             auto rf = generate_proper_families(rot.algebra, rot.group, rloci, 0, 10.0, rng);
             ProperReport rrep = proper_check(rot.algebra, rot.group, rf, 10.0, 8);
             IsotropyCompactnessReport iso =
                 isotropy_compactness(rot.algebra, rot.group, Vec{0.0, 0.0}, 10.0, 8);

             Scenario wedge = make_scenario("wedge", 4);
             std::vector<Vec> wloci = {Vec{0.0, 0.0}};
             for (int i = 0; i < 8; ++i) wloci.push_back(wedge.random_point(rng));
             auto wf = generate_proper_families(wedge.algebra, wedge.group, wloci, 0, 10.0, rng);
             ProperReport wrep = proper_check(wedge.algebra, wedge.group, wf, 10.0, 8);

             std::ostringstream os;
             os << "translation " << (trep.proper ? "proper" : "NOT")
                << ", cover rotation " << (rrep.proper ? "PROPER?" : "non-proper")
                << " (isotropy at 0 " << (iso.whole_window ? "continuum" : "discrete")
                << "), wedge " << (wrep.proper ? "proper" : "NOT");
             detail = os.str();
             return trep.proper && !rrep.proper && iso.whole_window && !iso.compact_proxy &&
                    wrep.proper;
         }});

    // 8. Slice verification (conditions 2, 3, 5) and the degenerate flag.
    criteria.push_back(
        {8, "slice residuals at (1.5, theta=1/4) and 20 random points, degenerate only at 0", 10.0,
         [](std::string& detail) {
             Scenario sc = make_scenario("wedge", 8);
             SliceReport pinned = build_slice(sc.algebra, polar(1.5, 0.25), 0.12, 16);
             if (pinned.degenerate || !pinned.conditions_pass) {
                 detail = "pinned point failed: " + pinned.note;
                 return false;
             }
             Scenario w4 = make_scenario("wedge", 4);
             CounterRng rng(127);
             int tested = 0;
             for (int i = 0; tested < 20 && i < 200; ++i) {
                 Vec x = w4.random_point(rng, 0.1);
                 if (x.norm() < 0.05) continue;
                 ++tested;
                 double radius = 0.25 * std::min(1.0, w4.algebra.domain().signed_distance(x));
                 SliceReport rep = build_slice(w4.algebra, x, radius, 12);
                 if (rep.degenerate || !rep.conditions_pass) {
                     std::ostringstream os;
                     os << "failed at random point (" << x[0] << ", " << x[1]
                        << "): span=" << rep.spanning_min_sv << " tube=" << rep.tube_coverage;
                     detail = os.str();
                     return false;
                 }
             }
             SliceReport center = build_slice(w4.algebra, Vec{0.0, 0.0}, 0.05, 8);
             if (!center.degenerate) {
                 detail = "degenerate flag missing at the fixed point";
                 return false;
             }
             detail = "pinned + 20 random slices pass, degenerate flag only at 0";
             return true;
         }});

    // 9. Killing defect and metric averaging.
    criteria.push_back(
        {9, "killing defect <= 1e-5; averaging diag(1,2) -> diag(1.5,1.5) within 1e-4", 10.0,
         [](std::string& detail) {
             Scenario rot = make_scenario("full_disc", 4);
             CounterRng rng(131);
             std::vector<Vec> samples;
             for (int i = 0; i < 25; ++i) samples.push_back(rot.random_point(rng, 0.1));
             double kd = killing_defect(rot.algebra, flat_metric(2), samples, 1e-4);
             if (kd > 1e-5) {
                 detail = "flat metric is not Killing-invariant under the rotation";
                 return false;
             }
             Mat aniso(2, 2);
             aniso(0, 0) = 1.0;
             aniso(1, 1) = 2.0;
             // brute-force quadrature oracle over exact rotations
             Mat oracle(2, 2);
             const int nodes = 256;
             for (int j = 0; j < nodes; ++j) {
                 Mat r = Mat::rotation2(kTurn * j / nodes);
                 oracle = oracle + r.transpose().mul(aniso).mul(r) * (1.0 / nodes);
             }
             double worst = 0.0;
             for (double theta : {0.13, 0.4, 0.77}) {
                 Mat avg = average_metric(rot.algebra, rot.group, constant_metric(aniso),
                                          polar(1.0, theta), 256);
                 worst = std::max(worst, (avg - oracle).max_abs());
             }
             std::ostringstream os;
             os << "killing defect " << kd << ", averaging deviation " << worst;
             detail = os.str();
             return worst <= 1e-4;
         }});

    // 10. Bundle lift: loop transport, superposition, projection commutation.
    criteria.push_back(
        {10, "tangent-lift transport = rotation by 2 pi / n; 50 random superposition cases", 10.0,
         [](std::string& detail) {
             Scenario sc = make_scenario("full_disc", 4);
             LinearLift lift = tangent_lift(sc.algebra);
             GroupPath loop = GroupPath::linear(Vec{0.0}, Vec{1.0});
             BundleLiftResult tr = lift_path_on_bundle(lift, loop, polar(1.0, 0.1), Vec{1.0, 0.0});
             if (!tr.liftable ||
                 distance(tr.fiber_end, Mat::rotation2(kTurn / 4).apply(Vec{1.0, 0.0})) > 1e-6) {
                 detail = "loop transport deviates from the rotation";
                 return false;
             }
             CounterRng rng(137);
             GroupPath path = GroupPath::linear(Vec{0.0}, Vec{0.6});
             for (int i = 0; i < 50; ++i) {
                 Vec x0 = sc.random_point(rng, 0.1);
                 Vec u = rng.uniform_vec(2, -1.0, 1.0), w = rng.uniform_vec(2, -1.0, 1.0);
                 double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
                 BundleLiftResult lu = lift_path_on_bundle(lift, path, x0, u);
                 BundleLiftResult lw = lift_path_on_bundle(lift, path, x0, w);
                 BundleLiftResult lc = lift_path_on_bundle(lift, path, x0, a * u + b * w);
                 if (!lu.liftable || !lw.liftable || !lc.liftable) return false;
                 if ((lc.fiber_end - (a * lu.fiber_end + b * lw.fiber_end)).norm() > 1e-6) {
                     detail = "superposition failed";
                     return false;
                 }
                 LiftResult base = lift_path(sc.algebra, path, x0);
                 if (distance(lc.point_end, base.point_end) > kPointTol) {
                     detail = "projection does not commute with the base lift";
                     return false;
                 }
             }
             detail = "loop transport + 50 random cases";
             return true;
         }});

    // 11. Z-quotient coherence.
    criteria.push_back({11, "Z-quotient: G-classes equal deck unions of cover classes", 10.0,
                        [](std::string& detail) {
                            CounterRng rng(139);
                            for (const char* name : {"full_disc", "wedge"}) {
                                Scenario sc = make_scenario(name, 4);
                                std::vector<Vec> samples;
                                for (int i = 0; i < 10; ++i)
                                    samples.push_back(sc.random_point(rng, 0.1));
                                ZQuotientReport rep =
                                    z_quotient_check(sc.algebra, sc.group, samples, 6);
                                if (!rep.union_relation_holds || !rep.classes_commute) {
                                    detail = std::string(name) + ": " + rep.failure;
                                    return false;
                                }
                            }
                            detail = "full_disc + wedge, 10 samples each";
                            return true;
                        }});

    // 12. Determinism of seeded runs.
    criteria.push_back({12, "fixed-seed runs produce identical reports (timestamp excluded)", 30.0,
                        [](std::string& detail) {
                            RunConfig cfg;
                            cfg.command = "example";
                            cfg.example_name = "wedge";
                            cfg.check = "hausdorff";
                            cfg.n = 4;
                            cfg.seed = 424242;
                            RunResult a = run(cfg);
                            RunResult b = run(cfg);
                            bool equal = stable_report(a.report).dump() ==
                                         stable_report(b.report).dump();
                            detail = equal ? "byte-identical" : "reports differ";
                            return equal && a.exit_code == 0;
                        }});

    int failures = 0;
    for (const auto& c : criteria)
        if (!run_criterion(c)) ++failures;
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
