#include "leafspace/catalog.hpp"

#include <cmath>
#include <sstream>

#include "leafspace/error.hpp"

namespace leafspace {

namespace {

constexpr double kSlitEps = 1e-9;
constexpr double kUnbounded = 1e30;

VectorField rotation_field(int n) {
    const double omega = kTurn / n;
    return [omega](const Vec& z) { return Vec{-omega * z[1], omega * z[0]}; };
}

/// Allowed angular arc (in turn units) around a point of the wedge-removed
/// annulus, optionally split by the ray at theta = 1/2. Returns the maximal
/// open t-interval of the flow parameter.
std::pair<double, double> disc_escape_interval(const Vec& x0, int n, bool with_ray) {
    const double r = x0.norm();
    if (r < 1.0) return {-kUnbounded, kUnbounded};
    const double theta0 = angle_turns(x0[0], x0[1]);
    double lo = 1.0 / n, hi = 1.0 - 1.0 / n;  // allowed arc of the wedge complement
    if (with_ray) {
        if (theta0 < 0.5)
            hi = 0.5;
        else
            lo = 0.5;
    }
    return {static_cast<double>(n) * (lo - theta0), static_cast<double>(n) * (hi - theta0)};
}

Vec rotate_turns(const Vec& x, double turns) {
    double c = std::cos(kTurn * turns), s = std::sin(kTurn * turns);
    return Vec{c * x[0] - s * x[1], s * x[0] + c * x[1]};
}

OracleSet disc_oracles(int n, bool with_wedge, bool with_ray, GroupKind group) {
    OracleSet o;
    o.trajectory = [n](double phi, const Vec& x0) { return rotate_turns(x0, phi / n); };
    o.escape_interval = [n, with_wedge, with_ray](const Vec& x0) {
        if (!with_wedge) return std::pair<double, double>{-kUnbounded, kUnbounded};
        return disc_escape_interval(x0, n, with_ray);
    };
    o.recurrence = [n, with_wedge, with_ray, group](const Vec& x0, int budget) {
        std::vector<Vec> out;
        if (group == GroupKind::line) {
            out.push_back(x0);
            return out;
        }
        auto window = with_wedge ? disc_escape_interval(x0, n, with_ray)
                                 : std::pair<double, double>{-kUnbounded, kUnbounded};
        for (int z = -budget; z <= budget; ++z) {
            if (z <= window.first || z >= window.second) continue;
            Vec y = rotate_turns(x0, static_cast<double>(z) / n);
            bool fresh = true;
            for (const Vec& m : out)
                if (distance(m, y) <= 1e-9) fresh = false;
            if (fresh) out.push_back(y);
        }
        std::sort(out.begin(), out.end(), lex_less);
        return out;
    };
    o.isotropy_order = [n, group](const Vec& x0) {
        if (x0.norm() > 1e-9) return 1;
        return group == GroupKind::circle ? n : -1;  // -1: continuum isotropy at the center
    };
    return o;
}

GroupSpec group_for(GroupKind kind, int k) {
    if (kind == GroupKind::line) return GroupSpec(k);
    std::vector<Vec> gens;
    for (int i = 0; i < k; ++i) gens.push_back(Vec::unit(k, i));
    return GroupSpec(k, gens);
}

Scenario disc_scenario(const std::string& name, int n, GroupKind group, bool with_wedge,
                       bool with_ray) {
    if (n <= 2) fail(ErrorCode::invalid_parameter, "disc scenarios require n > 2");
    Scenario sc;
    sc.name = name;
    sc.n = n;
    sc.group_kind = group;

    std::vector<RegionPtr> obstacles;
    if (with_wedge) obstacles.push_back(make_wedge(1.0, 0.0, 1.0 / n));
    if (with_ray) obstacles.push_back(make_slit(Vec{-1.0, 0.0}, Vec{-2.0, 0.0}, kSlitEps));
    ChartDomain domain(2, name, make_disc(Vec{0.0, 0.0}, 2.0), std::move(obstacles));

    StructureConstants c(1);
    sc.algebra = VectorFieldAlgebra(domain, {rotation_field(n)}, c);
    sc.group = group_for(group, 1);
    sc.oracles = disc_oracles(n, with_wedge, with_ray, group);

    sc.expected.isotropy_at_center = group == GroupKind::circle ? n : -1;
    sc.expected.orbifold_like = true;
    sc.expected.hausdorff = !with_ray;
    sc.expected.proper = group == GroupKind::circle;  // the center has continuum cover isotropy
    sc.expected.free_action = false;

    sc.default_K = std::max(8, 2 * n);
    sc.default_B = 10.0;
    sc.sample_box_halfwidth = Vec{2.0, 2.0};
    sc.sample_margin = 0.05;

    if (with_wedge) {
        sc.interesting_loci = {polar(1.0, 0.5), polar(1.0, 1.0 / n + 0.04),
                               polar(1.3, 1.0 / n + 0.03), polar(1.3, 1.0 - 1.0 / n - 0.03),
                               polar(0.97, 0.5)};
        if (with_ray) {
            sc.interesting_loci.push_back(polar(1.0, 0.5 - 0.04));
            sc.interesting_loci.push_back(polar(1.0, 0.5 + 0.04));
            sc.interesting_loci.push_back(polar(1.4, 0.5 - 0.03));
            sc.interesting_loci.push_back(polar(1.4, 0.5 + 0.03));
        }
    } else {
        sc.interesting_loci = {polar(1.0, 0.1), polar(0.5, 0.7)};
    }
    return sc;
}

Scenario translation_scenario() {
    Scenario sc;
    sc.name = "translation_plane";
    sc.n = 0;
    sc.group_kind = GroupKind::line;
    ChartDomain domain(2, "translation_plane", make_full_space(2));
    StructureConstants c(1);
    sc.algebra = VectorFieldAlgebra(domain, {[](const Vec&) { return Vec{1.0, 0.0}; }}, c);
    sc.group = GroupSpec(1);
    sc.oracles.trajectory = [](double phi, const Vec& x0) { return x0 + phi * Vec{1.0, 0.0}; };
    sc.oracles.escape_interval = [](const Vec&) {
        return std::pair<double, double>{-kUnbounded, kUnbounded};
    };
    sc.oracles.recurrence = [](const Vec& x0, int) { return std::vector<Vec>{x0}; };
    sc.oracles.isotropy_order = [](const Vec&) { return 1; };
    sc.expected.orbifold_like = true;
    sc.expected.hausdorff = true;
    sc.expected.proper = true;
    sc.expected.free_action = true;
    sc.default_K = 8;
    sc.default_B = 10.0;
    sc.sample_box_halfwidth = Vec{3.0, 3.0};
    sc.interesting_loci = {Vec{0.0, 0.0}, Vec{1.0, -1.0}};
    return sc;
}

Scenario affine_scenario() {
    Scenario sc;
    sc.name = "affine_line";
    sc.n = 0;
    sc.group_kind = GroupKind::line;
    ChartDomain domain(1, "affine_line", make_disc(Vec{0.0}, 4.0));
    StructureConstants c(2);
    c.set(0, 0, 1, 1.0);  // [e1, e2] = e1
    sc.algebra = VectorFieldAlgebra(
        domain,
        {[](const Vec&) { return Vec{1.0}; }, [](const Vec& x) { return Vec{x[0]}; }}, c);
    sc.group = GroupSpec(2);
    sc.default_K = 4;
    sc.default_B = 2.0;
    sc.sample_box_halfwidth = Vec{3.0};
    sc.interesting_loci = {Vec{0.0}, Vec{0.7}};
    return sc;
}

}  // namespace

Vec Scenario::random_point(CounterRng& rng, double margin) const {
    if (margin < 0.0) margin = sample_margin;
    const int d = algebra.domain().dimension();
    for (int tries = 0; tries < 100000; ++tries) {
        Vec p(d);
        for (int i = 0; i < d; ++i)
            p[i] = rng.uniform(-sample_box_halfwidth[i], sample_box_halfwidth[i]);
        if (algebra.domain().contains(p) && algebra.domain().signed_distance(p) >= margin)
            return p;
    }
    fail(ErrorCode::invalid_parameter, "could not sample a point inside the domain");
}

Scenario make_scenario(const std::string& name, int n, GroupKind group) {
    if (name == "full_disc") return disc_scenario(name, n, group, false, false);
    if (name == "wedge") return disc_scenario(name, n, group, true, false);
    if (name == "wedge_plus_ray") return disc_scenario(name, n, group, true, true);
    if (name == "translation_plane") return translation_scenario();
    if (name == "affine_line") return affine_scenario();
    fail(ErrorCode::unknown_scenario, name);
}

bool scenario_known(const std::string& name) {
    for (const auto& s : scenario_names())
        if (s == name) return true;
    return false;
}

std::vector<std::string> scenario_names() {
    return {"full_disc", "wedge", "wedge_plus_ray", "translation_plane", "affine_line"};
}

OracleResidual oracle_compare_trajectory(const Scenario& sc, const Vec& x0, double phi_lo,
                                         double phi_hi, int samples,
                                         const IntegrateOptions& opts) {
    if (!sc.oracles.trajectory) fail(ErrorCode::oracle_missing, "no trajectory oracle");
    OracleResidual res;
    res.what = "trajectory";
    IntegrateOptions o = opts;
    o.record_samples = true;
    o.max_samples = std::max(64, samples);
    Vec X = Vec::unit(sc.algebra.algebra_dim(), 0);
    for (double target : {phi_lo, phi_hi}) {
        if (target == 0.0) continue;
        FlowOutcome f = flow(sc.algebra, X, target, x0, o);
        for (const auto& [t, y] : f.samples) {
            res.residual = std::max(res.residual, distance(y, sc.oracles.trajectory(t, x0)));
            ++res.points;
        }
    }
    return res;
}

OracleResidual oracle_compare_escape(const Scenario& sc, const Vec& x0,
                                     const IntegrateOptions& opts) {
    if (!sc.oracles.escape_interval) fail(ErrorCode::oracle_missing, "no escape oracle");
    OracleResidual res;
    res.what = "escape-interval";
    auto [o_lo, o_hi] = sc.oracles.escape_interval(x0);
    LeafRange lr = leaf_range(sc.algebra, sc.group, x0, sc.default_B, opts);
    double n_hi = lr.rays[0].hit_window_edge ? kUnbounded : lr.rays[0].reach;
    double n_lo = lr.rays[1].hit_window_edge ? -kUnbounded : -lr.rays[1].reach;
    auto clip = [&](double v) { return std::clamp(v, -sc.default_B, sc.default_B); };
    res.residual = std::max(std::abs(clip(n_hi) - clip(o_hi)), std::abs(clip(n_lo) - clip(o_lo)));
    res.points = 2;
    return res;
}

OracleResidual oracle_compare_recurrence(const Scenario& sc, const Vec& x0, int budget_K,
                                         const IntegrateOptions& opts) {
    if (!sc.oracles.recurrence) fail(ErrorCode::oracle_missing, "no recurrence oracle");
    OracleResidual res;
    res.what = "recurrence";
    std::vector<Vec> expect = sc.oracles.recurrence(x0, budget_K);
    IntersectionSet got = recurrence_set(sc.algebra, sc.group, x0, budget_K, opts);
    // Hausdorff distance between the two member sets.
    double h = 0.0;
    for (const Vec& m : expect) {
        double best = kUnbounded;
        for (const auto& g : got.members) best = std::min(best, distance(g.point, m));
        h = std::max(h, best);
    }
    for (const auto& g : got.members) {
        double best = kUnbounded;
        for (const Vec& m : expect) best = std::min(best, distance(g.point, m));
        h = std::max(h, best);
    }
    res.residual = h;
    res.points = static_cast<int>(expect.size());
    return res;
}

}  // namespace leafspace
