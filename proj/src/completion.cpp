#include "leafspace/completion.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "leafspace/error.hpp"
#include "leafspace/parallel.hpp"

namespace leafspace {

namespace {

Vec group_zero(const GroupSpec& spec) { return Vec::zero(spec.dim()); }

/// Member of I(e;e,x) reached through the deck element z, if the straight
/// lift is defined.
std::optional<Vec> deck_member(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                               const Vec& deck, const Vec& x, const IntegrateOptions& opts) {
    LiftResult r = lift_path(algebra, GroupPath::linear(group_zero(spec), deck), x, opts);
    if (!r.liftable) return std::nullopt;
    return r.point_end;
}

}  // namespace

CompletionAtlas build_atlas(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                            const std::vector<Vec>& grid, const std::vector<Vec>& samples,
                            int budget_K, const IntegrateOptions& opts) {
    CompletionAtlas atlas;
    atlas.grid = grid;
    atlas.samples = samples;
    atlas.budget_K = budget_K;

    RecurrencePartition part = recurrence_partition(algebra, spec, samples, budget_K, opts);
    atlas.class_id = part.class_id;
    atlas.class_count = part.class_count;

    // Per-sample isotropy and the orbifold verdict from the uniformity check.
    atlas.isotropy.assign(samples.size(), 0);
    std::vector<uint8_t> sample_ok(samples.size(), 0);
    parallel_for(samples.size(), [&](size_t i) {
        double r = uniform_ball_radius(algebra, spec, samples[i], budget_K, 0.05, opts);
        UniformityReport u = uniformity_check(algebra, spec, samples[i], r, budget_K, opts);
        atlas.isotropy[i] = u.isotropy_order;
        sample_ok[i] = u.uniform && u.properly_discontinuous ? 1 : 0;
    });
    atlas.orbifold_like = std::all_of(sample_ok.begin(), sample_ok.end(),
                                      [](uint8_t v) { return v == 1; });

    // Transitions between chart pairs with the left-translation law residual.
    const size_t n_grid = grid.size();
    atlas.chart_complete.assign(n_grid, 1);
    for (size_t i = 0; i < n_grid; ++i) {
        for (size_t j = 0; j < n_grid; ++j) {
            if (i == j) continue;
            CompletionAtlas::Transition tr;
            tr.from = static_cast<int>(i);
            tr.to = static_cast<int>(j);
            tr.word = word_from_displacement(grid[j] - grid[i]);
            tr.defined.assign(samples.size(), 0);
            std::vector<double> residual(samples.size(), 0.0);
            parallel_for(samples.size(), [&](size_t s) {
                LiftResult direct =
                    lift_path(algebra, GroupPath::linear(grid[i], grid[j]), samples[s], opts);
                if (!direct.liftable) return;
                tr.defined[s] = 1;
                LiftResult translated = lift_path(
                    algebra, GroupPath::linear(group_zero(spec), grid[j] - grid[i]), samples[s], opts);
                if (translated.liftable)
                    residual[s] = distance(direct.point_end, translated.point_end);
                else
                    residual[s] = 1.0;  // equivariance demands both or neither
            });
            for (size_t s = 0; s < samples.size(); ++s) {
                tr.translation_residual = std::max(tr.translation_residual, residual[s]);
                if (!tr.defined[s]) atlas.chart_complete[i] = 0;
            }
            atlas.transitions.push_back(std::move(tr));
        }
    }

    // Triangle consistency on a bounded subset: going around grid triangles
    // must return to the start within tolerance.
    const size_t tri_samples = std::min<size_t>(samples.size(), 8);
    int triangles = 0;
    for (size_t a = 0; a < n_grid && triangles < 16; ++a)
        for (size_t b = a + 1; b < n_grid && triangles < 16; ++b)
            for (size_t c = b + 1; c < n_grid && triangles < 16; ++c, ++triangles)
                for (size_t s = 0; s < tri_samples; ++s) {
                    LiftResult l1 =
                        lift_path(algebra, GroupPath::linear(grid[a], grid[b]), samples[s], opts);
                    if (!l1.liftable) continue;
                    LiftResult l2 =
                        lift_path(algebra, GroupPath::linear(grid[b], grid[c]), l1.point_end, opts);
                    if (!l2.liftable) continue;
                    LiftResult l3 =
                        lift_path(algebra, GroupPath::linear(grid[c], grid[a]), l2.point_end, opts);
                    if (!l3.liftable) continue;
                    atlas.triangle_residual =
                        std::max(atlas.triangle_residual, distance(l3.point_end, samples[s]));
                }

    // Certificate soundness spot check: members re-verify by an independent
    // lift at half the integrator tolerance.
    IntegrateOptions tight = opts;
    tight.rtol *= 0.5;
    tight.atol *= 0.5;
    for (size_t s = 0; s < std::min<size_t>(samples.size(), 10); ++s) {
        IntersectionSet rec = recurrence_set(algebra, spec, samples[s], budget_K, opts);
        for (const auto& m : rec.members) {
            auto replay = deck_member(algebra, spec, m.deck, samples[s], tight);
            double r = replay ? distance(*replay, m.point) : 1.0;
            atlas.fiber_residual = std::max(atlas.fiber_residual, r);
        }
    }
    return atlas;
}

std::vector<SequenceFamily> generate_families(const VectorFieldAlgebra& algebra,
                                              const GroupSpec& spec, const std::vector<Vec>& loci,
                                              int budget_K, CounterRng& rng,
                                              const IntegrateOptions& opts) {
    std::vector<SequenceFamily> families;
    const int d = algebra.domain().dimension();
    const double interior_margin = 1e-2;

    for (const Vec& locus : loci) {
        if (!algebra.domain().contains(locus)) continue;
        if (algebra.domain().signed_distance(locus) < interior_margin) continue;

        std::vector<Vec> directions;
        if (d >= 2 && locus.norm() > 0.1) directions.push_back(locus * (-1.0 / locus.norm()));
        directions.push_back(rng.unit_vec(d));
        if (d == 1) directions.push_back(Vec{-1.0});

        for (const Vec& dir : directions) {
            double step = 0.4;
            std::vector<Vec> ladder;
            bool ok = true;
            for (int j = 3; j <= 12; ++j) {
                Vec xj = locus + std::pow(2.0, -j) * step * dir;
                if (!algebra.domain().contains(xj)) {
                    ok = false;
                    break;
                }
                ladder.push_back(xj);
            }
            if (!ok) continue;

            for (const Vec& deck : spec.deck_window(budget_K)) {
                SequenceFamily fam;
                fam.deck = deck;
                fam.x_limit = locus;
                bool defined = true;
                for (const Vec& xj : ladder) {
                    auto yj = deck_member(algebra, spec, deck, xj, opts);
                    if (!yj) {
                        defined = false;
                        break;
                    }
                    fam.x_seq.push_back(xj);
                    fam.y_seq.push_back(*yj);
                }
                if (!defined || fam.y_seq.size() < 4) continue;
                const Vec& y_last = fam.y_seq.back();
                const Vec& y_prev = fam.y_seq[fam.y_seq.size() - 2];
                if (distance(y_last, y_prev) > 1e-3) continue;  // y_n must converge
                if (algebra.domain().signed_distance(y_last) < interior_margin) continue;
                fam.y_limit = y_last;
                std::ostringstream os;
                os << "locus=(";
                for (int c = 0; c < d; ++c) os << (c ? "," : "") << locus[c];
                os << ") deck=(";
                for (int c = 0; c < deck.size(); ++c) os << (c ? "," : "") << deck[c];
                os << ")";
                fam.origin = os.str();
                families.push_back(std::move(fam));
            }
        }
    }
    return families;
}

HausdorffReport hausdorff_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                const std::vector<SequenceFamily>& families, int budget_K,
                                const IntegrateOptions& opts) {
    HausdorffReport rep;
    rep.budget_K = budget_K;
    rep.match_tol = 1e-3;

    std::vector<uint8_t> passed(families.size(), 0);
    std::vector<uint8_t> valid(families.size(), 1);
    parallel_for(families.size(), [&](size_t i) {
        const SequenceFamily& fam = families[i];
        if (fam.x_seq.empty() || fam.x_seq.size() != fam.y_seq.size()) {
            valid[i] = 0;
            return;
        }
        // Re-certify the last membership before trusting the family.
        auto replay = deck_member(algebra, spec, fam.deck, fam.x_seq.back(), opts);
        if (!replay || distance(*replay, fam.y_seq.back()) > 2.0 * kPointTol) {
            valid[i] = 0;
            return;
        }
        IntersectionSet rec = recurrence_set(algebra, spec, fam.x_limit, budget_K, opts);
        passed[i] = rec.contains(fam.y_limit, 1e-3) ? 1 : 0;
    });

    for (size_t i = 0; i < families.size(); ++i) {
        if (!valid[i]) fail(ErrorCode::uncertified_family, families[i].origin);
        ++rep.families_checked;
        if (passed[i]) {
            ++rep.families_passed;
        } else if (rep.hausdorff) {
            rep.hausdorff = false;
            rep.counterexample = families[i];
            // The failing family exhibits the non-separable pair: the leaves
            // through (e, x_n) converge to [e, y_limit] and to the same class
            // over the deck chart, where the limit leaf misses membership.
            NonSeparablePair pair;
            pair.chart_e_point = families[i].y_limit;
            pair.g_hat = families[i].deck;
            pair.chart_g_point = families[i].x_limit;
            pair.neighbor_x = families[i].x_seq;
            pair.neighbor_y = families[i].y_seq;
            rep.non_separable = pair;
        }
    }
    return rep;
}

std::vector<LimitElementReport> limit_elements(const VectorFieldAlgebra& algebra,
                                               const GroupSpec& spec,
                                               const std::vector<Vec>& boundary_samples,
                                               int budget_K, double window_B,
                                               const IntegrateOptions& opts) {
    std::vector<LimitElementReport> reports;
    const int d = algebra.domain().dimension();
    const Vec e = group_zero(spec);

    for (const Vec& x_hat : boundary_samples) {
        if (!algebra.domain().contains(x_hat)) continue;
        LeafRange lr = leaf_range(algebra, spec, x_hat, window_B, opts);
        if (spec.dim() != 1) continue;  // interval reporting only

        for (int side = 0; side < 2; ++side) {
            const DirectionRange& ray = lr.rays[static_cast<size_t>(side)];
            if (ray.hit_window_edge) continue;
            double end = (side == 0 ? 1.0 : -1.0) * ray.reach;  // signed end of W_x
            LimitElementReport rep;
            rep.x_hat = x_hat;
            rep.g_hat = Vec{-end};  // I(e; g_hat, .) lifts by -g_hat = end

            IntersectionSet at_limit =
                intersection_set(algebra, spec, e, rep.g_hat, x_hat, budget_K, opts);
            rep.empty_at_budget = at_limit.members.empty();
            if (!rep.empty_at_budget) continue;  // leaf still reaches the transversal

            // Search a perturbation direction that extends the leaf range
            // past the end, then build the witness ladder along it.
            for (int dir_axis = 0; dir_axis < d && !rep.verified; ++dir_axis) {
                for (double sign : {1.0, -1.0}) {
                    Vec dir = sign * Vec::unit(d, dir_axis);
                    double probe_step = 1e-3;
                    Vec probe = x_hat + probe_step * dir;
                    if (!algebra.domain().contains(probe)) continue;
                    LiftResult probe_lift =
                        lift_path(algebra, GroupPath::linear(e, Vec{end}), probe, opts);
                    if (!probe_lift.liftable) continue;

                    bool ladder_ok = true;
                    std::vector<Vec> xs, ys;
                    for (int j = 3; j <= 10; ++j) {
                        Vec xn = x_hat + std::pow(2.0, -j) * dir;
                        if (!algebra.domain().contains(xn)) {
                            ladder_ok = false;
                            break;
                        }
                        LiftResult ln =
                            lift_path(algebra, GroupPath::linear(e, Vec{end}), xn, opts);
                        if (!ln.liftable) {
                            ladder_ok = false;
                            break;
                        }
                        xs.push_back(xn);
                        ys.push_back(ln.point_end);
                    }
                    if (ladder_ok && xs.size() >= 4) {
                        rep.witness_x = xs;
                        rep.witness_y = ys;
                        rep.verified = true;
                        break;
                    }
                }
            }
            if (rep.verified) reports.push_back(std::move(rep));
        }
    }
    return reports;
}

namespace {

/// Dense forward/backward trajectory of the first basis flow through x.
std::vector<std::pair<double, Vec>> dense_trajectory(const VectorFieldAlgebra& algebra,
                                                     const Vec& x, double window_B,
                                                     const IntegrateOptions& opts) {
    IntegrateOptions o = opts;
    o.record_samples = true;
    o.max_samples = 4096;
    o.max_step = window_B / 512.0;
    Vec X = Vec::unit(algebra.algebra_dim(), 0);
    std::vector<std::pair<double, Vec>> traj;
    for (double dir : {1.0, -1.0}) {
        FlowOutcome f = flow(algebra, X, dir * window_B, x, o);
        traj.insert(traj.end(), f.samples.begin(), f.samples.end());
    }
    return traj;
}

/// Parameter of the closest trajectory approach to y, golden-refined from the
/// best coarse sample; nullopt if the refined distance exceeds tol.
std::optional<double> flow_match_parameter(const VectorFieldAlgebra& algebra, const Vec& x,
                                           const std::vector<std::pair<double, Vec>>& traj,
                                           const Vec& y, double window_B,
                                           const IntegrateOptions& opts, double tol) {
    double best_t = 0.0, best_d = distance(x, y);
    for (const auto& [t, p] : traj) {
        double dd = distance(p, y);
        if (dd < best_d) {
            best_d = dd;
            best_t = t;
        }
    }
    if (best_d > 0.2) return std::nullopt;  // gate before the expensive refinement

    auto eval = [&](double t) {
        FlowOutcome f = flow(algebra, Vec::unit(algebra.algebra_dim(), 0), t, x, opts);
        return f.reached() ? distance(f.endpoint, y) : 1e30;
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best_t - 2.5 * window_B / 512.0, b = best_t + 2.5 * window_B / 512.0;
    double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
    double f1 = eval(c1), f2 = eval(c2);
    for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - phi * (b - a);
            f1 = eval(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + phi * (b - a);
            f2 = eval(c2);
        }
    }
    double t_star = 0.5 * (a + b);
    if (eval(t_star) <= tol) return t_star;
    return std::nullopt;
}

}  // namespace

OrbitSpaceReport orbit_space(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                             const std::vector<Vec>& samples, int budget_K, double window_B,
                             const IntegrateOptions& opts) {
    OrbitSpaceReport rep;
    const size_t n = samples.size();
    const double match_tol = 1e-4;
    const Vec e = group_zero(spec);

    // Route (a): raw flow reachability. Route (b): certified lifts through
    // the chart machinery (deck-translated straight paths).
    std::vector<std::vector<uint8_t>> flow_rel(n, std::vector<uint8_t>(n, 0));
    std::vector<std::vector<uint8_t>> atlas_rel(n, std::vector<uint8_t>(n, 0));
    std::vector<std::vector<std::pair<double, Vec>>> traj(n);
    parallel_for(n, [&](size_t i) { traj[i] = dense_trajectory(algebra, samples[i], window_B, opts); });
    for (size_t i = 0; i < n; ++i) {
        flow_rel[i][i] = atlas_rel[i][i] = 1;
        for (size_t j = i + 1; j < n; ++j) {
            auto t = flow_match_parameter(algebra, samples[i], traj[i], samples[j], window_B, opts,
                                          match_tol);
            if (t) {
                flow_rel[i][j] = flow_rel[j][i] = 1;
                for (const Vec& deck : spec.deck_window(budget_K)) {
                    Vec target = Vec{-(*t)} + deck;  // y in I(e; g, x) iff Fl_{-g}(x) = y
                    LiftResult lift =
                        lift_path(algebra, GroupPath::linear(target, e), samples[i], opts);
                    if (lift.liftable && distance(lift.point_end, samples[j]) <= 2.0 * match_tol) {
                        atlas_rel[i][j] = atlas_rel[j][i] = 1;
                        break;
                    }
                }
            }
        }
    }

    auto partition_of = [n](const std::vector<std::vector<uint8_t>>& rel) {
        std::vector<int> id(n, -1);
        int next = 0;
        for (size_t i = 0; i < n; ++i) {
            if (id[i] >= 0) continue;
            id[i] = next;
            for (size_t j = i + 1; j < n; ++j)
                if (rel[i][j]) id[j] = next;
            ++next;
        }
        return std::pair{id, next};
    };
    auto [fid, fcount] = partition_of(flow_rel);
    auto [aid, acount] = partition_of(atlas_rel);
    rep.flow_orbit_id = fid;
    rep.atlas_orbit_id = aid;
    rep.orbit_count = fcount;
    rep.partitions_agree = fid == aid;
    for (int cls = 0; cls < fcount; ++cls)
        for (size_t i = 0; i < n; ++i)
            if (fid[i] == cls) {
                rep.representatives.push_back(static_cast<int>(i));
                break;
            }
    return rep;
}

ZQuotientReport z_quotient_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                 const std::vector<Vec>& samples, int budget_K,
                                 const IntegrateOptions& opts) {
    ZQuotientReport rep;
    if (!spec.has_deck()) {
        rep.union_relation_holds = true;
        rep.classes_commute = true;
        return rep;
    }
    GroupSpec cover(spec.dim());  // same group dimension, trivial deck
    const Vec e = group_zero(spec);

    rep.union_relation_holds = true;
    rep.classes_commute = true;
    for (const Vec& x : samples) {
        ++rep.samples_checked;
        IntersectionSet g_rec = recurrence_set(algebra, spec, x, budget_K, opts);

        // Union over deck elements of the cover intersection sets
        // I_cover(e; z, x), computed through the opposite-direction lifts.
        std::vector<Vec> union_members;
        for (const Vec& z : spec.deck_window(budget_K)) {
            IntersectionSet piece = intersection_set(algebra, cover, e, z, x, budget_K, opts);
            for (const auto& m : piece.members) {
                bool fresh = true;
                for (const Vec& u : union_members)
                    if (distance(u, m.point) <= kPointTol) fresh = false;
                if (fresh) union_members.push_back(m.point);
            }
        }

        // Set equality within tolerance.
        for (const auto& m : g_rec.members) {
            double best = 1e30;
            for (const Vec& u : union_members) best = std::min(best, distance(u, m.point));
            rep.max_residual = std::max(rep.max_residual, best);
            if (best > 2.0 * kPointTol) {
                rep.union_relation_holds = false;
                rep.failure = "G-member missing from the deck union";
            }
        }
        for (const Vec& u : union_members) {
            if (!g_rec.contains(u, 2.0 * kPointTol)) {
                rep.union_relation_holds = false;
                rep.failure = "deck-union member missing from the G-recurrence set";
            }
        }

        // Cover classes are singletons that must refine the G-classes: every
        // deck translate of the cover class of x stays in the G-class of x.
        IntersectionSet cover_rec = recurrence_set(algebra, cover, x, budget_K, opts);
        for (const auto& m : cover_rec.members)
            if (!g_rec.contains(m.point, 2.0 * kPointTol)) {
                rep.classes_commute = false;
                rep.failure = "cover class not contained in the G-class";
            }
    }
    return rep;
}

}  // namespace leafspace
