#include "leafspace/recurrence.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "leafspace/error.hpp"
#include "leafspace/parallel.hpp"

namespace leafspace {

bool IntersectionSet::contains(const Vec& y, double tol) const {
    return find(y, tol).has_value();
}

std::optional<int> IntersectionSet::find(const Vec& y, double tol) const {
    for (size_t i = 0; i < members.size(); ++i)
        if (distance(members[i].point, y) <= tol) return static_cast<int>(i);
    return std::nullopt;
}

IntersectionSet intersection_set(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                 const Vec& g_target, const Vec& g_source, const Vec& x,
                                 int budget_K, const IntegrateOptions& opts) {
    IntersectionSet out;
    out.target_g = g_target;
    out.source_g = g_source;
    out.base_x = x;
    out.budget_K = budget_K;

    std::vector<Vec> decks = spec.deck_window(budget_K);
    // Smaller deck elements first so merged ties keep the canonical certificate.
    std::sort(decks.begin(), decks.end(), [](const Vec& a, const Vec& b) {
        double na = a.norm(), nb = b.norm();
        if (na != nb) return na < nb;
        return lex_less(a, b);
    });

    std::vector<std::optional<Vec>> endpoints(decks.size());
    parallel_for(decks.size(), [&](size_t i) {
        GroupPath path = GroupPath::linear(g_source, g_target + decks[i]);
        LiftResult r = lift_path(algebra, path, x, opts);
        if (r.liftable) endpoints[i] = r.point_end;
    });

    for (size_t i = 0; i < decks.size(); ++i) {
        if (!endpoints[i]) continue;
        const Vec& y = *endpoints[i];
        if (auto idx = out.find(y)) {
            out.members[static_cast<size_t>(*idx)].merged_tie = true;
            continue;
        }
        CertifiedMember m;
        m.point = y;
        m.deck = decks[i];
        m.word = word_from_displacement(g_target + decks[i] - g_source);
        out.members.push_back(std::move(m));
    }
    std::sort(out.members.begin(), out.members.end(),
              [](const CertifiedMember& a, const CertifiedMember& b) {
                  return lex_less(a.point, b.point);
              });
    return out;
}

IntersectionSet recurrence_set(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                               const Vec& x, int budget_K, const IntegrateOptions& opts) {
    Vec e = Vec::zero(spec.dim());
    return intersection_set(algebra, spec, e, e, x, budget_K, opts);
}

RecurrencePartition recurrence_partition(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                         const std::vector<Vec>& samples, int budget_K,
                                         const IntegrateOptions& opts) {
    const size_t n = samples.size();
    std::vector<IntersectionSet> rec(n);
    parallel_for(n, [&](size_t i) { rec[i] = recurrence_set(algebra, spec, samples[i], budget_K, opts); });

    std::vector<std::vector<uint8_t>> related(n, std::vector<uint8_t>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) related[i][j] = rec[i].contains(samples[j]) ? 1 : 0;

    RecurrencePartition part;
    part.relation_violations = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!related[i][i]) ++part.relation_violations;  // reflexivity
        for (size_t j = 0; j < n; ++j) {
            if (related[i][j] != related[j][i]) ++part.relation_violations;  // symmetry
            if (related[i][j])
                for (size_t l = 0; l < n; ++l)
                    if (related[j][l] && !related[i][l]) ++part.relation_violations;  // transitivity
        }
    }

    // Union-find over the symmetric closure.
    std::vector<int> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find_root = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (related[i][j] || related[j][i]) {
                int ra = find_root(static_cast<int>(i)), rb = find_root(static_cast<int>(j));
                if (ra != rb) parent[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
            }

    part.class_id.assign(n, -1);
    std::map<int, int> relabel;
    for (size_t i = 0; i < n; ++i) {
        int root = find_root(static_cast<int>(i));
        auto it = relabel.find(root);
        if (it == relabel.end()) it = relabel.emplace(root, static_cast<int>(relabel.size())).first;
        part.class_id[i] = it->second;
    }
    part.class_count = static_cast<int>(relabel.size());
    return part;
}

namespace {

bool sets_equal(const IntersectionSet& a, const IntersectionSet& b, double tol) {
    for (const auto& m : a.members)
        if (!b.contains(m.point, tol)) return false;
    for (const auto& m : b.members)
        if (!a.contains(m.point, tol)) return false;
    return true;
}

}  // namespace

IdentityReport identity_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                              const PointSampler& sampler, int trials, int budget_K,
                              CounterRng& rng, double group_span, const IntegrateOptions& opts) {
    IdentityReport rep;
    rep.trials = trials;
    const int k = spec.dim();
    const double tol = 2.0 * kPointTol;

    auto note_failure = [&](const std::string& what, int trial) {
        ++rep.violations;
        std::ostringstream os;
        os << "trial " << trial << ": " << what;
        rep.failures.push_back(os.str());
    };

    for (int trial = 0; trial < trials; ++trial) {
        Vec x = sampler(rng);
        Vec g = rng.uniform_vec(k, -group_span, group_span);
        Vec gp = rng.uniform_vec(k, -group_span, group_span);
        Vec e = Vec::zero(k);

        // Translation identities: I(g'; g, x) = I(g'-g; e, x) = I(e; g-g', x)
        // (cover-level form of I(g';g,x) = I(g^-1 g'; e, x) = I(e; g'^-1 g, x)).
        IntersectionSet a = intersection_set(algebra, spec, gp, g, x, budget_K, opts);
        IntersectionSet b = intersection_set(algebra, spec, gp - g, e, x, budget_K, opts);
        IntersectionSet c = intersection_set(algebra, spec, e, g - gp, x, budget_K, opts);
        ++rep.checks;
        if (!sets_equal(a, b, tol)) note_failure("translation identity I(g';g,x)=I(g'-g;e,x)", trial);
        ++rep.checks;
        if (!sets_equal(a, c, tol)) note_failure("translation identity I(g';g,x)=I(e;g-g',x)", trial);

        // Leaf independence: move along the leaf to (g2, x2) and compare
        // intersection sets over a third transversal.
        Vec delta = rng.uniform_vec(k, -0.5, 0.5);
        LiftResult hop = lift_path(algebra, GroupPath::linear(g, g + delta), x, opts);
        if (hop.liftable) {
            Vec g2 = g + delta;
            Vec gq = rng.uniform_vec(k, -group_span, group_span);
            IntersectionSet s1 = intersection_set(algebra, spec, gq, g, x, budget_K, opts);
            IntersectionSet s2 = intersection_set(algebra, spec, gq, g2, hop.point_end, budget_K, opts);
            ++rep.checks;
            if (!sets_equal(s1, s2, tol)) note_failure("leaf independence of intersection sets", trial);
        }

        // Reflexivity of the recurrence set.
        IntersectionSet rec = recurrence_set(algebra, spec, x, budget_K, opts);
        ++rep.checks;
        if (!rec.contains(x, tol)) note_failure("x not in I(e;e,x)", trial);

        // Symmetry: each member y has x in I(e;e,y).
        for (const auto& m : rec.members) {
            IntersectionSet back = recurrence_set(algebra, spec, m.point, budget_K, opts);
            ++rep.checks;
            if (!back.contains(x, tol)) {
                note_failure("recurrence symmetry", trial);
                break;
            }
        }

        // Disjointness: a sample outside the class of x has a disjoint
        // intersection set over a shared transversal.
        Vec x2 = sampler(rng);
        if (!rec.contains(x2, 10.0 * tol)) {
            IntersectionSet d1 = intersection_set(algebra, spec, gp, e, x, budget_K, opts);
            IntersectionSet d2 = intersection_set(algebra, spec, gp, e, x2, budget_K, opts);
            bool overlap = false;
            for (const auto& m : d1.members)
                if (d2.contains(m.point, kPointTol * 0.5)) overlap = true;
            ++rep.checks;
            if (overlap) note_failure("distinct classes with overlapping intersection sets", trial);
        }

        // Transitivity through two certified hops: x1 in I(g1; g2, x2'),
        // x2' in I(g2; g3, x3) => x1 in I(g1; g3, x3).
        Vec g3 = rng.uniform_vec(k, -group_span, group_span);
        Vec g2t = rng.uniform_vec(k, -group_span, group_span);
        Vec g1t = rng.uniform_vec(k, -group_span, group_span);
        LiftResult hop1 = lift_path(algebra, GroupPath::linear(g3, g2t), x, opts);
        if (hop1.liftable) {
            LiftResult hop2 = lift_path(algebra, GroupPath::linear(g2t, g1t), hop1.point_end, opts);
            if (hop2.liftable) {
                IntersectionSet tr = intersection_set(algebra, spec, g1t, g3, x, budget_K, opts);
                ++rep.checks;
                if (!tr.contains(hop2.point_end, tol)) note_failure("transitivity relation", trial);
            }
        }
    }
    return rep;
}

double uniform_ball_radius(const VectorFieldAlgebra& algebra, const GroupSpec& spec, const Vec& x,
                           int budget_K, double r_max, const IntegrateOptions& opts) {
    double r = std::min(r_max, 0.3 * algebra.domain().signed_distance(x));
    for (const Vec& lam : spec.deck_window(budget_K)) {
        LiftResult lift = lift_path(algebra, GroupPath::linear(Vec::zero(spec.dim()), lam), x, opts);
        if (lift.liftable) r = std::min(r, 0.3 * lift.min_boundary_distance);
    }
    return std::max(r, 1e-4);
}

UniformityReport uniformity_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                  const Vec& x0, double radius, int budget_K,
                                  const IntegrateOptions& opts) {
    UniformityReport rep;
    rep.budget_K = budget_K;
    rep.ball_radius = radius;
    if (algebra.domain().signed_distance(x0) < radius)
        fail(ErrorCode::ball_exits_domain, "uniformity ball exits the chart domain");

    // All holonomy words of the recurrence set within the budget, before
    // point-level deduplication (at a fixed point every deck word lands on
    // x0, yet the words still act differently on the ball).
    struct WordEntry {
        HolonomyWord word;
        Vec image_at_base;
        std::vector<std::optional<Vec>> ball_images;
        int class_id = -1;
    };
    std::vector<Vec> decks = spec.deck_window(budget_K);
    std::vector<std::optional<WordEntry>> entries(decks.size());

    std::vector<Vec> ball = probe_cloud(x0, radius, 20);
    ball.push_back(x0);

    parallel_for(decks.size(), [&](size_t i) {
        HolonomyWord w = word_from_displacement(decks[i]);
        auto at_base = apply_word(algebra, w, x0, opts);
        if (!at_base) return;
        WordEntry e;
        e.word = w;
        e.image_at_base = *at_base;
        for (const Vec& p : ball) e.ball_images.push_back(apply_word(algebra, w, p, opts));
        entries[i] = std::move(e);
    });

    std::vector<WordEntry> words;
    for (auto& e : entries)
        if (e) words.push_back(std::move(*e));

    rep.uniform = true;
    for (const auto& w : words)
        for (const auto& im : w.ball_images)
            if (!im) rep.uniform = false;

    // Probe-level word classes on the ball cloud.
    auto same_class = [&](const WordEntry& a, const WordEntry& b) {
        for (size_t p = 0; p < ball.size(); ++p) {
            if (a.ball_images[p].has_value() != b.ball_images[p].has_value()) return false;
            if (a.ball_images[p] && distance(*a.ball_images[p], *b.ball_images[p]) > kPointTol)
                return false;
        }
        return true;
    };
    int classes = 0;
    for (size_t i = 0; i < words.size(); ++i) {
        if (words[i].class_id >= 0) continue;
        words[i].class_id = classes++;
        for (size_t j = i + 1; j < words.size(); ++j)
            if (words[j].class_id < 0 && same_class(words[i], words[j]))
                words[j].class_id = words[i].class_id;
    }
    rep.word_classes = classes;

    rep.isotropy_order = 0;
    std::vector<uint8_t> counted(static_cast<size_t>(classes), 0);
    for (const auto& w : words)
        if (!counted[static_cast<size_t>(w.class_id)] && distance(w.image_at_base, x0) <= kPointTol) {
            counted[static_cast<size_t>(w.class_id)] = 1;
            ++rep.isotropy_order;
        }

    // Proper discontinuity: distinct classes stay separated on the ball, and
    // certificates of nearby points class-match along convergent ladders
    // (finite recapture on sampled sequences).
    bool separated = true;
    for (size_t i = 0; i < words.size() && separated; ++i)
        for (size_t j = i + 1; j < words.size() && separated; ++j) {
            if (words[i].class_id == words[j].class_id) continue;
            double max_gap = 0.0;
            bool comparable = false;
            for (size_t p = 0; p < ball.size(); ++p)
                if (words[i].ball_images[p] && words[j].ball_images[p]) {
                    comparable = true;
                    max_gap = std::max(max_gap, distance(*words[i].ball_images[p], *words[j].ball_images[p]));
                }
            if (comparable && max_gap < kPointTol) separated = false;
        }

    auto class_of_deck = [&](const Vec& lam) -> int {
        for (const auto& w : words) {
            Vec disp(spec.dim());
            for (const auto& st : w.word.steps) disp[st.basis_index] += st.time;
            if (distance(disp, lam) < 1e-12) return w.class_id;
        }
        return -1;
    };

    // Finite recapture on sampled convergent sequences: members of nearby
    // points that converge into the base member neighborhoods must come from
    // the (finite, separated) class system already present at x0. Members
    // may still enter or leave near the range edge, but those stay close to
    // the boundary, far from the base members by the ball-radius margin.
    bool recapture_ok = true;
    const int d = x0.size();
    IntersectionSet base_rec = recurrence_set(algebra, spec, x0, budget_K, opts);
    for (int dir = 0; dir < std::min(d, 2) && recapture_ok; ++dir) {
        for (int j = 2; j <= 5 && recapture_ok; ++j) {
            Vec xj = x0 + std::pow(2.0, -j) * radius * Vec::unit(d, dir);
            if (!algebra.domain().contains(xj)) continue;
            IntersectionSet rj = recurrence_set(algebra, spec, xj, budget_K, opts);
            for (const auto& mj : rj.members) {
                if (!base_rec.find(mj.point, 0.5 * radius)) continue;
                if (class_of_deck(mj.deck) < 0) recapture_ok = false;
            }
        }
    }

    rep.properly_discontinuous = rep.uniform && separated && recapture_ok;
    std::ostringstream os;
    os << "classes=" << classes << " separated=" << separated << " recapture=" << recapture_ok
       << " K=" << budget_K;
    rep.note = os.str();
    return rep;
}

}  // namespace leafspace
