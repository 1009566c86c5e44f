#pragma once

#include <optional>
#include <vector>

#include "leafspace/lift.hpp"
#include "leafspace/rng.hpp"

namespace leafspace {

/// One certified member of an intersection set: the point, the deck element
/// whose translated straight path reaches it, and the replayable word.
struct CertifiedMember {
    Vec point;
    Vec deck;
    HolonomyWord word;
    bool merged_tie = false;  // a second candidate landed within kPointTol
};

/// Finite certified slice of I(g'; g, x) found within the deck budget.
struct IntersectionSet {
    Vec target_g;   // g' (cover representative)
    Vec source_g;   // g
    Vec base_x;
    int budget_K = 0;
    std::vector<CertifiedMember> members;  // canonically sorted, pairwise > kPointTol apart

    bool contains(const Vec& y, double tol = kPointTol) const;
    std::optional<int> find(const Vec& y, double tol = kPointTol) const;
};

/// Enumerates deck elements within the budget, lifts the straight path from
/// g to g' + lambda starting at x, and collects the defined endpoints.
IntersectionSet intersection_set(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                 const Vec& g_target, const Vec& g_source, const Vec& x,
                                 int budget_K, const IntegrateOptions& opts = {});

/// Recurrence set I(e; e, x).
IntersectionSet recurrence_set(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                               const Vec& x, int budget_K, const IntegrateOptions& opts = {});

/// Groups samples by y in I(e;e,x); verifies the relation is an equivalence
/// on the sample set before returning the partition.
struct RecurrencePartition {
    std::vector<int> class_id;              // per sample
    int class_count = 0;
    int relation_violations = 0;            // symmetry/transitivity failures found
};
RecurrencePartition recurrence_partition(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                         const std::vector<Vec>& samples, int budget_K,
                                         const IntegrateOptions& opts = {});

/// Randomized verification of the intersection-set identities:
/// translation (both forms), leaf independence, disjointness of distinct
/// classes, transitivity, and recurrence reflexivity/symmetry/transitivity.
struct IdentityReport {
    int trials = 0;
    int checks = 0;
    int violations = 0;
    std::vector<std::string> failures;  // one line per violation
};
using PointSampler = std::function<Vec(CounterRng&)>;

IdentityReport identity_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                              const PointSampler& sampler, int trials, int budget_K,
                              CounterRng& rng, double group_span,
                              const IntegrateOptions& opts = {});

/// Uniformity / proper discontinuity / isotropy at x0 on the ball B(x0, r).
/// Words are compared on a 20-point probe cloud; the verdict always records
/// the deck budget it was computed at.
struct UniformityReport {
    bool uniform = false;
    bool properly_discontinuous = false;
    int isotropy_order = 0;
    int word_classes = 0;
    int budget_K = 0;
    double ball_radius = 0.0;
    std::string note;
};
UniformityReport uniformity_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                  const Vec& x0, double radius, int budget_K,
                                  const IntegrateOptions& opts = {});

/// Ball radius that keeps every recurrence certificate of x applicable on the
/// whole ball: a fraction of the minimum boundary distance along the
/// certificate trajectories, capped at r_max.
double uniform_ball_radius(const VectorFieldAlgebra& algebra, const GroupSpec& spec, const Vec& x,
                           int budget_K, double r_max, const IntegrateOptions& opts = {});

}  // namespace leafspace
