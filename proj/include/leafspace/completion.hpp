#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leafspace/recurrence.hpp"

namespace leafspace {

/// Sampled identification atlas of the G-completion over a grid of charts.
/// The completion is represented only through charts and identification
/// classes; fibers of each chart are the recurrence classes.
struct CompletionAtlas {
    std::vector<Vec> grid;      // chart points (cover representatives)
    std::vector<Vec> samples;
    std::vector<int> class_id;            // recurrence class per sample
    std::vector<int> isotropy;            // word-class isotropy order per sample
    int class_count = 0;

    struct Transition {
        int from, to;                     // grid indices
        HolonomyWord word;
        std::vector<uint8_t> defined;     // per-sample liftability mask
        double translation_residual = 0.0;  // law j_{g'} = l_{g'g^{-1}} o j_g on samples
    };
    std::vector<Transition> transitions;
    std::vector<uint8_t> chart_complete;  // all samples lift from this chart to every other

    double triangle_residual = 0.0;       // worst composed-certificate defect on shared samples
    double fiber_residual = 0.0;          // chart fibers vs recurrence classes
    int budget_K = 0;
    bool orbifold_like = false;           // uniformity_check positive at all samples
};

CompletionAtlas build_atlas(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                            const std::vector<Vec>& grid, const std::vector<Vec>& samples,
                            int budget_K, const IntegrateOptions& opts = {});

/// One convergent sequence family for the sequential Hausdorff criterion:
/// x_j -> x_limit with certified members y_j = (deck z applied to x_j).
struct SequenceFamily {
    std::vector<Vec> x_seq;
    std::vector<Vec> y_seq;
    Vec deck;        // certificate: y_j is the deck-z member over x_j
    Vec x_limit;
    Vec y_limit;
    std::string origin;  // locus description for reports
};

/// Generates boundary-offset ladder families (offsets 2^-j, j = 3..12) around
/// the given loci (callers append random loci), keeping only families whose
/// members are certified and whose limits stay inside the domain.
std::vector<SequenceFamily> generate_families(const VectorFieldAlgebra& algebra,
                                              const GroupSpec& spec,
                                              const std::vector<Vec>& loci, int budget_K,
                                              CounterRng& rng,
                                              const IntegrateOptions& opts = {});

/// A pair of completion points that cannot be Hausdorff separated: the chart
/// representatives together with the common-neighbor witness sequence whose
/// leaves converge to both. Both points are limit elements of each other's
/// charts.
struct NonSeparablePair {
    Vec chart_e_point;               // z0 = [e, y] as a base-chart representative
    Vec g_hat;                       // the other chart
    Vec chart_g_point;               // z_hat = [g_hat, x_hat]
    std::vector<Vec> neighbor_x;     // common neighbors: [e, x_n] hits both charts
    std::vector<Vec> neighbor_y;
};

/// Sequential Hausdorff criterion: y_j in I(e;e,x_j) and y_j -> y must imply
/// y in I(e;e,x). Fails with the offending family and the non-separable pair
/// it witnesses.
struct HausdorffReport {
    bool hausdorff = true;
    int families_checked = 0;
    int families_passed = 0;
    std::optional<SequenceFamily> counterexample;
    std::optional<NonSeparablePair> non_separable;
    double match_tol = 0.0;
    int budget_K = 0;
};
HausdorffReport hausdorff_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                const std::vector<SequenceFamily>& families, int budget_K,
                                const IntegrateOptions& opts = {});

/// A limit element for the base transversal: (g_hat, x_hat) whose leaf misses
/// {e} x M while nearby leaves hit it.
struct LimitElementReport {
    Vec g_hat;
    Vec x_hat;
    std::vector<Vec> witness_x;  // x_n -> x_hat
    std::vector<Vec> witness_y;  // y_n in I(e; g_hat, x_n)
    bool empty_at_budget = false;  // I(e; g_hat, x_hat) = {} verified at K
    bool verified = false;
};
std::vector<LimitElementReport> limit_elements(const VectorFieldAlgebra& algebra,
                                               const GroupSpec& spec,
                                               const std::vector<Vec>& boundary_samples,
                                               int budget_K, double window_B,
                                               const IntegrateOptions& opts = {});

/// Orbit-space correspondence (g-orbits on M vs G-orbits of atlas classes):
/// the two partitions must agree sample-for-sample.
struct OrbitSpaceReport {
    std::vector<int> flow_orbit_id;    // g-orbit id per sample (flow reachability)
    std::vector<int> atlas_orbit_id;   // G-orbit id per sample (certified lifts)
    std::vector<int> representatives;  // one sample index per flow orbit
    bool partitions_agree = false;
    int orbit_count = 0;
};
OrbitSpaceReport orbit_space(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                             const std::vector<Vec>& samples, int budget_K, double window_B,
                             const IntegrateOptions& opts = {});

/// Z-quotient coherence on samples: G-recurrence equals the deck union of
/// cover intersection sets, and the class map M -> cover classes -> G classes
/// commutes.
struct ZQuotientReport {
    bool union_relation_holds = false;   // I_G(e;e,x) = U_z I_cover(e; z, x)
    bool classes_commute = false;        // cover classes refine G classes coherently
    int samples_checked = 0;
    double max_residual = 0.0;
    std::string failure;
};
ZQuotientReport z_quotient_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                 const std::vector<Vec>& samples, int budget_K,
                                 const IntegrateOptions& opts = {});

}  // namespace leafspace
