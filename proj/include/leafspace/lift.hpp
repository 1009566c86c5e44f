#pragma once

#include <optional>
#include <vector>

#include "leafspace/group.hpp"
#include "leafspace/integrate.hpp"

namespace leafspace {

/// Global point-matching tolerance in the Euclidean chart metric. All
/// identifications downstream (members, classes, word equality) inherit it.
constexpr double kPointTol = 1e-6;

/// Lift of a group path through the graph foliation: solves
/// y' = zeta_{c'(t)}(y) with boundary-event detection.
struct LiftResult {
    bool liftable = false;
    Vec group_end;                // g(1) when liftable
    Vec point_end;                // y(1) when liftable
    double escape_s = 0.0;        // path parameter s* in (0,1] if not liftable
    Vec escape_group;             // c(s*)
    Vec escape_point;             // last inside point
    double min_boundary_distance = 0.0;
    std::vector<std::pair<double, Vec>> samples;  // (t, y(t)); group via path.value(t)
};

LiftResult lift_path(const VectorFieldAlgebra& algebra, const GroupPath& path, const Vec& x0,
                     const IntegrateOptions& opts = {});

/// A pseudogroup element as a composable word of single-generator flow steps,
/// with its sample certificate (probes and their images).
struct FlowStep {
    int basis_index;
    double time;
};

struct HolonomyWord {
    std::vector<FlowStep> steps;
    std::vector<Vec> probes;        // certificate cloud
    std::vector<Vec> probe_images;  // word applied to the probes

    HolonomyWord inverse() const {
        HolonomyWord w;
        w.steps.assign(steps.rbegin(), steps.rend());
        for (auto& s : w.steps) s.time = -s.time;
        return w;
    }
};

/// Word of sequential basis flows realizing the holonomy of a path with
/// displacement c(1) - c(0) (abelian decomposition; near-zero components are
/// dropped).
HolonomyWord word_from_displacement(const Vec& displacement, double drop_tol = 0.0);

/// Apply the word step by step; nullopt if any step escapes.
std::optional<Vec> apply_word(const VectorFieldAlgebra& algebra, const HolonomyWord& word,
                              const Vec& x, const IntegrateOptions& opts = {});

/// Probe-level equality of two words on a shared probe cloud.
bool words_equal_on_probes(const VectorFieldAlgebra& algebra, const HolonomyWord& a,
                           const HolonomyWord& b, const std::vector<Vec>& probes,
                           double tol = kPointTol);

/// Holonomy transform gamma_x(c) of a path evaluated on a probe list, with
/// finite-difference Jacobians. Throws not_liftable_at_probe naming the
/// failing probe.
struct HolonomyTransform {
    HolonomyWord word;
    std::vector<Vec> probe_images;
    std::vector<Mat> jacobians;
};
HolonomyTransform holonomy_transform(const VectorFieldAlgebra& algebra, const GroupPath& path,
                                     const std::vector<Vec>& probes, double fd_step = 1e-5,
                                     const IntegrateOptions& opts = {});

/// Reachable group set W_x for one direction of the leaf through (e, x).
struct DirectionRange {
    Vec direction;           // unit vector in the cover
    double reach;            // escape parameter along the ray, or the window edge
    bool hit_window_edge;    // true when no escape happened inside the budget
    bool bracket_verified;   // certificate: lift succeeds at reach - delta (and
                             // fails at reach + delta for finite ends)
};

/// Leaf-range estimate: for k = 1 an interval with end flags, in general a
/// sampled star of directions. Every finite end carries a bracketing
/// certificate (lift succeeds at reach - delta, fails at reach + delta).
struct LeafRange {
    Vec base;
    double window;                       // search budget per direction
    std::vector<DirectionRange> rays;
    bool complete = false;               // all rays reached the window edge

    // k = 1 convenience accessors (rays[0] = +1 direction, rays[1] = -1).
    double t_plus() const { return rays[0].reach; }
    double t_minus() const { return -rays[1].reach; }
    double length() const { return t_plus() - t_minus(); }
};

LeafRange leaf_range(const VectorFieldAlgebra& algebra, const GroupSpec& spec, const Vec& x0,
                     double window, const IntegrateOptions& opts = {});

/// Deterministic probe cloud of `count` points in the ball B(x, radius)
/// (golden-spiral layout in 2-d, axis-aligned lattice otherwise).
std::vector<Vec> probe_cloud(const Vec& x, double radius, int count);

}  // namespace leafspace
