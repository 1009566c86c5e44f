#pragma once

#include <functional>
#include <vector>

#include "leafspace/lift.hpp"

namespace leafspace {

/// A g-structure on the trivial bundle M x R^r: per basis field, a vertical
/// coefficient map A_i(x) so the lifted field at (x, v) has base component
/// zeta_{e_i}(x) and vertical component A_i(x) v.
struct LinearLift {
    const VectorFieldAlgebra* algebra = nullptr;
    int rank = 0;
    std::vector<std::function<Mat(const Vec&)>> vertical;  // one map per basis field

    Mat vertical_at(const Vec& X, const Vec& x) const;  // sum_i X_i A_i(x)
};

/// Generic lifted field on M x R^r, for checking hand-built lifts that may
/// violate projectability. Returns (base component, vertical component).
using BundleField = std::function<std::pair<Vec, Vec>(const Vec& X, const Vec& x, const Vec& v)>;

BundleField bundle_field_of(const LinearLift& lift);

/// Canonical lift to the tangent bundle: A_i = FD Jacobian of zeta_{e_i}.
LinearLift tangent_lift(const VectorFieldAlgebra& algebra, double fd_step = 1e-5);

/// Projectability of a lifted field: base component independent of the fiber
/// coordinate and pi_*(lift) = zeta, both within tol.
struct ProjectabilityReport {
    bool projectable = false;
    double base_fiber_dependence = 0.0;  // max base variation across fiber probes
    double projection_residual = 0.0;    // max |base(x,v) - zeta(x)|
    Vec worst_sample;
    double tol = 1e-9;
};
ProjectabilityReport projectability_check(const BundleField& field,
                                          const VectorFieldAlgebra& algebra,
                                          const std::vector<Vec>& samples,
                                          const std::vector<Vec>& fiber_probes, double tol = 1e-9);

/// Homomorphism defect of the lift at sample resolution: FD bracket of lifted
/// fields vs the lift of the bracket, max over basis pairs.
double lift_bracket_defect(const LinearLift& lift, const Vec& x, const Vec& v, double h);

/// Joint lift of a group path on the foliated bundle: integrates
/// (y', v') = (zeta_{c'}(y), A(y, c') v). Base escape dominates.
struct BundleLiftResult {
    bool liftable = false;
    Vec group_end;
    Vec point_end;
    Vec fiber_end;
    double escape_s = 0.0;
};
BundleLiftResult lift_path_on_bundle(const LinearLift& lift, const GroupPath& path, const Vec& x0,
                                     const Vec& v0, const IntegrateOptions& opts = {});

}  // namespace leafspace
