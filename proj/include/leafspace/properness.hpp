#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "leafspace/completion.hpp"

namespace leafspace {

/// Riemannian metric on the chart domain: point -> SPD matrix.
using MetricField = std::function<Mat(const Vec&)>;

inline MetricField flat_metric(int d) {
    return [d](const Vec&) { return Mat::identity(d); };
}
MetricField constant_metric(const Mat& m);

/// One properness test family: x_n -> x, y_n -> y with certified memberships
/// y_n in I(e; g_n, x_n).
struct ProperFamily {
    std::vector<Vec> x_seq;
    std::vector<Vec> y_seq;
    std::vector<Vec> g_seq;   // cover representatives
    std::string origin;
};

/// Sequential properness criterion. A family passes when {g_n} has an
/// accumulation point within the window (cluster threshold 1e-4), or when the
/// group is compact and the g_n all lie in the fundamental window, which
/// guarantees accumulation. Families whose x or y sequences do not converge
/// are invalid and skipped (the criterion quantifies over convergent ones).
struct ProperReport {
    bool proper = true;
    int families_valid = 0;
    int families_skipped = 0;
    std::optional<ProperFamily> counterexample;
    double window_B = 0.0;
    double cluster_tol = 1e-4;
};
ProperReport proper_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                          const std::vector<ProperFamily>& families, double window_B,
                          int budget_K, const IntegrateOptions& opts = {});

/// Standard family suite for a scenario: convergent-g ladders at random loci
/// plus divergent-g probes (which are only valid where recapture persists,
/// e.g. at fixed points).
std::vector<ProperFamily> generate_proper_families(const VectorFieldAlgebra& algebra,
                                                   const GroupSpec& spec,
                                                   const std::vector<Vec>& loci, int random_loci,
                                                   double window_B, CounterRng& rng,
                                                   const IntegrateOptions& opts = {});

/// Samples {g in window : x in I(e; g, x)} and reports a compactness proxy:
/// bounded away from the window edge by window/4 (compact groups are compact
/// outright). Every verdict records the window it was computed in.
struct IsotropyCompactnessReport {
    std::vector<double> elements;   // k = 1: isotropy parameters found in the window
    bool whole_window = false;      // every probe fixes x (continuum isotropy)
    bool compact_proxy = false;
    int cluster_count = 0;
    double window_B = 0.0;
    std::string note;
};
IsotropyCompactnessReport isotropy_compactness(const VectorFieldAlgebra& algebra,
                                               const GroupSpec& spec, const Vec& x,
                                               double window_B, int budget_K,
                                               const IntegrateOptions& opts = {});

/// Slice through x: affine disc orthogonal to the orbit directions, with
/// residual checks for the slice-theorem conditions.
struct SliceReport {
    Vec base;
    double radius = 0.0;
    bool degenerate = false;             // x is fixed by the whole algebra
    std::vector<Vec> orbit_basis;        // orthonormal basis of zeta(g)(x)
    std::vector<Vec> slice_basis;        // orthonormal complement
    double isotropy_tangency_residual = 0.0;  // condition (1) on g_x directions
    double spanning_min_sv = 0.0;        // condition (2): min singular value over slice samples
    double direct_sum_overlap = 0.0;     // condition (3): orbit/slice overlap at base
    double tangency_kernel_margin = 0.0; // condition (5): min |P_N zeta_X(y)| over unit X not in g_x
    double tube_coverage = 0.0;          // condition (4): fraction of tube samples reached
    bool conditions_pass = false;
    std::string note;
};
SliceReport build_slice(const VectorFieldAlgebra& algebra, const Vec& x, double radius,
                        int samples, const IntegrateOptions& opts = {});

/// max over samples and basis fields of ||(L_{zeta_i} h)(x)|| by central
/// finite differences with step h_fd.
double killing_defect(const VectorFieldAlgebra& algebra, const MetricField& metric,
                      const std::vector<Vec>& samples, double h_fd);

/// Average the metric over the compact group through holonomy pullbacks on a
/// uniform quadrature grid over the fundamental domain. Throws
/// orbit_escapes_domain when the orbit of x is incomplete.
Mat average_metric(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                   const MetricField& metric, const Vec& x, int quadrature,
                   const IntegrateOptions& opts = {});

}  // namespace leafspace
