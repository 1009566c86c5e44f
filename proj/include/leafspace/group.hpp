#pragma once

#include <optional>
#include <vector>

#include "leafspace/algebra.hpp"
#include "leafspace/vec.hpp"

namespace leafspace {

/// Connected abelian group G = R^k / Lambda with universal cover R^k.
/// An empty lattice means G is the cover itself. The deck group Z = Lambda
/// acts by translation.
class GroupSpec {
public:
    GroupSpec() : k_(0) {}
    explicit GroupSpec(int k, std::vector<Vec> lattice_generators = {});

    int dim() const { return k_; }
    const std::vector<Vec>& lattice() const { return lattice_; }
    bool has_deck() const { return !lattice_.empty(); }
    /// Lattice of full rank k (then G is compact).
    bool compact() const { return static_cast<int>(lattice_.size()) == k_; }

    /// Canonical representative in the half-open fundamental box anchored at 0.
    Vec project(const Vec& g_cover) const;

    /// Lattice elements sum_i a_i lambda_i with |a_i| <= budget per generator.
    std::vector<Vec> deck_window(int budget) const;

    /// Deck orbit points g + lambda that fall inside the box |coord| <= window
    /// (searched within the integer budget).
    std::vector<Vec> deck_orbit_in_window(const Vec& g_cover, double window, int budget) const;

private:
    int k_;
    std::vector<Vec> lattice_;
    Mat gram_inv_;  // (L^T L)^{-1} L^T rows for fundamental-domain coordinates
};

/// Piecewise polynomial path [0,1] -> R^k. Each segment stores coefficients
/// in the local coordinate u = (t - t0) / (t1 - t0).
class GroupPath {
public:
    struct Segment {
        double t0, t1;
        std::vector<Vec> coeffs;  // c(u) = sum_j coeffs[j] u^j
    };

    GroupPath() : k_(0) {}
    GroupPath(int k, std::vector<Segment> segments);

    /// Straight segment from a to b over [0,1].
    static GroupPath linear(const Vec& a, const Vec& b);
    /// Piecewise-linear through the waypoints, uniform parameter splits.
    static GroupPath polyline(const std::vector<Vec>& waypoints);
    /// Single polynomial segment with the given coefficients over [0,1].
    static GroupPath polynomial(int k, std::vector<Vec> coeffs);

    int group_dim() const { return k_; }
    const std::vector<Segment>& segments() const { return segments_; }
    Vec start() const { return value(0.0); }
    Vec end() const { return value(1.0); }
    Vec value(double t) const;

    /// Path velocity c'(t), identified with g-coefficients for abelian G.
    /// Throws junction_parameter at interior segment junctions.
    Vec velocity(double t) const;

    /// Velocity without the junction guard (integrator internal; segment
    /// boundaries are integration breakpoints, never interior evaluations).
    Vec velocity_in_segment(int seg, double t) const;

    bool is_junction(double t, double tol = 1e-12) const;

    /// Concatenation, second path translated to continue from end().
    GroupPath then(const GroupPath& next) const;

    /// Reparametrize by an increasing polynomial bijection sigma of [0,1]
    /// (single-segment paths only; used by invariance tests).
    GroupPath reparametrized(const std::vector<double>& sigma_coeffs) const;

private:
    int k_;
    std::vector<Segment> segments_;
};

/// mc_velocity: the Maurer-Cartan velocity of the path. For abelian G the
/// Maurer-Cartan form is the coordinate differential, so this is c'(t).
inline Vec mc_velocity(const GroupPath& path, double t) { return path.velocity(t); }

/// Cartan-Maurer flatness defect of pairing `algebra` with the abelian group
/// `spec`: max over basis pairs of the FD bracket defect at x, plus the
/// symbolic Jacobi residual, plus the abelian-compatibility mismatch
/// max|c^k_ij| (a nonabelian algebra cannot integrate over an abelian group).
struct FlatnessReport {
    double bracket_defect_max = 0.0;
    double jacobi_residual = 0.0;
    double abelian_mismatch = 0.0;
    double total() const { return bracket_defect_max + jacobi_residual + abelian_mismatch; }
    bool flagged_nonabelian = false;
};
FlatnessReport flatness_defect(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                               const Vec& x, double h);

}  // namespace leafspace
