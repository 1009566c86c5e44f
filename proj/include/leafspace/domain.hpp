#pragma once

#include <memory>
#include <string>
#include <vector>

#include "leafspace/vec.hpp"

namespace leafspace {

/// A region primitive with an exact containment test and a signed distance
/// estimate (positive inside, length units). Estimates may be conservative;
/// signs are exact.
class Region {
public:
    virtual ~Region() = default;
    virtual bool contains(const Vec& x) const = 0;
    virtual double signed_distance(const Vec& x) const = 0;
    virtual std::string describe() const = 0;
    /// Thin obstacles (slits) can be jumped over by a single integration
    /// step; the integrator caps step sizes against their distance field.
    virtual bool thin() const { return false; }
};

using RegionPtr = std::shared_ptr<const Region>;

/// Open ball |x - center| < radius.
RegionPtr make_disc(const Vec& center, double radius);

/// All of R^d (distance estimate capped at 1e30).
RegionPtr make_full_space(int dim);

/// Open half-plane n.(x - p) < 0.
RegionPtr make_half_plane(const Vec& point, const Vec& normal);

/// Closed annular wedge {r >= r_min, |angle - axis| <= half_width}, angles in
/// turn units about the origin of a 2-d chart. Used as a removed obstacle.
RegionPtr make_wedge(double r_min, double axis_turns, double half_width_turns);

/// Closed segment [a,b] widened to half-thickness eps (a slit obstacle).
RegionPtr make_slit(const Vec& a, const Vec& b, double eps);

/// Chart domain M: an open container region with removed closed obstacles.
/// Containment is decided from the exact primitive predicates; the distance
/// field drives boundary-event detection in the integrator.
class ChartDomain {
public:
    ChartDomain() : dim_(0) {}
    ChartDomain(int dim, std::string label, RegionPtr container,
                std::vector<RegionPtr> obstacles = {})
        : dim_(dim),
          label_(std::move(label)),
          container_(std::move(container)),
          obstacles_(std::move(obstacles)) {}

    int dimension() const { return dim_; }
    const std::string& label() const { return label_; }

    bool contains(const Vec& x) const {
        if (!container_->contains(x)) return false;
        for (const auto& ob : obstacles_)
            if (ob->contains(x)) return false;
        return true;
    }

    /// Signed boundary-distance estimate: min over the container distance and
    /// the negated obstacle distances. Positive inside M, negative outside.
    double signed_distance(const Vec& x) const {
        double d = container_->signed_distance(x);
        for (const auto& ob : obstacles_) d = std::min(d, -ob->signed_distance(x));
        return d;
    }

    const std::vector<RegionPtr>& obstacles() const { return obstacles_; }
    const RegionPtr& container() const { return container_; }

    bool has_thin_obstacles() const {
        for (const auto& ob : obstacles_)
            if (ob->thin()) return true;
        return false;
    }

    /// Distance to the nearest thin obstacle (+inf when none).
    double thin_obstacle_distance(const Vec& x) const {
        double d = 1e300;
        for (const auto& ob : obstacles_)
            if (ob->thin()) d = std::min(d, -ob->signed_distance(x));
        return d;
    }

private:
    int dim_;
    std::string label_;
    RegionPtr container_;
    std::vector<RegionPtr> obstacles_;
};

/// Containment verdict plus distance estimate (the in_domain operation).
inline std::pair<bool, double> in_domain(const ChartDomain& domain, const Vec& x) {
    return {domain.contains(x), domain.signed_distance(x)};
}

}  // namespace leafspace
