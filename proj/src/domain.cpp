#include "leafspace/domain.hpp"

#include <sstream>

namespace leafspace {

namespace {

double point_segment_distance(const Vec& x, const Vec& a, const Vec& b) {
    Vec ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return distance(x, a);
    double t = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
    return distance(x, a + t * ab);
}

/// Distance to the ray {s * u : s >= s0}, u a unit vector.
double point_ray_distance(const Vec& x, const Vec& u, double s0) {
    double proj = x.dot(u);
    if (proj >= s0) {
        Vec foot = proj * u;
        return distance(x, foot);
    }
    return distance(x, s0 * u);
}

class DiscRegion final : public Region {
public:
    DiscRegion(Vec c, double r) : center_(std::move(c)), radius_(r) {}
    bool contains(const Vec& x) const override { return distance(x, center_) < radius_; }
    double signed_distance(const Vec& x) const override { return radius_ - distance(x, center_); }
    std::string describe() const override {
        std::ostringstream os;
        os << "disc(r=" << radius_ << ")";
        return os.str();
    }

private:
    Vec center_;
    double radius_;
};

class FullSpaceRegion final : public Region {
public:
    bool contains(const Vec&) const override { return true; }
    double signed_distance(const Vec&) const override { return 1e30; }
    std::string describe() const override { return "full-space"; }
};

class HalfPlaneRegion final : public Region {
public:
    HalfPlaneRegion(Vec p, Vec n) : point_(std::move(p)), normal_(std::move(n)) {
        normal_ *= 1.0 / normal_.norm();
    }
    bool contains(const Vec& x) const override { return (x - point_).dot(normal_) < 0.0; }
    double signed_distance(const Vec& x) const override { return -(x - point_).dot(normal_); }
    std::string describe() const override { return "half-plane"; }

private:
    Vec point_, normal_;
};

class WedgeRegion final : public Region {
public:
    WedgeRegion(double r_min, double axis, double half_width)
        : r_min_(r_min), axis_(axis), half_width_(half_width) {
        edge_plus_ = Vec{std::cos(kTurn * (axis + half_width)), std::sin(kTurn * (axis + half_width))};
        edge_minus_ = Vec{std::cos(kTurn * (axis - half_width)), std::sin(kTurn * (axis - half_width))};
    }

    bool contains(const Vec& x) const override {
        double r = x.norm();
        if (r < r_min_) return false;
        double dt = std::abs(wrap_half(angle_turns(x[0], x[1]) - axis_));
        return dt <= half_width_;
    }

    double signed_distance(const Vec& x) const override {
        double r = x.norm();
        double dt = r > 0.0 ? std::abs(wrap_half(angle_turns(x[0], x[1]) - axis_)) : 0.5;
        double dp = point_ray_distance(x, edge_plus_, r_min_);
        double dm = point_ray_distance(x, edge_minus_, r_min_);
        if (r >= r_min_ && dt <= half_width_) {
            return std::min({r - r_min_, dp, dm});  // inside the wedge
        }
        double d = std::min(dp, dm);
        if (dt <= half_width_) d = std::min(d, r_min_ - r);  // directly under the inner arc
        return -d;
    }

    std::string describe() const override {
        std::ostringstream os;
        os << "wedge(r_min=" << r_min_ << ", axis=" << axis_ << ", half_width=" << half_width_ << ")";
        return os.str();
    }

private:
    double r_min_, axis_, half_width_;
    Vec edge_plus_, edge_minus_;
};

class SlitRegion final : public Region {
public:
    SlitRegion(Vec a, Vec b, double eps) : a_(std::move(a)), b_(std::move(b)), eps_(eps) {}
    bool contains(const Vec& x) const override {
        return point_segment_distance(x, a_, b_) <= eps_;
    }
    double signed_distance(const Vec& x) const override {
        return eps_ - point_segment_distance(x, a_, b_);
    }
    bool thin() const override { return true; }
    std::string describe() const override {
        std::ostringstream os;
        os << "slit(eps=" << eps_ << ")";
        return os.str();
    }

private:
    Vec a_, b_;
    double eps_;
};

}  // namespace

RegionPtr make_disc(const Vec& center, double radius) {
    return std::make_shared<DiscRegion>(center, radius);
}
RegionPtr make_full_space(int) { return std::make_shared<FullSpaceRegion>(); }
RegionPtr make_half_plane(const Vec& point, const Vec& normal) {
    return std::make_shared<HalfPlaneRegion>(point, normal);
}
RegionPtr make_wedge(double r_min, double axis_turns, double half_width_turns) {
    return std::make_shared<WedgeRegion>(r_min, axis_turns, half_width_turns);
}
RegionPtr make_slit(const Vec& a, const Vec& b, double eps) {
    return std::make_shared<SlitRegion>(a, b, eps);
}

}  // namespace leafspace
