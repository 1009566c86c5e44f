#include "leafspace/lift.hpp"

#include <cmath>
#include <sstream>

#include "leafspace/error.hpp"
#include "leafspace/rng.hpp"

namespace leafspace {

namespace {

bool algebra_fixed_point(const VectorFieldAlgebra& algebra, const Vec& x) {
    for (int i = 0; i < algebra.algebra_dim(); ++i)
        if (algebra.basis_field(i)(x).norm() > 1e-15 * (1.0 + x.norm())) return false;
    return true;
}

}  // namespace

LiftResult lift_path(const VectorFieldAlgebra& algebra, const GroupPath& path, const Vec& x0,
                     const IntegrateOptions& opts) {
    LiftResult out;
    if (!algebra.domain().contains(x0))
        fail(ErrorCode::point_outside_domain, "lift initial point outside the chart domain");

    if (algebra_fixed_point(algebra, x0)) {
        out.liftable = true;
        out.group_end = path.end();
        out.point_end = x0;
        out.min_boundary_distance = algebra.domain().signed_distance(x0);
        if (opts.record_samples) {
            out.samples.emplace_back(0.0, x0);
            out.samples.emplace_back(1.0, x0);
        }
        return out;
    }

    Vec y = x0;
    out.min_boundary_distance = algebra.domain().signed_distance(x0);
    const auto& segments = path.segments();
    for (size_t si = 0; si < segments.size(); ++si) {
        const auto& seg = segments[si];
        OdeRhs rhs = [&, si](double t, const Vec& p) {
            return algebra.evaluate_unchecked(path.velocity_in_segment(static_cast<int>(si), t), p);
        };
        IntegrationResult r = integrate_ode(rhs, seg.t0, seg.t1, y, algebra.domain(),
                                            algebra.domain().dimension(), opts);
        out.min_boundary_distance = std::min(out.min_boundary_distance, r.min_boundary_distance);
        for (auto& s : r.samples) out.samples.push_back(std::move(s));
        if (r.escaped()) {
            out.liftable = false;
            out.escape_s = r.t_end;
            out.escape_group = path.value(r.t_end);
            out.escape_point = r.y_end;
            return out;
        }
        if (!r.reached()) fail(ErrorCode::nonfinite_field, r.error);
        y = r.y_end;
    }
    out.liftable = true;
    out.group_end = path.end();
    out.point_end = y;
    return out;
}

HolonomyWord word_from_displacement(const Vec& displacement, double drop_tol) {
    HolonomyWord w;
    for (int i = 0; i < displacement.size(); ++i)
        if (std::abs(displacement[i]) > drop_tol) w.steps.push_back({i, displacement[i]});
    return w;
}

std::optional<Vec> apply_word(const VectorFieldAlgebra& algebra, const HolonomyWord& word,
                              const Vec& x, const IntegrateOptions& opts) {
    Vec y = x;
    if (!algebra.domain().contains(y)) return std::nullopt;
    for (const FlowStep& s : word.steps) {
        FlowOutcome f = flow(algebra, Vec::unit(algebra.algebra_dim(), s.basis_index), s.time, y, opts);
        if (!f.reached()) return std::nullopt;
        y = f.endpoint;
    }
    return y;
}

bool words_equal_on_probes(const VectorFieldAlgebra& algebra, const HolonomyWord& a,
                           const HolonomyWord& b, const std::vector<Vec>& probes, double tol) {
    for (const Vec& p : probes) {
        auto ia = apply_word(algebra, a, p);
        auto ib = apply_word(algebra, b, p);
        if (ia.has_value() != ib.has_value()) return false;
        if (ia && distance(*ia, *ib) > tol) return false;
    }
    return true;
}

HolonomyTransform holonomy_transform(const VectorFieldAlgebra& algebra, const GroupPath& path,
                                     const std::vector<Vec>& probes, double fd_step,
                                     const IntegrateOptions& opts) {
    HolonomyTransform out;
    const int d = algebra.domain().dimension();
    out.word = word_from_displacement(path.end() - path.start());

    auto image_of = [&](const Vec& p, int probe_index) {
        LiftResult r = lift_path(algebra, path, p, opts);
        if (!r.liftable) {
            std::ostringstream os;
            os << "path not liftable at probe " << probe_index << " (escape at s=" << r.escape_s
               << ")";
            fail(ErrorCode::not_liftable_at_probe, os.str());
        }
        return r.point_end;
    };

    for (size_t pi = 0; pi < probes.size(); ++pi) {
        const Vec& p = probes[pi];
        out.probe_images.push_back(image_of(p, static_cast<int>(pi)));
        double h = fd_step * (1.0 + p.norm());
        Mat jac(d, d);
        for (int j = 0; j < d; ++j) {
            Vec pp = p, pm = p;
            pp[j] += h;
            pm[j] -= h;
            Vec col = (image_of(pp, static_cast<int>(pi)) - image_of(pm, static_cast<int>(pi))) *
                      (1.0 / (2.0 * h));
            jac.set_col(j, col);
        }
        out.jacobians.push_back(jac);
    }
    out.word.probes = probes;
    out.word.probe_images = out.probe_images;
    return out;
}

LeafRange leaf_range(const VectorFieldAlgebra& algebra, const GroupSpec& spec, const Vec& x0,
                     double window, const IntegrateOptions& opts) {
    LeafRange out;
    out.base = x0;
    out.window = window;
    const int k = spec.dim();

    std::vector<Vec> directions;
    if (k == 1) {
        directions.push_back(Vec{1.0});
        directions.push_back(Vec{-1.0});
    } else {
        for (int i = 0; i < k; ++i) {
            directions.push_back(Vec::unit(k, i));
            directions.push_back(-Vec::unit(k, i));
        }
    }

    out.complete = true;
    for (const Vec& dir : directions) {
        DirectionRange ray;
        ray.direction = dir;
        FlowOutcome f = flow(algebra, dir, window, x0, opts);
        if (f.reached()) {
            ray.reach = window;
            ray.hit_window_edge = true;
            ray.bracket_verified = true;  // the full-window flow is the certificate
        } else {
            ray.reach = std::abs(f.escape_parameter);
            ray.hit_window_edge = false;
            out.complete = false;
            // Bracketing certificate around the reported end.
            double delta = 5e-3 * std::max(1.0, ray.reach);
            FlowOutcome inside = flow(algebra, dir, std::max(ray.reach - delta, 0.0), x0, opts);
            FlowOutcome outside = flow(algebra, dir, ray.reach + delta, x0, opts);
            ray.bracket_verified = inside.reached() && outside.escaped();
        }
        out.rays.push_back(ray);
    }
    return out;
}

std::vector<Vec> probe_cloud(const Vec& x, double radius, int count) {
    std::vector<Vec> out;
    const int d = x.size();
    if (d == 1) {
        for (int i = 0; i < count; ++i) {
            double u = (2.0 * (i + 0.5) / count) - 1.0;
            Vec p = x;
            p[0] += radius * u;
            out.push_back(p);
        }
    } else if (d == 2) {
        const double golden = kTurn * (1.0 - 1.0 / 1.618033988749895);
        for (int i = 0; i < count; ++i) {
            double r = radius * std::sqrt((i + 0.5) / count);
            double a = golden * i;
            Vec p = x;
            p[0] += r * std::cos(a);
            p[1] += r * std::sin(a);
            out.push_back(p);
        }
    } else {
        CounterRng rng(0x9042u, static_cast<uint64_t>(count));
        for (int i = 0; i < count; ++i) {
            double r = radius * std::pow((i + 0.5) / count, 1.0 / d);
            out.push_back(x + r * rng.unit_vec(d));
        }
    }
    return out;
}

}  // namespace leafspace
