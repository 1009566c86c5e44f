#include "leafspace/integrate.hpp"

#include <cmath>

#include "leafspace/error.hpp"

namespace leafspace {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Error weights (5th-order solution minus embedded 4th-order).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct DenseSegment {
    Vec r1, r2, r3, r4, r5;
    Vec eval(double theta) const {
        double th1 = 1.0 - theta;
        return r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
    }
};

struct Stepper {
    const OdeRhs& rhs;
    double rtol, atol;

    Vec k1, k2, k3, k4, k5, k6, k7;

    explicit Stepper(const OdeRhs& f, double rt, double at) : rhs(f), rtol(rt), atol(at) {}

    // One trial step from (t, y) with k1 = f(t, y) already available.
    // Returns the scaled error norm; fills y_new and k7 = f(t+h, y_new).
    double attempt(double t, const Vec& y, double h, Vec& y_new) {
        const int n = y.size();
        k2 = rhs(t + c2 * h, y + h * a21 * k1);
        k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = rhs(t + h, y_new);
        if (!k2.finite() || !k3.finite() || !k4.finite() || !k5.finite() || !k6.finite() ||
            !k7.finite() || !y_new.finite())
            fail(ErrorCode::nonfinite_field, "field evaluation returned NaN/Inf");
        Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            double q = err[i] / sc;
            norm += q * q;
        }
        return std::sqrt(norm / n);
    }

    DenseSegment dense(const Vec& y, const Vec& y_new, double h) const {
        DenseSegment s;
        s.r1 = y;
        s.r2 = y_new - y;
        s.r3 = h * k1 - s.r2;
        s.r4 = s.r2 - h * k7 - s.r3;
        s.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        return s;
    }
};

}  // namespace

IntegrationResult integrate_ode(const OdeRhs& rhs, double t0, double t1, const Vec& y0,
                                const ChartDomain& domain, int guard_dims,
                                const IntegrateOptions& opts) {
    IntegrationResult res;
    auto base_of = [guard_dims](const Vec& y) { return y.head(guard_dims); };

    if (!domain.contains(base_of(y0)))
        fail(ErrorCode::point_outside_domain, "initial point outside the chart domain");

    double dist0 = domain.signed_distance(base_of(y0));
    res.min_boundary_distance = dist0;
    if (opts.record_samples) res.samples.emplace_back(t0, y0);

    if (t1 == t0) {
        res.status = IntegrationStatus::reached;
        res.t_end = t0;
        res.y_end = y0;
        return res;
    }

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);

    Stepper st(rhs, opts.rtol, opts.atol);
    double t = t0;
    Vec y = y0;
    st.k1 = rhs(t, y);
    if (!st.k1.finite()) fail(ErrorCode::nonfinite_field, "field evaluation returned NaN/Inf");

    // Immediate escape if we start within tolerance of the boundary and are
    // not robustly moving inward.
    auto inward_rate = [&](const Vec& state, const Vec& vel, double dist) {
        Vec b = base_of(state);
        Vec v = base_of(vel);
        double speed = v.norm();
        if (speed == 0.0) return 0.0;
        double delta = std::min(1e-6 * (1.0 + b.norm()), 0.45 * std::max(dist, opts.boundary_tol));
        if (delta <= 0.0) return 0.0;
        Vec probe = b + (delta / speed) * v;
        return (domain.signed_distance(probe) - dist) / delta;  // d(dist)/d(arclength)
    };

    if (dist0 < opts.boundary_tol && inward_rate(y, st.k1, dist0) <= 1e-12) {
        res.status = IntegrationStatus::escaped;
        res.t_end = t0;
        res.y_end = y0;
        return res;
    }

    double h = dir * std::min(span, 1e-2 * (1.0 + y.norm()) / (st.k1.norm() + 1e-12));
    if (h == 0.0) h = dir * span;

    long steps = 0;
    int sample_stride = 1, stride_count = 0;
    Vec y_new;

    while (dir * (t1 - t) > 0.0) {
        if (++steps > opts.max_steps) {
            res.status = IntegrationStatus::failed;
            res.error = "max step count exceeded";
            return res;
        }
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        if (opts.max_step > 0.0 && std::abs(h) > opts.max_step) h = dir * opts.max_step;

        // Step capping. Two regimes:
        //  - decidedly approaching the boundary: cap by the distance so the
        //    approach decays geometrically (bounded step count) and the
        //    escape parameter comes out sharp;
        //  - near a thin obstacle: cap by its distance unconditionally,
        //    since a slit crossed inside one step leaves no trace in the
        //    endpoint or dense containment checks. Parallel grazes of fat
        //    obstacles are deliberately not capped.
        double dist = domain.signed_distance(base_of(y));
        double speed = base_of(st.k1).norm();
        if (speed > 0.0) {
            if (dist < 1e6) {
                double rate = inward_rate(y, st.k1, dist);
                if (rate < -0.05) {
                    double cap = std::max(2.0 * dist / speed, 0.25 * opts.boundary_tol / speed);
                    if (std::abs(h) > cap) h = dir * cap;
                }
            }
            if (domain.has_thin_obstacles()) {
                double d_thin = domain.thin_obstacle_distance(base_of(y));
                if (d_thin < 0.05) {
                    double cap = std::max(0.5 * d_thin / speed, 0.25 * opts.boundary_tol / speed);
                    if (std::abs(h) > cap) h = dir * cap;
                }
            }
        }

        double err = st.attempt(t, y, h, y_new);
        if (err > 1.0) {
            double shrink = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= shrink;
            if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
                res.status = IntegrationStatus::failed;
                res.error = "step size underflow";
                return res;
            }
            continue;
        }

        DenseSegment seg = st.dense(y, y_new, h);

        // Containment scan over the accepted step: dense interior probes plus
        // the endpoint, tracking the first exit interval.
        double theta_out = -1.0;
        int checks = std::max(opts.dense_checks, 1);
        for (int i = 1; i <= checks; ++i) {
            double th = static_cast<double>(i) / checks;
            Vec p = base_of(seg.eval(th));
            if (domain.contains(p)) {
                res.min_boundary_distance =
                    std::min(res.min_boundary_distance, domain.signed_distance(p));
            } else {
                theta_out = th;
                break;
            }
        }

        if (theta_out >= 0.0) {
            // Bisect the crossing to the requested parameter resolution.
            double lo = theta_out - 1.0 / checks, hi = theta_out;
            while ((hi - lo) * std::abs(h) > opts.event_param_tol) {
                double mid = 0.5 * (lo + hi);
                if (domain.contains(base_of(seg.eval(mid))))
                    lo = mid;
                else
                    hi = mid;
            }
            res.status = IntegrationStatus::escaped;
            res.t_end = t + lo * h;
            res.y_end = seg.eval(lo);
            if (opts.record_samples) res.samples.emplace_back(res.t_end, res.y_end);
            return res;
        }

        double dist_new = domain.signed_distance(base_of(y_new));
        res.min_boundary_distance = std::min(res.min_boundary_distance, dist_new);
        if (dist_new < opts.boundary_tol && inward_rate(y_new, st.k7, dist_new) <= 1e-12) {
            // Sharpen the escape parameter: find where the trajectory first
            // entered the boundary-tolerance shell within this step.
            double lo = 0.0, hi = 1.0;
            if (domain.signed_distance(base_of(y)) >= opts.boundary_tol) {
                while ((hi - lo) * std::abs(h) > opts.event_param_tol) {
                    double mid = 0.5 * (lo + hi);
                    if (domain.signed_distance(base_of(seg.eval(mid))) < opts.boundary_tol)
                        hi = mid;
                    else
                        lo = mid;
                }
            }
            res.status = IntegrationStatus::escaped;
            res.t_end = t + hi * h;
            res.y_end = seg.eval(hi);
            if (opts.record_samples) res.samples.emplace_back(res.t_end, res.y_end);
            return res;
        }

        t += h;
        y = y_new;
        st.k1 = st.k7;  // FSAL

        if (opts.record_samples && ++stride_count >= sample_stride) {
            stride_count = 0;
            res.samples.emplace_back(t, y);
            if (static_cast<int>(res.samples.size()) > opts.max_samples) {
                std::vector<std::pair<double, Vec>> thin;
                thin.reserve(res.samples.size() / 2 + 1);
                for (size_t i = 0; i < res.samples.size(); i += 2) thin.push_back(res.samples[i]);
                res.samples.swap(thin);
                sample_stride *= 2;
            }
        }

        double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 10.0;
        h *= std::clamp(grow, 0.2, 10.0);
    }

    res.status = IntegrationStatus::reached;
    res.t_end = t1;
    res.y_end = y;
    if (opts.record_samples &&
        (res.samples.empty() || res.samples.back().first != t1))
        res.samples.emplace_back(t1, y);
    return res;
}

FlowOutcome flow(const VectorFieldAlgebra& algebra, const Vec& X, double t, const Vec& x0,
                 const IntegrateOptions& opts) {
    FlowOutcome out;
    if (!algebra.domain().contains(x0))
        fail(ErrorCode::point_outside_domain, "flow initial point outside the chart domain");

    // Equilibria of zeta_X are defined for every parameter value.
    if (algebra.evaluate_unchecked(X, x0).norm() <= 1e-15 * (1.0 + x0.norm())) {
        out.tag = FlowTag::reached;
        out.endpoint = x0;
        out.min_boundary_distance = algebra.domain().signed_distance(x0);
        if (opts.record_samples) {
            out.samples.emplace_back(0.0, x0);
            out.samples.emplace_back(t, x0);
        }
        return out;
    }

    OdeRhs rhs = [&](double, const Vec& y) { return algebra.evaluate_unchecked(X, y); };
    IntegrationResult r =
        integrate_ode(rhs, 0.0, t, x0, algebra.domain(), algebra.domain().dimension(), opts);
    out.samples = std::move(r.samples);
    out.min_boundary_distance = r.min_boundary_distance;
    if (r.reached()) {
        out.tag = FlowTag::reached;
        out.endpoint = r.y_end;
    } else if (r.escaped()) {
        out.tag = FlowTag::escaped;
        out.escape_parameter = r.t_end;
        out.last_inside = r.y_end;
    } else {
        fail(ErrorCode::nonfinite_field, r.error.empty() ? "integration failed" : r.error);
    }
    return out;
}

}  // namespace leafspace
