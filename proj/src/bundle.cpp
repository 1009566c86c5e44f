#include "leafspace/bundle.hpp"

#include "leafspace/error.hpp"

namespace leafspace {

Mat LinearLift::vertical_at(const Vec& X, const Vec& x) const {
    Mat a(rank, rank);
    for (size_t i = 0; i < vertical.size(); ++i) {
        if (X[static_cast<int>(i)] == 0.0) continue;
        a = a + vertical[i](x) * X[static_cast<int>(i)];
    }
    return a;
}

BundleField bundle_field_of(const LinearLift& lift) {
    return [&lift](const Vec& X, const Vec& x, const Vec& v) {
        Vec base = lift.algebra->evaluate_unchecked(X, x);
        Vec vert = lift.vertical_at(X, x).apply(v);
        return std::pair{base, vert};
    };
}

LinearLift tangent_lift(const VectorFieldAlgebra& algebra, double fd_step) {
    LinearLift lift;
    lift.algebra = &algebra;
    lift.rank = algebra.domain().dimension();
    const int d = algebra.domain().dimension();
    for (int i = 0; i < algebra.algebra_dim(); ++i) {
        // Boundary-aware stencil: bundle integration evaluates the vertical
        // part arbitrarily close to escape events, so the step shrinks with
        // the boundary distance instead of throwing.
        lift.vertical.push_back([&algebra, i, fd_step, d](const Vec& x) {
            double dist = algebra.domain().signed_distance(x);
            double h = std::min(fd_step * (1.0 + x.norm()), std::max(0.4 * dist, 1e-7));
            Mat jac(d, d);
            const auto& f = algebra.basis_field(i);
            for (int j = 0; j < d; ++j) {
                Vec xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                jac.set_col(j, (f(xp) - f(xm)) * (1.0 / (2.0 * h)));
            }
            return jac;
        });
    }
    return lift;
}

ProjectabilityReport projectability_check(const BundleField& field,
                                          const VectorFieldAlgebra& algebra,
                                          const std::vector<Vec>& samples,
                                          const std::vector<Vec>& fiber_probes, double tol) {
    ProjectabilityReport rep;
    rep.tol = tol;
    const int m = algebra.algebra_dim();
    for (const Vec& x : samples) {
        if (!algebra.domain().contains(x))
            fail(ErrorCode::point_outside_domain, "projectability sample outside domain");
        for (int i = 0; i < m; ++i) {
            Vec X = Vec::unit(m, i);
            Vec zeta = algebra.evaluate_unchecked(X, x);
            Vec base_ref;
            for (size_t p = 0; p < fiber_probes.size(); ++p) {
                auto [base, vert] = field(X, x, fiber_probes[p]);
                (void)vert;
                if (p == 0)
                    base_ref = base;
                else if (distance(base, base_ref) > rep.base_fiber_dependence) {
                    rep.base_fiber_dependence = distance(base, base_ref);
                    rep.worst_sample = x;
                }
                double proj = distance(base, zeta);
                if (proj > rep.projection_residual) {
                    rep.projection_residual = proj;
                    rep.worst_sample = x;
                }
            }
        }
    }
    rep.projectable = rep.base_fiber_dependence <= tol && rep.projection_residual <= tol;
    return rep;
}

double lift_bracket_defect(const LinearLift& lift, const Vec& x, const Vec& v, double h) {
    const VectorFieldAlgebra& algebra = *lift.algebra;
    const int d = algebra.domain().dimension();
    const int r = lift.rank;
    const int m = algebra.algebra_dim();
    const int n = d + r;

    auto lifted = [&](int i, const Vec& state) {
        Vec base = state.head(d), fiber = state.tail(r);
        Vec fb = algebra.basis_field(i)(base);
        Vec fv = lift.vertical[static_cast<size_t>(i)](base).apply(fiber);
        return Vec::concat(fb, fv);
    };

    double worst = 0.0;
    Vec state = Vec::concat(x, v);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Mat ji(n, n), jj(n, n);
            for (int c = 0; c < n; ++c) {
                Vec sp = state, sm = state;
                sp[c] += h;
                sm[c] -= h;
                ji.set_col(c, (lifted(i, sp) - lifted(i, sm)) * (1.0 / (2.0 * h)));
                jj.set_col(c, (lifted(j, sp) - lifted(j, sm)) * (1.0 / (2.0 * h)));
            }
            Vec fi = lifted(i, state), fj = lifted(j, state);
            Vec fd_bracket = jj.apply(fi) - ji.apply(fj);
            Vec target = algebra.constants().bracket(Vec::unit(m, i), Vec::unit(m, j));
            Vec expected(n);
            for (int kf = 0; kf < m; ++kf)
                if (target[kf] != 0.0) expected += target[kf] * lifted(kf, state);
            worst = std::max(worst, (fd_bracket - expected).norm());
        }
    return worst;
}

BundleLiftResult lift_path_on_bundle(const LinearLift& lift, const GroupPath& path, const Vec& x0,
                                     const Vec& v0, const IntegrateOptions& opts) {
    BundleLiftResult out;
    const VectorFieldAlgebra& algebra = *lift.algebra;
    const int d = algebra.domain().dimension();
    if (!algebra.domain().contains(x0))
        fail(ErrorCode::point_outside_domain, "bundle lift base point outside domain");

    Vec state = Vec::concat(x0, v0);
    const auto& segments = path.segments();
    for (size_t si = 0; si < segments.size(); ++si) {
        const auto& seg = segments[si];
        OdeRhs rhs = [&, si](double t, const Vec& s) {
            Vec X = path.velocity_in_segment(static_cast<int>(si), t);
            Vec base = s.head(d), fiber = s.tail(lift.rank);
            Vec db = algebra.evaluate_unchecked(X, base);
            Vec dv = lift.vertical_at(X, base).apply(fiber);
            return Vec::concat(db, dv);
        };
        IntegrationResult r = integrate_ode(rhs, seg.t0, seg.t1, state, algebra.domain(), d, opts);
        if (r.escaped()) {
            out.liftable = false;
            out.escape_s = r.t_end;
            return out;
        }
        if (!r.reached()) fail(ErrorCode::nonfinite_field, r.error);
        state = r.y_end;
    }
    out.liftable = true;
    out.group_end = path.end();
    out.point_end = state.head(d);
    out.fiber_end = state.tail(lift.rank);
    return out;
}

}  // namespace leafspace
