#include "leafspace/properness.hpp"

#include <algorithm>
#include <sstream>

#include "leafspace/error.hpp"
#include "leafspace/parallel.hpp"

namespace leafspace {

MetricField constant_metric(const Mat& m) {
    return [m](const Vec&) { return m; };
}

namespace {

Vec group_zero(const GroupSpec& spec) { return Vec::zero(spec.dim()); }

/// The member of I(e; g, x), i.e. the endpoint of the straight lift g -> e.
std::optional<Vec> member_over_e(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                                 const Vec& g, const Vec& x, const IntegrateOptions& opts) {
    LiftResult r = lift_path(algebra, GroupPath::linear(g, group_zero(spec)), x, opts);
    if (!r.liftable) return std::nullopt;
    return r.point_end;
}

bool sequence_converges(const std::vector<Vec>& seq, double tol) {
    if (seq.size() < 2) return false;
    return distance(seq.back(), seq[seq.size() - 2]) <= tol;
}

double fundamental_window_extent(const GroupSpec& spec) {
    double w = 0.0;
    for (const Vec& gen : spec.lattice()) w = std::max(w, gen.norm());
    return w;
}

}  // namespace

ProperReport proper_check(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                          const std::vector<ProperFamily>& families, double window_B,
                          int budget_K, const IntegrateOptions& opts) {
    (void)budget_K;
    ProperReport rep;
    rep.window_B = window_B;
    const double conv_tol = 1e-4;

    for (const ProperFamily& fam : families) {
        if (fam.x_seq.size() != fam.y_seq.size() || fam.x_seq.size() != fam.g_seq.size() ||
            fam.x_seq.empty())
            fail(ErrorCode::uncertified_family, "family sequences have mismatched lengths");

        // Certificates: re-lift the last membership.
        auto replay = member_over_e(algebra, spec, fam.g_seq.back(), fam.x_seq.back(), opts);
        if (!replay || distance(*replay, fam.y_seq.back()) > 2.0 * kPointTol)
            fail(ErrorCode::uncertified_family, "membership certificate failed to replay: " + fam.origin);

        // The criterion quantifies over convergent x_n, y_n only.
        if (!sequence_converges(fam.x_seq, conv_tol) || !sequence_converges(fam.y_seq, conv_tol)) {
            ++rep.families_skipped;
            continue;
        }
        ++rep.families_valid;

        // Accumulation point of {g_n} within the window.
        const auto& gs = fam.g_seq;
        const size_t n = gs.size();
        bool accumulation = false;
        for (size_t i = 0; i < n && !accumulation; ++i) {
            if (gs[i].inf_norm() > window_B) continue;
            size_t close = 0;
            for (size_t j = 0; j < n; ++j)
                if (distance(gs[i], gs[j]) <= rep.cluster_tol) ++close;
            if (close >= std::max<size_t>(3, n / 4)) accumulation = true;
        }

        // Compact groups: sequences inside one fundamental window always
        // accumulate; the finite sample need not exhibit the cluster.
        if (!accumulation && spec.compact()) {
            double extent = fundamental_window_extent(spec);
            bool inside = true;
            for (const Vec& g : gs)
                if (g.norm() > extent + 1e-9) inside = false;
            if (inside) accumulation = true;
        }

        if (!accumulation && rep.proper) {
            rep.proper = false;
            rep.counterexample = fam;
        }
    }
    return rep;
}

std::vector<ProperFamily> generate_proper_families(const VectorFieldAlgebra& algebra,
                                                   const GroupSpec& spec,
                                                   const std::vector<Vec>& loci, int random_loci,
                                                   double window_B, CounterRng& rng,
                                                   const IntegrateOptions& opts) {
    (void)random_loci;  // callers append random loci to `loci`
    std::vector<ProperFamily> fams;
    const int k = spec.dim();
    const int d = algebra.domain().dimension();
    const double compact_extent = spec.compact() ? fundamental_window_extent(spec) : 0.0;

    for (const Vec& locus : loci) {
        if (!algebra.domain().contains(locus)) continue;
        Vec dir = rng.unit_vec(d);

        // Convergent-g family: g_n -> g_bar with a shrinking jitter.
        {
            ProperFamily fam;
            Vec g_bar = spec.compact() ? rng.uniform_vec(k, 0.0, compact_extent)
                                       : rng.uniform_vec(k, -0.5 * window_B, 0.5 * window_B);
            Vec g_dir = rng.unit_vec(k);
            bool ok = true;
            for (int j = 3; j <= 16; ++j) {
                Vec xn = locus + std::pow(2.0, -j) * 0.05 * dir;
                Vec gn = g_bar + std::pow(2.0, -j) * g_dir;
                if (!algebra.domain().contains(xn)) {
                    ok = false;
                    break;
                }
                auto yn = member_over_e(algebra, spec, gn, xn, opts);
                if (!yn) {
                    ok = false;
                    break;
                }
                fam.x_seq.push_back(xn);
                fam.g_seq.push_back(gn);
                fam.y_seq.push_back(*yn);
            }
            if (ok) {
                fam.origin = "convergent-g ladder";
                fams.push_back(std::move(fam));
            }
        }

        // Divergent-g probe: only valid where recapture persists with both
        // endpoint sequences convergent (e.g. at fixed points). Compact
        // groups draw from one fundamental window instead.
        {
            ProperFamily fam;
            bool ok = true;
            for (int j = 1; j <= 10; ++j) {
                Vec xn = locus + std::pow(2.0, -j - 2) * 0.05 * dir;
                Vec gn(k);
                if (spec.compact()) {
                    Vec probe = rng.uniform_vec(k, 0.0, compact_extent);
                    gn = probe;
                } else {
                    gn = (static_cast<double>(j) / 10.0) * window_B * Vec::unit(k, 0);
                }
                if (!algebra.domain().contains(xn)) {
                    ok = false;
                    break;
                }
                auto yn = member_over_e(algebra, spec, gn, xn, opts);
                if (!yn) {
                    ok = false;
                    break;
                }
                fam.x_seq.push_back(xn);
                fam.g_seq.push_back(gn);
                fam.y_seq.push_back(*yn);
            }
            if (ok) {
                fam.origin = spec.compact() ? "fundamental-window probe" : "divergent-g probe";
                fams.push_back(std::move(fam));
            }
        }
    }
    return fams;
}

IsotropyCompactnessReport isotropy_compactness(const VectorFieldAlgebra& algebra,
                                               const GroupSpec& spec, const Vec& x,
                                               double window_B, int budget_K,
                                               const IntegrateOptions& opts) {
    (void)budget_K;
    IsotropyCompactnessReport rep;
    rep.window_B = window_B;
    if (spec.dim() != 1)
        fail(ErrorCode::invalid_parameter, "isotropy scan implemented for k = 1");
    if (!algebra.domain().contains(x))
        fail(ErrorCode::point_outside_domain, "isotropy base point outside domain");

    // March the backward flow parameter g over [-B, B] incrementally and
    // collect parameters whose flow returns to x.
    const int grid = 512;
    const double step = window_B / (grid / 2);
    Vec X = Vec::unit(algebra.algebra_dim(), 0);

    std::vector<std::pair<double, double>> profile;  // (g, dist(Fl_{-g}(x), x))
    profile.emplace_back(0.0, 0.0);
    for (double dir : {1.0, -1.0}) {
        Vec y = x;
        for (int i = 1; i <= grid / 2; ++i) {
            FlowOutcome f = flow(algebra, X, -dir * step, y, opts);
            if (!f.reached()) break;
            y = f.endpoint;
            profile.emplace_back(dir * i * step, distance(y, x));
        }
    }
    std::sort(profile.begin(), profile.end());

    size_t tiny = 0;
    for (const auto& [g, dist_g] : profile)
        if (dist_g <= kPointTol) ++tiny;
    rep.whole_window = tiny == profile.size() && profile.size() > static_cast<size_t>(grid / 2);

    if (rep.whole_window) {
        rep.compact_proxy = spec.compact();
        rep.cluster_count = -1;
        rep.note = "every probe fixes x: continuum isotropy in the window";
        return rep;
    }

    // Local minima below a coarse gate, refined by golden section on the
    // certified flow distance.
    auto eval = [&](double g) {
        FlowOutcome f = flow(algebra, X, -g, x, opts);
        return f.reached() ? distance(f.endpoint, x) : 1e30;
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (size_t i = 0; i < profile.size(); ++i) {
        double g0 = profile[i].first, d0 = profile[i].second;
        if (d0 > 0.2) continue;
        bool local_min = true;
        if (i > 0 && profile[i - 1].second < d0) local_min = false;
        if (i + 1 < profile.size() && profile[i + 1].second < d0) local_min = false;
        if (!local_min) continue;
        double a = g0 - step, b = g0 + step;
        double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
        double f1 = eval(c1), f2 = eval(c2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - phi * (b - a);
                f1 = eval(c1);
            } else {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + phi * (b - a);
                f2 = eval(c2);
            }
        }
        double g_star = 0.5 * (a + b);
        if (eval(g_star) <= kPointTol) {
            bool fresh = true;
            for (double e : rep.elements)
                if (std::abs(e - g_star) <= 1e-3) fresh = false;
            if (fresh) rep.elements.push_back(g_star);
        }
    }
    std::sort(rep.elements.begin(), rep.elements.end());
    rep.cluster_count = static_cast<int>(rep.elements.size());

    if (spec.compact()) {
        rep.compact_proxy = true;
        rep.note = "compact group: isotropy subgroups are closed subsets of a compact group";
    } else {
        double worst = 0.0;
        for (double e : rep.elements) worst = std::max(worst, std::abs(e));
        rep.compact_proxy = worst <= window_B - window_B / 4.0;
        std::ostringstream os;
        os << "max |element| = " << worst << " vs window " << window_B;
        rep.note = os.str();
    }
    return rep;
}

SliceReport build_slice(const VectorFieldAlgebra& algebra, const Vec& x, double radius,
                        int samples, const IntegrateOptions& opts) {
    SliceReport rep;
    rep.base = x;
    rep.radius = radius;
    const int d = algebra.domain().dimension();
    const int m = algebra.algebra_dim();
    if (!algebra.domain().contains(x))
        fail(ErrorCode::point_outside_domain, "slice base point outside domain");

    std::vector<Vec> orbit_cols;
    for (int i = 0; i < m; ++i) orbit_cols.push_back(algebra.basis_field(i)(x));
    rep.orbit_basis = orthonormalize(orbit_cols, 1e-10);
    const int q = static_cast<int>(rep.orbit_basis.size());

    if (q == 0) {
        rep.degenerate = true;
        rep.note = "fixed point: zeta(g)(x) = 0, slice degenerates to the full ball";
        return rep;
    }

    // Slice basis: orthogonal complement of the orbit directions.
    std::vector<Vec> all = rep.orbit_basis;
    for (int i = 0; i < d; ++i) all.push_back(Vec::unit(d, i));
    std::vector<Vec> full = orthonormalize(all, 1e-10);
    rep.slice_basis.assign(full.begin() + q, full.end());
    const int s = static_cast<int>(rep.slice_basis.size());

    // Condition (3): exact complement by construction; report the overlap.
    for (const Vec& ob : rep.orbit_basis)
        for (const Vec& sb : rep.slice_basis)
            rep.direct_sum_overlap = std::max(rep.direct_sum_overlap, std::abs(ob.dot(sb)));

    // Isotropy subalgebra g_x: kernel of X -> zeta_X(x), split along the
    // basis directions (catalog algebras have coordinate-aligned kernels).
    std::vector<Vec> gx_basis, gx_complement;
    for (int i = 0; i < m; ++i) {
        if (orbit_cols[static_cast<size_t>(i)].norm() <= 1e-10 * (1.0 + x.norm()))
            gx_basis.push_back(Vec::unit(m, i));
        else
            gx_complement.push_back(Vec::unit(m, i));
    }

    // Slice samples on the complement disc.
    std::vector<Vec> slice_pts;
    slice_pts.push_back(x);
    int per_axis = std::max(2, samples / std::max(1, s));
    for (int axis = 0; axis < s; ++axis)
        for (int i = 0; i < per_axis; ++i) {
            double u = radius * (2.0 * (i + 0.5) / per_axis - 1.0);
            Vec y = x + u * rep.slice_basis[static_cast<size_t>(axis)];
            if (algebra.domain().contains(y)) slice_pts.push_back(y);
        }

    rep.spanning_min_sv = 1e30;
    rep.tangency_kernel_margin = 1e30;
    rep.isotropy_tangency_residual = 0.0;
    for (const Vec& y : slice_pts) {
        // Condition (2): orbit directions at y plus the slice span everything.
        std::vector<Vec> span_cols;
        for (int i = 0; i < m; ++i) span_cols.push_back(algebra.basis_field(i)(y));
        for (const Vec& sb : rep.slice_basis) span_cols.push_back(sb);
        // Smallest singular value of the transpose map (rank-d test): use the
        // d x d sum of outer products.
        Mat gram(d, d);
        for (const Vec& c : span_cols)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) gram(a, b) += c[a] * c[b];
        // Jacobi eigen through min_singular_value of the column set in R^d:
        std::vector<Vec> rows;
        for (int a = 0; a < d; ++a) rows.push_back(gram.col(a));
        double lmin = min_singular_value(rows);  // = smallest eigenvalue of gram (SPD)
        rep.spanning_min_sv = std::min(rep.spanning_min_sv, std::sqrt(std::max(0.0, lmin)));

        // Condition (5): no direction outside g_x becomes slice-tangent.
        if (!gx_complement.empty()) {
            std::vector<Vec> phi_cols;
            for (const Vec& Xc : gx_complement) {
                Vec val = algebra.evaluate_unchecked(Xc, y);
                Vec proj(d);
                for (const Vec& ob : rep.orbit_basis) proj += ob.dot(val) * ob;
                phi_cols.push_back(proj);
            }
            rep.tangency_kernel_margin =
                std::min(rep.tangency_kernel_margin, min_singular_value(phi_cols));
        }

        // Condition (1): isotropy directions stay tangent to the slice.
        for (const Vec& Xg : gx_basis) {
            Vec val = algebra.evaluate_unchecked(Xg, y);
            double off = 0.0;
            for (const Vec& ob : rep.orbit_basis) off = std::max(off, std::abs(ob.dot(val)));
            rep.isotropy_tangency_residual = std::max(rep.isotropy_tangency_residual, off);
        }
    }

    // Condition (4): tube openness, sampled. Points near x must be reached by
    // flowing from slice points: coordinate descent over the slice position
    // and the flow time (single-generator flows; the catalog orbit
    // directions are one-dimensional).
    int covered = 0, tried = 0;
    std::vector<Vec> tube_probes = probe_cloud(x, 0.4 * radius, 8);
    double speed = 0.0;
    for (const Vec& c : orbit_cols) speed = std::max(speed, c.norm());
    double t_span = speed > 0.0 ? 3.0 * radius / speed : 0.0;
    Vec X0 = Vec::unit(m, 0);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (const Vec& u : tube_probes) {
        if (!algebra.domain().contains(u)) continue;
        ++tried;
        // parameters: slice offsets sigma_0..sigma_{s-1} and the flow time
        std::vector<double> param(static_cast<size_t>(s) + 1, 0.0);
        auto eval = [&](const std::vector<double>& p) {
            Vec sp = x;
            for (int c = 0; c < s; ++c) sp += p[static_cast<size_t>(c)] * rep.slice_basis[static_cast<size_t>(c)];
            if (!algebra.domain().contains(sp)) return 1e30;
            FlowOutcome f = flow(algebra, X0, p.back(), sp, opts);
            return f.reached() ? distance(f.endpoint, u) : 1e30;
        };
        // coarse grid over the first slice coordinate and time
        double best = eval(param);
        for (int gi = 0; gi <= 8 && s > 0; ++gi)
            for (int gt = 0; gt <= 8; ++gt) {
                std::vector<double> p = param;
                p[0] = radius * (gi / 4.0 - 1.0);
                p.back() = t_span * (gt / 4.0 - 1.0);
                double v = eval(p);
                if (v < best) {
                    best = v;
                    param = p;
                }
            }
        // golden coordinate descent
        for (int sweep = 0; sweep < 3; ++sweep) {
            for (size_t ci = 0; ci < param.size(); ++ci) {
                double width = ci + 1 == param.size() ? t_span / 2.0 : radius / 2.0;
                width /= (sweep + 1);
                double a = param[ci] - width, b = param[ci] + width;
                auto eval_c = [&](double v) {
                    std::vector<double> p = param;
                    p[ci] = v;
                    return eval(p);
                };
                double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
                double f1 = eval_c(c1), f2 = eval_c(c2);
                for (int it = 0; it < 24; ++it) {
                    if (f1 < f2) {
                        b = c2;
                        c2 = c1;
                        f2 = f1;
                        c1 = b - phi * (b - a);
                        f1 = eval_c(c1);
                    } else {
                        a = c1;
                        c1 = c2;
                        f1 = f2;
                        c2 = a + phi * (b - a);
                        f2 = eval_c(c2);
                    }
                }
                double mid = 0.5 * (a + b);
                if (eval_c(mid) < eval(param)) param[ci] = mid;
            }
            if (eval(param) <= 2e-3) break;
        }
        if (eval(param) <= 2e-3) ++covered;
    }
    rep.tube_coverage = tried > 0 ? static_cast<double>(covered) / tried : 1.0;

    rep.conditions_pass = rep.spanning_min_sv > 1e-6 && rep.direct_sum_overlap < 1e-9 &&
                          (gx_complement.empty() || rep.tangency_kernel_margin > 1e-6) &&
                          rep.isotropy_tangency_residual < 1e-6 && rep.tube_coverage >= 0.99;
    return rep;
}

double killing_defect(const VectorFieldAlgebra& algebra, const MetricField& metric,
                      const std::vector<Vec>& samples, double h_fd) {
    const int d = algebra.domain().dimension();
    const int m = algebra.algebra_dim();
    double worst = 0.0;
    for (const Vec& x : samples) {
        if (algebra.domain().signed_distance(x) <= 2.0 * h_fd)
            fail(ErrorCode::stencil_exits_domain, "killing FD stencil leaves the domain");
        for (int f = 0; f < m; ++f) {
            Vec X = algebra.basis_field(f)(x);
            Mat jac = field_jacobian(algebra, f, x, h_fd);
            Mat h0 = metric(x);
            // directional derivative of the metric along the field
            Mat dh(d, d);
            for (int kc = 0; kc < d; ++kc) {
                Vec xp = x, xm = x;
                xp[kc] += h_fd;
                xm[kc] -= h_fd;
                Mat diff = (metric(xp) - metric(xm)) * (1.0 / (2.0 * h_fd));
                dh = dh + diff * X[kc];
            }
            // (L_X h)_{ab} = X^c d_c h_ab + h_cb d_a X^c + h_ac d_b X^c
            Mat lie(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    double v = dh(a, b);
                    for (int c = 0; c < d; ++c)
                        v += h0(c, b) * jac(c, a) + h0(a, c) * jac(c, b);
                    lie(a, b) = v;
                }
            worst = std::max(worst, lie.frobenius());
        }
    }
    return worst;
}

Mat average_metric(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                   const MetricField& metric, const Vec& x, int quadrature,
                   const IntegrateOptions& opts) {
    if (!spec.compact())
        fail(ErrorCode::invalid_parameter, "metric averaging needs a compact group (full-rank lattice)");
    const int d = algebra.domain().dimension();
    const int k = spec.dim();
    if (k != 1)
        fail(ErrorCode::invalid_parameter, "metric averaging implemented for k = 1 compact groups");

    // The invariant average must range over the full holonomy group at x:
    // the fundamental domain composed with the deck words identifying the
    // chart fiber. The period is (recurrence member count) lattice steps;
    // the whole-period lift must close up, otherwise the orbit is incomplete
    // and averaging is impossible.
    const double lattice_step = spec.lattice()[0].norm();
    IntersectionSet rec = recurrence_set(algebra, spec, x, 16, opts);
    const double period = static_cast<double>(rec.members.size()) * lattice_step;
    LiftResult closure =
        lift_path(algebra, GroupPath::linear(Vec::zero(k), Vec{period}), x, opts);
    if (!closure.liftable || distance(closure.point_end, x) > 10.0 * kPointTol)
        fail(ErrorCode::orbit_escapes_domain,
             "orbit does not close over the holonomy period; averaging impossible");

    std::vector<Vec> nodes;
    for (int j = 0; j < quadrature; ++j)
        nodes.push_back(Vec{period * static_cast<double>(j) / quadrature});

    Vec e = Vec::zero(k);
    Mat acc(d, d);
    std::vector<std::optional<Mat>> pulls(nodes.size());
    parallel_for(nodes.size(), [&](size_t ni) {
        const Vec& g = nodes[ni];
        GroupPath path = GroupPath::linear(e, g);
        LiftResult base = lift_path(algebra, path, x, opts);
        if (!base.liftable) return;
        // FD Jacobian of the holonomy transform.
        double h = 1e-5 * (1.0 + x.norm());
        Mat jac(d, d);
        for (int j = 0; j < d; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            LiftResult lp = lift_path(algebra, path, xp, opts);
            LiftResult lm = lift_path(algebra, path, xm, opts);
            if (!lp.liftable || !lm.liftable) return;
            jac.set_col(j, (lp.point_end - lm.point_end) * (1.0 / (2.0 * h)));
        }
        Mat hy = metric(base.point_end);
        pulls[ni] = jac.transpose().mul(hy).mul(jac);
    });

    int used = 0;
    for (const auto& p : pulls) {
        if (!p) fail(ErrorCode::orbit_escapes_domain, "orbit leaves the domain during averaging");
        acc = acc + *p;
        ++used;
    }
    Mat avg = acc * (1.0 / used);
    // Symmetrize away FD noise and validate positivity.
    Mat sym(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) sym(a, b) = 0.5 * (avg(a, b) + avg(b, a));
    if (!positive_definite(sym))
        fail(ErrorCode::invalid_parameter, "averaged metric lost positive-definiteness");
    return sym;
}

}  // namespace leafspace
