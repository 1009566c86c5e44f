#include "leafspace/group.hpp"

#include <cmath>

#include "leafspace/error.hpp"

namespace leafspace {

namespace {

/// Solve the p x p system a x = b by Gaussian elimination with partial
/// pivoting (p is at most the group dimension, tiny).
Vec solve_small(Mat a, Vec b) {
    const int n = a.rows();
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) < 1e-14)
            fail(ErrorCode::invalid_parameter, "lattice generators are linearly dependent");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            std::swap(b[col], b[piv]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = a(r, col) / a(col, col);
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

}  // namespace

GroupSpec::GroupSpec(int k, std::vector<Vec> lattice_generators)
    : k_(k), lattice_(std::move(lattice_generators)) {
    if (static_cast<int>(lattice_.size()) > k_)
        fail(ErrorCode::invalid_parameter, "more lattice generators than the group dimension");
    const int p = static_cast<int>(lattice_.size());
    if (p > 0) {
        Mat gram(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) gram(i, j) = lattice_[i].dot(lattice_[j]);
        // validated through solve_small: dependent generators are rejected
        Vec probe(p);
        for (int i = 0; i < p; ++i) probe[i] = 1.0;
        (void)solve_small(gram, probe);
    }
}

Vec GroupSpec::project(const Vec& g_cover) const {
    if (lattice_.empty()) return g_cover;
    const int p = static_cast<int>(lattice_.size());
    Mat gram(p, p);
    Vec rhs(p);
    for (int i = 0; i < p; ++i) {
        rhs[i] = lattice_[i].dot(g_cover);
        for (int j = 0; j < p; ++j) gram(i, j) = lattice_[i].dot(lattice_[j]);
    }
    Vec coords = solve_small(gram, rhs);
    Vec rep = g_cover;
    for (int i = 0; i < p; ++i) rep -= std::floor(coords[i]) * lattice_[i];
    return rep;
}

std::vector<Vec> GroupSpec::deck_window(int budget) const {
    std::vector<Vec> out;
    if (lattice_.empty()) {
        out.push_back(Vec::zero(k_));
        return out;
    }
    const int p = static_cast<int>(lattice_.size());
    std::vector<int> a(static_cast<size_t>(p), -budget);
    for (;;) {
        Vec lam(k_);
        for (int i = 0; i < p; ++i) lam += static_cast<double>(a[static_cast<size_t>(i)]) * lattice_[static_cast<size_t>(i)];
        out.push_back(lam);
        int i = 0;
        while (i < p && ++a[static_cast<size_t>(i)] > budget) a[static_cast<size_t>(i++)] = -budget;
        if (i == p) break;
    }
    return out;
}

std::vector<Vec> GroupSpec::deck_orbit_in_window(const Vec& g_cover, double window,
                                                 int budget) const {
    std::vector<Vec> out;
    for (const Vec& lam : deck_window(budget)) {
        Vec g = g_cover + lam;
        if (g.inf_norm() <= window) out.push_back(g);
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

// --- GroupPath --------------------------------------------------------------

GroupPath::GroupPath(int k, std::vector<Segment> segments) : k_(k), segments_(std::move(segments)) {
    if (segments_.empty()) fail(ErrorCode::invalid_parameter, "path needs at least one segment");
    for (size_t s = 0; s + 1 < segments_.size(); ++s) {
        Vec end = Vec::zero(k_), begin = segments_[s + 1].coeffs[0];
        for (const Vec& c : segments_[s].coeffs) end += c;  // u = 1
        if (distance(end, begin) > 1e-9)
            fail(ErrorCode::invalid_parameter, "path segments are discontinuous at a junction");
    }
}

GroupPath GroupPath::linear(const Vec& a, const Vec& b) {
    Segment s{0.0, 1.0, {a, b - a}};
    return GroupPath(a.size(), {s});
}

GroupPath GroupPath::polyline(const std::vector<Vec>& waypoints) {
    if (waypoints.size() < 2) fail(ErrorCode::invalid_parameter, "polyline needs two waypoints");
    const int n = static_cast<int>(waypoints.size()) - 1;
    std::vector<Segment> segs;
    for (int i = 0; i < n; ++i) {
        segs.push_back({static_cast<double>(i) / n, static_cast<double>(i + 1) / n,
                        {waypoints[static_cast<size_t>(i)], waypoints[static_cast<size_t>(i + 1)] - waypoints[static_cast<size_t>(i)]}});
    }
    return GroupPath(waypoints[0].size(), std::move(segs));
}

GroupPath GroupPath::polynomial(int k, std::vector<Vec> coeffs) {
    Segment s{0.0, 1.0, std::move(coeffs)};
    return GroupPath(k, {s});
}

Vec GroupPath::value(double t) const {
    const Segment* seg = &segments_.back();
    for (const auto& s : segments_)
        if (t <= s.t1) {
            seg = &s;
            break;
        }
    double u = (t - seg->t0) / (seg->t1 - seg->t0);
    Vec v = Vec::zero(k_);
    for (size_t j = seg->coeffs.size(); j-- > 0;) v = u * v + seg->coeffs[j];
    return v;
}

Vec GroupPath::velocity_in_segment(int si, double t) const {
    const Segment& seg = segments_[static_cast<size_t>(si)];
    double w = seg.t1 - seg.t0;
    double u = (t - seg.t0) / w;
    Vec v = Vec::zero(k_);
    for (size_t j = seg.coeffs.size(); j-- > 1;)
        v = u * v + static_cast<double>(j) * seg.coeffs[j];
    return v * (1.0 / w);
}

bool GroupPath::is_junction(double t, double tol) const {
    for (size_t s = 0; s + 1 < segments_.size(); ++s)
        if (std::abs(t - segments_[s].t1) <= tol) return true;
    return false;
}

Vec GroupPath::velocity(double t) const {
    if (is_junction(t))
        fail(ErrorCode::junction_parameter, "velocity undefined at a segment junction");
    for (size_t s = 0; s < segments_.size(); ++s)
        if (t <= segments_[s].t1 || s + 1 == segments_.size())
            return velocity_in_segment(static_cast<int>(s), t);
    return Vec::zero(k_);
}

GroupPath GroupPath::then(const GroupPath& next) const {
    Vec shift = end() - next.start();
    std::vector<Segment> segs;
    for (const auto& s : segments_) segs.push_back({0.5 * s.t0, 0.5 * s.t1, s.coeffs});
    for (const auto& s : next.segments_) {
        Segment t{0.5 + 0.5 * s.t0, 0.5 + 0.5 * s.t1, s.coeffs};
        t.coeffs[0] += shift;
        segs.push_back(std::move(t));
    }
    return GroupPath(k_, std::move(segs));
}

GroupPath GroupPath::reparametrized(const std::vector<double>& sigma_coeffs) const {
    if (segments_.size() != 1)
        fail(ErrorCode::invalid_parameter, "reparametrization requires a single-segment path");
    const auto& c = segments_[0].coeffs;
    // Compose c(sigma(u)) by expanding powers of sigma.
    std::vector<std::vector<double>> sigma_pow;  // sigma^j coefficients
    sigma_pow.push_back({1.0});
    std::vector<double> sig = sigma_coeffs;
    for (size_t j = 1; j < c.size(); ++j) {
        const auto& prev = sigma_pow.back();
        std::vector<double> cur(prev.size() + sig.size() - 1, 0.0);
        for (size_t a = 0; a < prev.size(); ++a)
            for (size_t b = 0; b < sig.size(); ++b) cur[a + b] += prev[a] * sig[b];
        sigma_pow.push_back(std::move(cur));
    }
    size_t deg = 0;
    for (const auto& p : sigma_pow) deg = std::max(deg, p.size());
    std::vector<Vec> out(deg, Vec::zero(k_));
    for (size_t j = 0; j < c.size(); ++j)
        for (size_t a = 0; a < sigma_pow[j].size(); ++a) out[a] += sigma_pow[j][a] * c[j];
    return GroupPath::polynomial(k_, std::move(out));
}

// --- flatness ---------------------------------------------------------------

FlatnessReport flatness_defect(const VectorFieldAlgebra& algebra, const GroupSpec& spec,
                               const Vec& x, double h) {
    FlatnessReport rep;
    const int m = algebra.algebra_dim();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            rep.bracket_defect_max = std::max(rep.bracket_defect_max,
                                              bracket_defect(algebra, i, j, x, h));
    rep.jacobi_residual = algebra.constants().jacobi_residual();
    // Abelian groups admit only commuting infinitesimal actions; a nonzero
    // bracket in the algebra cannot pair with this group model.
    if (spec.dim() >= 0) rep.abelian_mismatch = algebra.constants().max_abs();
    rep.flagged_nonabelian = rep.abelian_mismatch > 0.0;
    return rep;
}

}  // namespace leafspace
