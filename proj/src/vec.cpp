#include "leafspace/vec.hpp"

namespace leafspace {

std::vector<Vec> orthonormalize(const std::vector<Vec>& cols, double tol) {
    std::vector<Vec> basis;
    for (const Vec& c : cols) {
        Vec v = c;
        for (const Vec& b : basis) v -= b.dot(v) * b;
        // second pass for numerical stability
        for (const Vec& b : basis) v -= b.dot(v) * b;
        double r = v.norm();
        if (r > tol) basis.push_back(v * (1.0 / r));
    }
    return basis;
}

double min_singular_value(const std::vector<Vec>& cols) {
    if (cols.empty()) return 0.0;
    const int m = static_cast<int>(cols.size());
    Mat gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) gram(i, j) = cols[static_cast<size_t>(i)].dot(cols[static_cast<size_t>(j)]);
    // smallest eigenvalue of the Gram matrix by cyclic Jacobi (m is tiny)
    Mat a = gram;
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                double theta = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
                double c = std::cos(theta), s = std::sin(theta);
                for (int i = 0; i < m; ++i) {
                    double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < m; ++i) {
                    double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
    }
    double lmin = a(0, 0);
    for (int i = 1; i < m; ++i) lmin = std::min(lmin, a(i, i));
    return lmin > 0.0 ? std::sqrt(lmin) : 0.0;
}

bool positive_definite(const Mat& m, double tol) {
    const int n = m.rows();
    Mat l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= tol) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return true;
}

}  // namespace leafspace
