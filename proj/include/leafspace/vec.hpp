#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

namespace leafspace {

/// Small fixed-capacity vector used for chart points, tangent vectors and
/// ODE states. Capacity covers base dimension plus fiber rank for bundle
/// integration; no heap traffic on the integrator hot path.
class Vec {
public:
    static constexpr int kMaxDim = 12;

    Vec() : n_(0) { data_.fill(0.0); }
    explicit Vec(int n) : n_(n) {
        assert(n >= 0 && n <= kMaxDim);
        data_.fill(0.0);
    }
    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        assert(n_ <= kMaxDim);
        data_.fill(0.0);
        std::copy(xs.begin(), xs.end(), data_.begin());
    }
    static Vec zero(int n) { return Vec(n); }
    static Vec unit(int n, int i) {
        Vec v(n);
        v[i] = 1.0;
        return v;
    }
    static Vec from(const std::vector<double>& xs) {
        Vec v(static_cast<int>(xs.size()));
        std::copy(xs.begin(), xs.end(), v.data_.begin());
        return v;
    }

    int size() const { return n_; }
    double& operator[](int i) { return data_[static_cast<size_t>(i)]; }
    double operator[](int i) const { return data_[static_cast<size_t>(i)]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) data_[i] += o.data_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n_; ++i) data_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    double dot(const Vec& o) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += data_[i] * o.data_[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    double inf_norm() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(data_[i]));
        return m;
    }
    bool finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(data_[i])) return false;
        return true;
    }
    Vec head(int m) const {
        Vec v(m);
        for (int i = 0; i < m; ++i) v[i] = data_[i];
        return v;
    }
    Vec tail(int m) const {
        Vec v(m);
        for (int i = 0; i < m; ++i) v[i] = data_[n_ - m + i];
        return v;
    }
    static Vec concat(const Vec& a, const Vec& b) {
        Vec v(a.size() + b.size());
        for (int i = 0; i < a.size(); ++i) v[i] = a[i];
        for (int i = 0; i < b.size(); ++i) v[a.size() + i] = b[i];
        return v;
    }
    std::vector<double> to_std() const { return {data_.begin(), data_.begin() + n_}; }

private:
    std::array<double, kMaxDim> data_;
    int n_;
};

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

/// Lexicographic order used for canonical sorting of member lists.
inline bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

/// Small dense matrix (row-major), sized for chart Jacobians and fiber maps.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int r, int c) : rows_(r), cols_(c), a_(static_cast<size_t>(r) * c, 0.0) {}
    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat rotation2(double angle_rad) {
        Mat m(2, 2);
        m(0, 0) = std::cos(angle_rad);
        m(0, 1) = -std::sin(angle_rad);
        m(1, 0) = std::sin(angle_rad);
        m(1, 1) = std::cos(angle_rad);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Vec col(int j) const {
        Vec v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_col(int j, const Vec& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    Vec apply(const Vec& x) const {
        Vec y(rows_);
        for (int i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }
    Mat mul(const Mat& b) const {
        Mat c(rows_, b.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const double aik = (*this)(i, k);
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    Mat operator+(const Mat& b) const {
        Mat c(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] + b.a_[i];
        return c;
    }
    Mat operator-(const Mat& b) const {
        Mat c(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] - b.a_[i];
        return c;
    }
    Mat operator*(double s) const {
        Mat c(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] * s;
        return c;
    }
    double frobenius() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }
    bool symmetric(double tol = 0.0) const {
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

private:
    int rows_, cols_;
    std::vector<double> a_;
};

/// Modified Gram-Schmidt; returns an orthonormal basis of the column span.
/// Columns with residual norm below tol are dropped.
std::vector<Vec> orthonormalize(const std::vector<Vec>& cols, double tol = 1e-12);

/// Smallest singular value of the matrix whose columns are `cols`
/// (via eigenvalues of the Gram matrix; dimensions here are tiny).
double min_singular_value(const std::vector<Vec>& cols);

/// Cholesky-based SPD test.
bool positive_definite(const Mat& m, double tol = 0.0);

constexpr double kTurn = 2.0 * std::numbers::pi;  // one full turn in radians

/// Angle of (x,y) in turn units, in [0,1).
inline double angle_turns(double x, double y) {
    double a = std::atan2(y, x) / kTurn;
    if (a < 0.0) a += 1.0;
    return a;
}

/// Wrap a turn-unit angle difference into (-1/2, 1/2].
inline double wrap_half(double dt) {
    double w = dt - std::floor(dt + 0.5);
    if (w <= -0.5) w += 1.0;
    return w;
}

/// Point on the radius-r circle at angle theta (turn units).
inline Vec polar(double r, double theta_turns) {
    return Vec{r * std::cos(kTurn * theta_turns), r * std::sin(kTurn * theta_turns)};
}

}  // namespace leafspace
