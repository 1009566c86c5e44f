#include "leafspace/algebra.hpp"

#include <sstream>

#include "leafspace/error.hpp"

namespace leafspace {

Vec StructureConstants::bracket(const Vec& x, const Vec& y) const {
    Vec out(m_);
    for (int k = 0; k < m_; ++k) {
        double s = 0.0;
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) s += get(k, i, j) * x[i] * y[j];
        out[k] = s;
    }
    return out;
}

double StructureConstants::antisymmetry_residual() const {
    double r = 0.0;
    for (int k = 0; k < m_; ++k)
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) r = std::max(r, std::abs(get(k, i, j) + get(k, j, i)));
    return r;
}

double StructureConstants::jacobi_residual() const {
    double r = 0.0;
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            for (int k = 0; k < m_; ++k)
                for (int l = 0; l < m_; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < m_; ++m)
                        s += get(m, i, j) * get(l, m, k) + get(m, j, k) * get(l, m, i) +
                             get(m, k, i) * get(l, m, j);
                    r = std::max(r, std::abs(s));
                }
    return r;
}

double StructureConstants::max_abs() const {
    double r = 0.0;
    for (int k = 0; k < m_; ++k)
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) r = std::max(r, std::abs(get(k, i, j)));
    return r;
}

VectorFieldAlgebra::VectorFieldAlgebra(ChartDomain domain, std::vector<VectorField> basis,
                                       StructureConstants constants)
    : domain_(std::move(domain)), basis_(std::move(basis)), constants_(std::move(constants)) {
    if (constants_.dim() != static_cast<int>(basis_.size()))
        fail(ErrorCode::invalid_parameter, "structure constants dim != basis size");
    if (constants_.antisymmetry_residual() != 0.0)
        fail(ErrorCode::invalid_parameter, "structure constants are not antisymmetric");
    if (constants_.jacobi_residual() != 0.0)
        fail(ErrorCode::invalid_parameter, "structure constants violate the Jacobi identity");
}

Vec VectorFieldAlgebra::evaluate(const Vec& coeff, const Vec& x) const {
    if (!domain_.contains(x)) {
        std::ostringstream os;
        os << "evaluate at (" << x[0] << (x.size() > 1 ? "," : "") << (x.size() > 1 ? std::to_string(x[1]) : "")
           << ") outside " << domain_.label();
        fail(ErrorCode::point_outside_domain, os.str());
    }
    return evaluate_unchecked(coeff, x);
}

Vec VectorFieldAlgebra::evaluate_unchecked(const Vec& coeff, const Vec& x) const {
    Vec out(domain_.dimension());
    for (int i = 0; i < algebra_dim(); ++i) {
        if (coeff[i] == 0.0) continue;
        out += coeff[i] * basis_[static_cast<size_t>(i)](x);
    }
    return out;
}

Mat field_jacobian(const VectorFieldAlgebra& algebra, int i, const Vec& x, double h) {
    const int d = algebra.domain().dimension();
    if (algebra.domain().signed_distance(x) <= 2.0 * h)
        fail(ErrorCode::step_too_large, "FD stencil leaves the domain");
    Mat jac(d, d);
    const auto& f = algebra.basis_field(i);
    for (int j = 0; j < d; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        Vec df = (f(xp) - f(xm)) * (1.0 / (2.0 * h));
        jac.set_col(j, df);
    }
    return jac;
}

double bracket_defect(const VectorFieldAlgebra& algebra, int i, int j, const Vec& x, double h) {
    if (!algebra.domain().contains(x))
        fail(ErrorCode::point_outside_domain, "bracket_defect base point outside domain");
    Mat ji = field_jacobian(algebra, i, x, h);
    Mat jj = field_jacobian(algebra, j, x, h);
    Vec fi = algebra.basis_field(i)(x);
    Vec fj = algebra.basis_field(j)(x);
    Vec fd_bracket = jj.apply(fi) - ji.apply(fj);
    Vec target = algebra.constants().bracket(Vec::unit(algebra.algebra_dim(), i),
                                             Vec::unit(algebra.algebra_dim(), j));
    Vec expected = algebra.evaluate_unchecked(target, x);
    return (fd_bracket - expected).norm();
}

}  // namespace leafspace
