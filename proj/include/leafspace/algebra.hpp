#pragma once

#include <functional>
#include <string>
#include <vector>

#include "leafspace/domain.hpp"
#include "leafspace/vec.hpp"

namespace leafspace {

/// One basis vector field: point -> tangent vector on the chart domain.
using VectorField = std::function<Vec(const Vec&)>;

/// Structure constants c[k][i][j] with [e_i, e_j] = sum_k c^k_ij e_k.
class StructureConstants {
public:
    StructureConstants() : m_(0) {}
    explicit StructureConstants(int m) : m_(m), c_(static_cast<size_t>(m) * m * m, 0.0) {}

    int dim() const { return m_; }
    double get(int k, int i, int j) const { return c_[idx(k, i, j)]; }
    void set(int k, int i, int j, double v) {
        c_[idx(k, i, j)] = v;
        c_[idx(k, j, i)] = -v;
    }

    /// Coefficients of [X, Y] in the basis.
    Vec bracket(const Vec& x, const Vec& y) const;

    double antisymmetry_residual() const;
    double jacobi_residual() const;
    double max_abs() const;

private:
    size_t idx(int k, int i, int j) const {
        return (static_cast<size_t>(k) * m_ + i) * m_ + j;
    }
    int m_;
    std::vector<double> c_;
};

/// The infinitesimal action: basis fields on a chart domain together with the
/// structure constants of the acting Lie algebra. Construction validates the
/// constants symbolically (antisymmetry and the Jacobi identity must hold
/// exactly); the homomorphism property of the fields themselves is a numeric
/// question answered by bracket_defect.
class VectorFieldAlgebra {
public:
    VectorFieldAlgebra() = default;
    VectorFieldAlgebra(ChartDomain domain, std::vector<VectorField> basis,
                       StructureConstants constants);

    int algebra_dim() const { return static_cast<int>(basis_.size()); }
    const ChartDomain& domain() const { return domain_; }
    const StructureConstants& constants() const { return constants_; }
    const VectorField& basis_field(int i) const { return basis_[static_cast<size_t>(i)]; }

    /// zeta_X(x) = sum_i X^i zeta_{e_i}(x); throws point_outside_domain.
    Vec evaluate(const Vec& coeff, const Vec& x) const;

    /// Basis field value without the containment check (integrator internal).
    Vec evaluate_unchecked(const Vec& coeff, const Vec& x) const;

private:
    ChartDomain domain_;
    std::vector<VectorField> basis_;
    StructureConstants constants_;
};

/// || FD-bracket(zeta_i, zeta_j)(x) - zeta_{[e_i,e_j]}(x) || with central
/// differences of step h. O(h^2) for exact homomorphisms.
double bracket_defect(const VectorFieldAlgebra& algebra, int i, int j, const Vec& x, double h);

/// Finite-difference Jacobian of a basis field (central, step h).
Mat field_jacobian(const VectorFieldAlgebra& algebra, int i, const Vec& x, double h);

}  // namespace leafspace
