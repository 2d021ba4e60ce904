#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lpoc/errors.hpp"

namespace lpoc {

/// Coordinates of a Lie algebra element in the fixed ordered basis {e_i}.
struct AlgebraVector {
    Eigen::VectorXd coords;

    AlgebraVector() = default;
    explicit AlgebraVector(Eigen::VectorXd c) : coords(std::move(c)) {}
    static AlgebraVector Zero(int dim) { return AlgebraVector(Eigen::VectorXd::Zero(dim)); }

    int dim() const { return static_cast<int>(coords.size()); }
    double norm() const { return coords.norm(); }
};

/// Coordinates of a dual element in the basis {e^i} dual to {e_i}.  The
/// coordinate pairing with an AlgebraVector is the plain dot product.
struct DualVector {
    Eigen::VectorXd coords;

    DualVector() = default;
    explicit DualVector(Eigen::VectorXd c) : coords(std::move(c)) {}
    static DualVector Zero(int dim) { return DualVector(Eigen::VectorXd::Zero(dim)); }

    int dim() const { return static_cast<int>(coords.size()); }
    double norm() const { return coords.norm(); }
};

inline AlgebraVector operator+(const AlgebraVector& a, const AlgebraVector& b) {
    return AlgebraVector(a.coords + b.coords);
}
inline AlgebraVector operator-(const AlgebraVector& a, const AlgebraVector& b) {
    return AlgebraVector(a.coords - b.coords);
}
inline AlgebraVector operator*(double s, const AlgebraVector& a) {
    return AlgebraVector(s * a.coords);
}
inline DualVector operator+(const DualVector& a, const DualVector& b) {
    return DualVector(a.coords + b.coords);
}
inline DualVector operator-(const DualVector& a, const DualVector& b) {
    return DualVector(a.coords - b.coords);
}
inline DualVector operator*(double s, const DualVector& a) {
    return DualVector(s * a.coords);
}

/// A square matrix representing g in the matrix group G.
struct GroupElement {
    Eigen::MatrixXd matrix;

    GroupElement() = default;
    explicit GroupElement(Eigen::MatrixXd m) : matrix(std::move(m)) {}
    static GroupElement Identity(int n) { return GroupElement(Eigen::MatrixXd::Identity(n, n)); }

    GroupElement inverse() const { return GroupElement(matrix.inverse()); }
};

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement(a.matrix * b.matrix);
}

enum class GroupKind { SO3, SE2, Generic };

/// Fixed-basis description of a finite-dimensional matrix Lie algebra:
/// basis matrices, structure constants, the dual basis realizing the trace
/// pairing, and the k/p control-subspace split.
struct LieAlgebraSpec {
    std::string name;
    GroupKind group = GroupKind::Generic;
    int dim = 0;
    int matrix_dim = 0;
    std::vector<Eigen::MatrixXd> basis;       ///< e_i
    std::vector<Eigen::MatrixXd> dual_basis;  ///< e^i with tr(e^i e_j) = delta_ij
    /// structure[k](i,j) = c^k_{ij} with [e_i, e_j] = sum_k c^k_{ij} e_k
    std::vector<Eigen::MatrixXd> structure;
    std::vector<int> subspace_k;  ///< controlled directions (0-based indices)
    std::vector<int> subspace_p;  ///< complement

    /// Matrix of ad_u acting on coordinates: (ad_u)_{kj} = sum_i c^k_{ij} u^i.
    Eigen::MatrixXd ad_matrix(const AlgebraVector& u) const;
};

LieAlgebraSpec make_so3();
LieAlgebraSpec make_se2();

/// Throws ContractViolation if the spec fails any of its invariants
/// (antisymmetry, Jacobi, bracket/matrix consistency, dual-pairing
/// realization, subspace partition).
void validate(const LieAlgebraSpec& spec, double tol = 1e-12);

/// Throws ContractViolation if g fails the group invariant for spec.group.
void check_group(const LieAlgebraSpec& spec, const GroupElement& g, double tol = 1e-9);

AlgebraVector bracket(const LieAlgebraSpec& spec, const AlgebraVector& a, const AlgebraVector& b);
DualVector ad_star(const LieAlgebraSpec& spec, const AlgebraVector& u, const DualVector& m);

Eigen::MatrixXd hat(const LieAlgebraSpec& spec, const AlgebraVector& a);
AlgebraVector vee(const LieAlgebraSpec& spec, const Eigen::MatrixXd& M);
/// Dual-basis materialization sum_i m_i e^i (used by pairing tests and the
/// printed-matrix cross checks).
Eigen::MatrixXd hat_dual(const LieAlgebraSpec& spec, const DualVector& m);

double pair(const DualVector& m, const AlgebraVector& x);

AlgebraVector Ad(const LieAlgebraSpec& spec, const GroupElement& g, const AlgebraVector& x);
DualVector Ad_star(const LieAlgebraSpec& spec, const GroupElement& g, const DualVector& m);
/// Coordinate matrix of Ad_g (columns Ad_g e_i).
Eigen::MatrixXd Ad_matrix(const LieAlgebraSpec& spec, const GroupElement& g);

/// Project coordinates onto the span of the given (0-based) index set,
/// zeroing the complement.
Eigen::VectorXd project_onto(const Eigen::VectorXd& v, const std::vector<int>& indices, int dim);

/// True if the k/p split satisfies [k,k] <= p, [p,k] <= k, [p,p] <= p.
bool has_cartan_splitting(const LieAlgebraSpec& spec, double tol = 1e-12);

/// Re-orthonormalize the rotation block of g by polar projection.
GroupElement project_to_group(const LieAlgebraSpec& spec, const GroupElement& g);

}  // namespace lpoc
