#include "lpoc/algebra.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace lpoc {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ContractViolation(msg);
}

void require_dim(const LieAlgebraSpec& spec, int got, const char* what) {
    if (got != spec.dim) {
        std::ostringstream os;
        os << what << ": expected dim " << spec.dim << ", got " << got;
        throw ContractViolation(os.str());
    }
}

}  // namespace

Eigen::MatrixXd LieAlgebraSpec::ad_matrix(const AlgebraVector& u) const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) A(k, j) += structure[k](i, j) * u.coords[i];
    return A;
}

LieAlgebraSpec make_so3() {
    LieAlgebraSpec s;
    s.name = "so3";
    s.group = GroupKind::SO3;
    s.dim = 3;
    s.matrix_dim = 3;
    s.basis.resize(3, Eigen::MatrixXd::Zero(3, 3));
    s.basis[0] << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    s.basis[1] << 0, 0, 1, 0, 0, 0, -1, 0, 0;
    s.basis[2] << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    s.dual_basis.resize(3);
    for (int i = 0; i < 3; ++i) s.dual_basis[i] = -0.5 * s.basis[i];
    // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2
    s.structure.assign(3, Eigen::MatrixXd::Zero(3, 3));
    s.structure[2](0, 1) = 1;
    s.structure[2](1, 0) = -1;
    s.structure[0](1, 2) = 1;
    s.structure[0](2, 1) = -1;
    s.structure[1](2, 0) = 1;
    s.structure[1](0, 2) = -1;
    s.subspace_k = {0, 1, 2};
    s.subspace_p = {};
    return s;
}

LieAlgebraSpec make_se2() {
    LieAlgebraSpec s;
    s.name = "se2";
    s.group = GroupKind::SE2;
    s.dim = 3;
    s.matrix_dim = 3;
    s.basis.assign(3, Eigen::MatrixXd::Zero(3, 3));
    s.basis[0] << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    s.basis[1] << 0, 0, 1, 0, 0, 0, 0, 0, 0;
    s.basis[2] << 0, 0, 0, 0, 0, 1, 0, 0, 0;
    s.dual_basis.assign(3, Eigen::MatrixXd::Zero(3, 3));
    s.dual_basis[0] << 0, 0.5, 0, -0.5, 0, 0, 0, 0, 0;
    s.dual_basis[1](2, 0) = 1;
    s.dual_basis[2](2, 1) = 1;
    // [e1,e2] = e3, [e2,e3] = 0, [e3,e1] = e2
    s.structure.assign(3, Eigen::MatrixXd::Zero(3, 3));
    s.structure[2](0, 1) = 1;
    s.structure[2](1, 0) = -1;
    s.structure[1](2, 0) = 1;
    s.structure[1](0, 2) = -1;
    s.subspace_k = {0, 1};
    s.subspace_p = {2};
    return s;
}

void validate(const LieAlgebraSpec& spec, double tol) {
    const int n = spec.dim;
    require(n > 0, "validate: dim must be positive");
    require(static_cast<int>(spec.basis.size()) == n, "validate: basis size mismatch");
    require(static_cast<int>(spec.dual_basis.size()) == n, "validate: dual basis size mismatch");
    require(static_cast<int>(spec.structure.size()) == n, "validate: structure tensor size mismatch");

    // Antisymmetry
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                require(std::abs(spec.structure[k](i, j) + spec.structure[k](j, i)) <= tol,
                        "validate: structure constants not antisymmetric");

    // Jacobi identity
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0;
                    for (int m = 0; m < n; ++m)
                        s += spec.structure[m](i, j) * spec.structure[l](m, k) +
                             spec.structure[m](j, k) * spec.structure[l](m, i) +
                             spec.structure[m](k, i) * spec.structure[l](m, j);
                    require(std::abs(s) <= tol, "validate: Jacobi identity fails");
                }

    // Matrix consistency: e_i e_j - e_j e_i = sum_k c^k_{ij} e_k
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Eigen::MatrixXd lhs = spec.basis[i] * spec.basis[j] - spec.basis[j] * spec.basis[i];
            for (int k = 0; k < n; ++k) lhs -= spec.structure[k](i, j) * spec.basis[k];
            require(lhs.cwiseAbs().maxCoeff() <= tol,
                    "validate: basis matrices inconsistent with structure constants");
        }

    // Dual pairing realization: tr(e^i e_j) = delta_ij
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double t = (spec.dual_basis[i] * spec.basis[j]).trace();
            require(std::abs(t - (i == j ? 1.0 : 0.0)) <= tol,
                    "validate: dual basis does not realize the trace pairing");
        }

    // Subspace partition
    std::vector<int> seen(n, 0);
    for (int i : spec.subspace_k) {
        require(i >= 0 && i < n, "validate: subspace_k index out of range");
        seen[i]++;
    }
    for (int i : spec.subspace_p) {
        require(i >= 0 && i < n, "validate: subspace_p index out of range");
        seen[i]++;
    }
    for (int i = 0; i < n; ++i)
        require(seen[i] == 1, "validate: subspace_k/subspace_p must partition the index set");
}

void check_group(const LieAlgebraSpec& spec, const GroupElement& g, double tol) {
    const Eigen::MatrixXd& m = g.matrix;
    require(m.rows() == spec.matrix_dim && m.cols() == spec.matrix_dim,
            "check_group: wrong matrix size");
    switch (spec.group) {
        case GroupKind::SO3: {
            double ortho = (m.transpose() * m - Eigen::MatrixXd::Identity(3, 3)).norm();
            require(ortho <= tol, "check_group: SO(3) element not orthogonal");
            require(std::abs(m.determinant() - 1.0) <= tol, "check_group: SO(3) determinant != 1");
            break;
        }
        case GroupKind::SE2: {
            require(std::abs(m(2, 0)) <= tol && std::abs(m(2, 1)) <= tol &&
                        std::abs(m(2, 2) - 1.0) <= tol,
                    "check_group: SE(2) bottom row must be (0,0,1)");
            Eigen::Matrix2d r = m.topLeftCorner<2, 2>();
            double ortho = (r.transpose() * r - Eigen::Matrix2d::Identity()).norm();
            require(ortho <= tol && std::abs(r.determinant() - 1.0) <= tol,
                    "check_group: SE(2) rotation block invalid");
            break;
        }
        case GroupKind::Generic:
            break;
    }
}

AlgebraVector bracket(const LieAlgebraSpec& spec, const AlgebraVector& a, const AlgebraVector& b) {
    require_dim(spec, a.dim(), "bracket lhs");
    require_dim(spec, b.dim(), "bracket rhs");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(spec.dim);
    for (int k = 0; k < spec.dim; ++k) out[k] = a.coords.dot(spec.structure[k] * b.coords);
    return AlgebraVector(out);
}

DualVector ad_star(const LieAlgebraSpec& spec, const AlgebraVector& u, const DualVector& m) {
    require_dim(spec, u.dim(), "ad_star algebra argument");
    require_dim(spec, m.dim(), "ad_star dual argument");
    // pair(ad*_u m, v) = pair(m, [u,v]) for all v, so ad*_u = (ad_u)^T on coords.
    return DualVector(spec.ad_matrix(u).transpose() * m.coords);
}

Eigen::MatrixXd hat(const LieAlgebraSpec& spec, const AlgebraVector& a) {
    require_dim(spec, a.dim(), "hat");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(spec.matrix_dim, spec.matrix_dim);
    for (int i = 0; i < spec.dim; ++i) M += a.coords[i] * spec.basis[i];
    return M;
}

Eigen::MatrixXd hat_dual(const LieAlgebraSpec& spec, const DualVector& m) {
    require_dim(spec, m.dim(), "hat_dual");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(spec.matrix_dim, spec.matrix_dim);
    for (int i = 0; i < spec.dim; ++i) M += m.coords[i] * spec.dual_basis[i];
    return M;
}

AlgebraVector vee(const LieAlgebraSpec& spec, const Eigen::MatrixXd& M) {
    const int n2 = spec.matrix_dim * spec.matrix_dim;
    Eigen::MatrixXd B(n2, spec.dim);
    for (int i = 0; i < spec.dim; ++i)
        B.col(i) = Eigen::Map<const Eigen::VectorXd>(spec.basis[i].data(), n2);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(M.data(), n2);
    Eigen::VectorXd x = B.colPivHouseholderQr().solve(v);
    double residual = (B * x - v).norm();
    if (residual > 1e-9 * std::max(1.0, v.norm()))
        throw OutOfAlgebra("vee: matrix not in the span of the basis (residual " +
                           std::to_string(residual) + ")");
    return AlgebraVector(x);
}

double pair(const DualVector& m, const AlgebraVector& x) {
    if (m.dim() != x.dim()) throw ContractViolation("pair: dimension mismatch");
    return m.coords.dot(x.coords);
}

Eigen::MatrixXd Ad_matrix(const LieAlgebraSpec& spec, const GroupElement& g) {
    Eigen::MatrixXd ginv = g.matrix.inverse();
    Eigen::MatrixXd A(spec.dim, spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
        AlgebraVector col = vee(spec, g.matrix * spec.basis[i] * ginv);
        A.col(i) = col.coords;
    }
    return A;
}

AlgebraVector Ad(const LieAlgebraSpec& spec, const GroupElement& g, const AlgebraVector& x) {
    check_group(spec, g);
    return vee(spec, g.matrix * hat(spec, x) * g.matrix.inverse());
}

DualVector Ad_star(const LieAlgebraSpec& spec, const GroupElement& g, const DualVector& m) {
    check_group(spec, g);
    // pair(Ad*_g m, x) = pair(m, Ad_g x)
    return DualVector(Ad_matrix(spec, g).transpose() * m.coords);
}

Eigen::VectorXd project_onto(const Eigen::VectorXd& v, const std::vector<int>& indices, int dim) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
    for (int i : indices) out[i] = v[i];
    return out;
}

bool has_cartan_splitting(const LieAlgebraSpec& spec, double tol) {
    auto in_span = [&](const AlgebraVector& v, const std::vector<int>& idx) {
        Eigen::VectorXd rest = v.coords - project_onto(v.coords, idx, spec.dim);
        return rest.cwiseAbs().maxCoeff() <= tol;
    };
    auto basis_vec = [&](int i) {
        AlgebraVector v = AlgebraVector::Zero(spec.dim);
        v.coords[i] = 1;
        return v;
    };
    for (int i : spec.subspace_k)
        for (int j : spec.subspace_k)
            if (!in_span(bracket(spec, basis_vec(i), basis_vec(j)), spec.subspace_p)) return false;
    for (int i : spec.subspace_p)
        for (int j : spec.subspace_k)
            if (!in_span(bracket(spec, basis_vec(i), basis_vec(j)), spec.subspace_k)) return false;
    for (int i : spec.subspace_p)
        for (int j : spec.subspace_p)
            if (!in_span(bracket(spec, basis_vec(i), basis_vec(j)), spec.subspace_p)) return false;
    return true;
}

GroupElement project_to_group(const LieAlgebraSpec& spec, const GroupElement& g) {
    Eigen::MatrixXd m = g.matrix;
    switch (spec.group) {
        case GroupKind::SO3: {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
            Eigen::MatrixXd r = svd.matrixU() * svd.matrixV().transpose();
            if (r.determinant() < 0) {
                Eigen::MatrixXd u = svd.matrixU();
                u.col(2) *= -1;
                r = u * svd.matrixV().transpose();
            }
            return GroupElement(r);
        }
        case GroupKind::SE2: {
            Eigen::Matrix2d r = m.topLeftCorner<2, 2>();
            Eigen::JacobiSVD<Eigen::Matrix2d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
            Eigen::Matrix2d rp = svd.matrixU() * svd.matrixV().transpose();
            if (rp.determinant() < 0) {
                Eigen::Matrix2d u = svd.matrixU();
                u.col(1) *= -1;
                rp = u * svd.matrixV().transpose();
            }
            m.topLeftCorner<2, 2>() = rp;
            m(2, 0) = 0;
            m(2, 1) = 0;
            m(2, 2) = 1;
            return GroupElement(m);
        }
        case GroupKind::Generic:
            return g;
    }
    return g;
}

}  // namespace lpoc
