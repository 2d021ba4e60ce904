#include "lpoc/retraction.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace lpoc {

const char* to_string(RetractionKind kind) {
    return kind == RetractionKind::Cayley ? "cayley" : "exponential";
}

RetractionKind retraction_from_string(const std::string& s) {
    if (s == "cayley" || s == "cay") return RetractionKind::Cayley;
    if (s == "exponential" || s == "exp") return RetractionKind::Exponential;
    throw ContractViolation("unknown retraction kind: " + s);
}

namespace {

Eigen::MatrixXd cayley(const LieAlgebraSpec& spec, const Eigen::MatrixXd& X) {
    const int n = spec.matrix_dim;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - 0.5 * X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible() || lu.rcond() < 1e-8)
        throw SingularRetraction("cayley: (I - X/2) numerically singular");
    return lu.solve(Eigen::MatrixXd::Identity(n, n) + 0.5 * X);
}

// dexp^{-1} series coefficients B_j / j! for x/(e^x - 1).
constexpr double kDexpInvCoeffs[] = {
    1.0,  -0.5, 1.0 / 12.0,     0.0, -1.0 / 720.0,             0.0,
    1.0 / 30240.0,              0.0, -1.0 / 1209600.0,         0.0,
    1.0 / 47900160.0,           0.0, -691.0 / 1307674368000.0, 0.0,
    7.0 / 523069747200.0,       0.0, -3617.0 / 10670622842880000.0};

}  // namespace

GroupElement tau(RetractionKind kind, const LieAlgebraSpec& spec, const AlgebraVector& x) {
    Eigen::MatrixXd X = hat(spec, x);
    switch (kind) {
        case RetractionKind::Cayley:
            return GroupElement(cayley(spec, X));
        case RetractionKind::Exponential:
            return GroupElement(X.exp());
    }
    throw ContractViolation("tau: bad kind");
}

AlgebraVector tau_inv(RetractionKind kind, const LieAlgebraSpec& spec, const GroupElement& g) {
    const int n = spec.matrix_dim;
    Eigen::MatrixXd X;
    switch (kind) {
        case RetractionKind::Cayley: {
            Eigen::MatrixXd B = g.matrix + Eigen::MatrixXd::Identity(n, n);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
            if (!lu.isInvertible() || lu.rcond() < 1e-8)
                throw OutsideInjectivityDomain("cayley inverse: (g + I) singular");
            // X = 2 (g - I)(g + I)^{-1}
            X = 2.0 * (g.matrix - Eigen::MatrixXd::Identity(n, n)) * lu.inverse();
            break;
        }
        case RetractionKind::Exponential: {
            X = g.matrix.log();
            if (!X.allFinite())
                throw OutsideInjectivityDomain("exp inverse: matrix log failed");
            break;
        }
    }
    AlgebraVector x = [&] {
        try {
            return vee(spec, X);
        } catch (const OutOfAlgebra&) {
            throw OutsideInjectivityDomain("tau_inv: log lies outside the algebra span");
        }
    }();
    double err = (tau(kind, spec, x).matrix - g.matrix).cwiseAbs().maxCoeff();
    if (err > 1e-8)
        throw OutsideInjectivityDomain("tau_inv: round-trip residual " + std::to_string(err));
    return x;
}

Eigen::MatrixXd dtau_inv_matrix(RetractionKind kind, const LieAlgebraSpec& spec,
                                const AlgebraVector& x) {
    switch (kind) {
        case RetractionKind::Cayley: {
            if (spec.group == GroupKind::SE2) return dcay_inv_se2(x.coords.head<3>());
            const int n = spec.matrix_dim;
            Eigen::MatrixXd X = hat(spec, x);
            Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - 0.5 * X;
            Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n) + 0.5 * X;
            Eigen::MatrixXd M(spec.dim, spec.dim);
            for (int i = 0; i < spec.dim; ++i) {
                AlgebraVector ei = AlgebraVector::Zero(spec.dim);
                ei.coords[i] = 1;
                M.col(i) = vee(spec, A * hat(spec, ei) * B).coords;
            }
            return M;
        }
        case RetractionKind::Exponential: {
            Eigen::MatrixXd adx = spec.ad_matrix(x);
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(spec.dim, spec.dim);
            Eigen::MatrixXd P = Eigen::MatrixXd::Identity(spec.dim, spec.dim);
            for (double c : kDexpInvCoeffs) {
                if (c != 0.0) M += c * P;
                P = adx * P;
            }
            return M;
        }
    }
    throw ContractViolation("dtau_inv_matrix: bad kind");
}

DualVector dtau_inv_star(RetractionKind kind, const LieAlgebraSpec& spec, const AlgebraVector& x,
                         const DualVector& m) {
    return DualVector(dtau_inv_matrix(kind, spec, x).transpose() * m.coords);
}

Eigen::Matrix3d dcay_inv_se2(const Eigen::Vector3d& v) {
    Eigen::Matrix3d M;
    M << 1 + v[0] * v[0] / 4, 0, 0,                       //
        v[0] * v[1] / 4 - v[2] / 2, 1, v[0] / 2,          //
        v[0] * v[2] / 4 + v[1] / 2, -v[0] / 2, 1;
    return M;
}

}  // namespace lpoc
