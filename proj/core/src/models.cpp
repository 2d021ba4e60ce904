#include "lpoc/models.hpp"

#include <cmath>

namespace lpoc {

ReducedSystem heavy_top_system(const HeavyTopParams& params) {
    if (params.inertia.determinant() <= 0 ||
        (params.inertia - params.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ContractViolation("heavy_top_system: inertia must be symmetric positive definite");
    if (std::abs(params.chi.norm() - 1.0) > 1e-9)
        throw ContractViolation("heavy_top_system: chi must be a unit vector");

    ReducedSystem sys;
    sys.name = "heavytop";
    sys.spec = make_so3();
    sys.e0 = AlgebraVector::Zero(3);
    Eigen::Matrix3d I = params.inertia;
    Eigen::Matrix3d I_inv = I.inverse();
    double mgl = params.mgl();
    Eigen::Vector3d chi = params.chi;

    sys.cost = [I](const AlgebraVector& u) { return 0.5 * u.coords.dot(I * u.coords); };
    sys.cost_grad = [I](const AlgebraVector& u) { return DualVector(I * u.coords); };
    sys.cost_hessian_inv = [I_inv](const DualVector& m) {
        return AlgebraVector(I_inv * m.coords);
    };
    // V_ext(alpha) = -mgl <alpha, chi>; gradient lives in g (adjoint case).
    sys.potential = [mgl, chi](const Eigen::VectorXd& a) { return -mgl * a.dot(chi); };
    sys.potential_grad = [mgl, chi](const Eigen::VectorXd&) -> Eigen::VectorXd {
        return -mgl * chi;
    };
    sys.advection = AdvectionCase::Adjoint;
    sys.alpha0 = Eigen::Vector3d(0, 0, 1);  // spatial vertical
    return sys;
}

ReducedSystem unicycle_system(const UnicycleParams& params) {
    if (params.kappa < 0) throw ContractViolation("unicycle_system: kappa must be >= 0");

    ReducedSystem sys;
    sys.name = "unicycle";
    sys.spec = make_se2();
    sys.e0 = AlgebraVector::Zero(3);
    // C(u) = (u1)^2 + (u2)^2/2 (+ (u3)^2/2 off the control subspace), the
    // coordinate form of the half trace norm on se(2).
    Eigen::Vector3d H(2, 1, 1);
    sys.cost = [H](const AlgebraVector& u) { return 0.5 * u.coords.dot(H.asDiagonal() * u.coords); };
    sys.cost_grad = [H](const AlgebraVector& u) {
        return DualVector(H.asDiagonal() * u.coords);
    };
    sys.cost_hessian_inv = [H](const DualVector& m) {
        return AlgebraVector(H.cwiseInverse().asDiagonal() * m.coords);
    };
    sys.advection = AdvectionCase::Coadjoint;
    sys.alpha0 = Eigen::Vector3d(1, 0, 0);  // e1

    const double kappa = params.kappa;
    if (kappa > 0) {
        // On the alpha0 = e1 orbit the gap equals x^2 + y^2 - 1.
        auto gap = [](const Eigen::VectorXd& a) { return a[1] * a[1] + a[2] * a[2] - 1.0; };
        sys.barrier_gap = gap;
        sys.potential = [kappa, gap](const Eigen::VectorXd& a) {
            double gp = gap(a);
            if (std::abs(gp) < 1e-12) throw BarrierSingular("unicycle potential: gap = 0");
            return kappa / (2.0 * gp);
        };
        sys.potential_grad = [kappa, gap](const Eigen::VectorXd& a) -> Eigen::VectorXd {
            double gp = gap(a);
            if (std::abs(gp) < 1e-12) throw BarrierSingular("unicycle potential: gap = 0");
            Eigen::Vector3d g(0, a[1], a[2]);
            return (-kappa / (gp * gp)) * g;
        };
    }
    return sys;
}

std::vector<ElSample> unicycle_el_oracle(double x, double y, double theta, double xdot,
                                         double ydot, double thetadot, double lambda0, double T,
                                         double h) {
    (void)x;
    (void)y;
    if (std::abs(xdot * std::sin(theta) - ydot * std::cos(theta)) > 1e-10)
        throw ContractViolation("unicycle_el_oracle: rolling constraint violated at t = 0");
    Eigen::Vector3d s(thetadot, xdot * std::cos(theta) + ydot * std::sin(theta), lambda0);

    auto rhs = [](const Eigen::Vector3d& v) {
        return Eigen::Vector3d(-v[1] * v[2] / 2.0, v[0] * v[2], -v[0] * v[1]);
    };

    const long steps = std::lround(T / h);
    const double hh = T / static_cast<double>(steps);
    std::vector<ElSample> out;
    out.reserve(steps + 1);
    out.push_back(ElSample{0.0, s[0], s[1], s[2]});
    for (long k = 0; k < steps; ++k) {
        Eigen::Vector3d k1 = rhs(s);
        Eigen::Vector3d k2 = rhs(s + 0.5 * hh * k1);
        Eigen::Vector3d k3 = rhs(s + 0.5 * hh * k2);
        Eigen::Vector3d k4 = rhs(s + hh * k3);
        s += (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(ElSample{(k + 1) * hh, s[0], s[1], s[2]});
    }
    return out;
}

GroupElement se2_pose(double x, double y, double theta) {
    Eigen::Matrix3d m;
    m << std::cos(theta), -std::sin(theta), x,  //
        std::sin(theta), std::cos(theta), y,    //
        0, 0, 1;
    return GroupElement(m);
}

Eigen::Vector3d se2_xytheta(const GroupElement& g) {
    return Eigen::Vector3d(g.matrix(0, 2), g.matrix(1, 2),
                           std::atan2(g.matrix(1, 0), g.matrix(0, 0)));
}

GroupElement so3_rotation(const Eigen::Vector3d& axis, double angle) {
    Eigen::Vector3d n = axis.normalized();
    Eigen::Matrix3d K;
    K << 0, -n[2], n[1], n[2], 0, -n[0], -n[1], n[0], 0;
    Eigen::Matrix3d R = Eigen::Matrix3d::Identity() + std::sin(angle) * K +
                        (1.0 - std::cos(angle)) * K * K;
    return GroupElement(R);
}

}  // namespace lpoc
