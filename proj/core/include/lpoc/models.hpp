#pragma once

#include <vector>

#include "lpoc/dynamics.hpp"

namespace lpoc {

struct HeavyTopParams {
    Eigen::Matrix3d inertia = Eigen::Vector3d(1, 2, 3).asDiagonal();
    double m = 1.0;   ///< kg
    double g = 1.0;   ///< m/s^2
    double l = 1.0;   ///< m
    Eigen::Vector3d chi = Eigen::Vector3d(0, 0, 1);  ///< body-frame offset direction, unit
    double mgl() const { return m * g * l; }
};

struct UnicycleParams {
    double kappa = 0.1;  ///< barrier weight; 0 disables the obstacle term
};

/// Heavy top on SO(3): quadratic inertia cost, gravity potential linear in
/// the advected vertical direction, adjoint advection.
ReducedSystem heavy_top_system(const HeavyTopParams& params);

/// Unicycle on SE(2): controls (u1, u2) = (turn rate, forward speed), unit
/// circular obstacle at the origin via the barrier kappa / (2 (x^2+y^2-1)),
/// coadjoint advection with alpha0 = e1.
ReducedSystem unicycle_system(const UnicycleParams& params);

struct ElSample {
    double t;
    double u1;
    double u2;
    double lambda;
};

/// Reduced Euler-Lagrange system for the obstacle-free unicycle,
///   u1' = -u2 lambda / 2,  u2' = u1 lambda,  lambda' = -u1 u2,
/// integrated by RK4 from pose/velocity data.  The initial velocities must
/// satisfy the rolling constraint xdot sin(theta) = ydot cos(theta).
std::vector<ElSample> unicycle_el_oracle(double x, double y, double theta, double xdot,
                                         double ydot, double thetadot, double lambda0, double T,
                                         double h);

GroupElement se2_pose(double x, double y, double theta);
/// Returns (x, y, theta).
Eigen::Vector3d se2_xytheta(const GroupElement& g);

/// Rodrigues rotation about a (not necessarily unit) axis.
GroupElement so3_rotation(const Eigen::Vector3d& axis, double angle);

}  // namespace lpoc
