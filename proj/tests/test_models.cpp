#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lpoc/models.hpp"
#include "lpoc/solver.hpp"

using namespace lpoc;
using test_helpers::Rng;
using test_helpers::max_abs;

TEST_CASE("model construction validates its parameters") {
    HeavyTopParams bad;
    bad.inertia = Eigen::Vector3d(1, -2, 3).asDiagonal();
    CHECK_THROWS_AS(heavy_top_system(bad), ContractViolation);

    HeavyTopParams tilted;
    tilted.chi = Eigen::Vector3d(0, 0, 2);
    CHECK_THROWS_AS(heavy_top_system(tilted), ContractViolation);

    auto ht = heavy_top_system(HeavyTopParams{});
    CHECK(ht.advection == AdvectionCase::Adjoint);
    CHECK(max_abs(ht.alpha0 - Eigen::Vector3d(0, 0, 1)) == 0.0);
    CHECK_FALSE(static_cast<bool>(ht.barrier_gap));

    auto free_vehicle = unicycle_system(UnicycleParams{0.0});
    CHECK(free_vehicle.advection == AdvectionCase::Coadjoint);
    CHECK_FALSE(static_cast<bool>(free_vehicle.potential));
    CHECK_FALSE(static_cast<bool>(free_vehicle.barrier_gap));

    auto walled = unicycle_system(UnicycleParams{0.1});
    CHECK(static_cast<bool>(walled.potential));
    CHECK(static_cast<bool>(walled.barrier_gap));
}

TEST_CASE("gravity potential is invariant under spins about the offset axis") {
    auto sys = heavy_top_system(HeavyTopParams{});
    Rng rng(71);
    for (int t = 0; t < 50; ++t) {
        Eigen::Vector3d a = rng.vec3();
        GroupElement h = so3_rotation(Eigen::Vector3d(0, 0, 1), rng.scalar() * 3.0);
        double v1 = sys.potential(a);
        double v2 = sys.potential(advect_by_group(sys, h, a));
        CHECK(std::abs(v1 - v2) < 1e-12);
        // a generic rotation does move the value
        GroupElement k = so3_rotation(Eigen::Vector3d(1, 0, 0), 0.7);
        CHECK(std::abs(sys.potential(advect_by_group(sys, k, a)) - v1) > 1e-6 * std::abs(v1));
    }
}

TEST_CASE("obstacle gap measures planar distance to the unit circle") {
    auto sys = unicycle_system(UnicycleParams{0.1});
    Rng rng(72);
    for (int t = 0; t < 50; ++t) {
        double x = 2 * rng.scalar(), y = 2 * rng.scalar(), th = 3 * rng.scalar();
        Eigen::VectorXd a = advect_by_group(sys, se2_pose(x, y, th), sys.alpha0);
        CHECK(std::abs(sys.barrier_gap(a) - (x * x + y * y - 1.0)) < 1e-10);
    }
    Eigen::VectorXd a = advect_by_group(sys, se2_pose(2.0, 0.0, 0.4), sys.alpha0);
    CHECK(std::abs(sys.barrier_gap(a) - 3.0) < 1e-12);
    // heading is immaterial to the barrier
    Eigen::VectorXd b = advect_by_group(sys, se2_pose(2.0, 0.0, -1.1), sys.alpha0);
    CHECK(std::abs(sys.barrier_gap(a) - sys.barrier_gap(b)) < 1e-12);
}

TEST_CASE("vehicle potential diverges toward the rim and flattens far out") {
    auto sys = unicycle_system(UnicycleParams{0.1});
    auto at = [&](double x) {
        return sys.potential(advect_by_group(sys, se2_pose(x, 0, 0), sys.alpha0));
    };
    CHECK(at(1.1) > at(1.5));
    CHECK(at(1.5) > at(3.0));
    CHECK(at(3.0) > 0.0);
    Eigen::VectorXd rim(3);
    rim << 0.0, 1.0, 0.0;
    CHECK_THROWS_AS(sys.potential(rim), BarrierSingular);
}

TEST_CASE("planar pose helpers round trip") {
    Rng rng(73);
    for (int t = 0; t < 50; ++t) {
        double x = 3 * rng.scalar(), y = 3 * rng.scalar(), th = 3 * rng.scalar();
        Eigen::Vector3d p = se2_xytheta(se2_pose(x, y, th));
        CHECK(std::abs(p[0] - x) < 1e-12);
        CHECK(std::abs(p[1] - y) < 1e-12);
        CHECK(std::abs(std::remainder(p[2] - th, 2 * M_PI)) < 1e-12);
    }
    // axis-angle rotations are orthonormal with unit determinant
    for (int t = 0; t < 20; ++t) {
        GroupElement r = so3_rotation(rng.vec3(), 3 * rng.scalar());
        CHECK(max_abs(r.matrix * r.matrix.transpose() - Eigen::Matrix3d::Identity()) < 1e-12);
        CHECK(std::abs(r.matrix.determinant() - 1.0) < 1e-12);
    }
}

TEST_CASE("reference integrator: basic behavior") {
    SUBCASE("zero turn rate and zero multiplier keep everything constant") {
        auto path = unicycle_el_oracle(0.5, -1.0, 0.8, std::cos(0.8), std::sin(0.8), 0.0, 0.0,
                                       1.0, 1e-3);
        for (const auto& s : path) {
            CHECK(std::abs(s.u1) < 1e-14);
            CHECK(std::abs(s.u2 - 1.0) < 1e-12);
            CHECK(std::abs(s.lambda) < 1e-14);
        }
    }
    SUBCASE("multiplier rate is -u1 u2 at the start") {
        double h = 1e-3;
        auto path = unicycle_el_oracle(0, 0, 0, 1.0, 0.0, 1.0, 0.2, 10 * h, h);
        double fd = (path[1].lambda - path[0].lambda) / h;
        CHECK(std::abs(fd - (-1.0)) < 1e-3);
    }
    SUBCASE("slipping initial data is rejected") {
        CHECK_THROWS_AS(unicycle_el_oracle(0, 0, 0, 0.0, 1.0, 0.3, 0.1, 1.0, 1e-3),
                        ContractViolation);
    }
}

TEST_CASE("split flow agrees with the reference integrator") {
    auto sys = unicycle_system(UnicycleParams{0.0});
    Rng rng(74);
    const double T = 1.0;
    for (int t = 0; t < 10; ++t) {
        double u1 = rng.scalar(), u2 = rng.scalar(), lam = rng.scalar(), th = 3 * rng.scalar();
        auto oracle = unicycle_el_oracle(rng.scalar(), rng.scalar(), th, u2 * std::cos(th),
                                         u2 * std::sin(th), u1, lam, T, 1e-4);

        SplitState init;
        init.u = AlgebraVector(Eigen::Vector3d(u1, u2, 0));
        init.lambda = DualVector(Eigen::Vector3d(0, 0, lam));
        init.alpha = sys.alpha0;
        auto path = integrate_split(sys, init, T, 1e-3, 1000);
        const auto& e = path.back();
        CHECK(std::abs(e.u.coords[0] - oracle.back().u1) < 1e-6);
        CHECK(std::abs(e.u.coords[1] - oracle.back().u2) < 1e-6);
        CHECK(std::abs(e.lambda.coords[2] - oracle.back().lambda) < 1e-6);
    }
}

TEST_CASE("integrated vehicle path satisfies the rolling constraint") {
    auto sys = unicycle_system(UnicycleParams{0.1});
    FlowOptions opts;
    opts.h = 1e-3;
    GroupElement g0 = se2_pose(-3.0, 0.0, M_PI / 2);  // tangential start, clear of the rim
    Eigen::VectorXd a0 = advect_by_group(sys, g0, sys.alpha0);
    FlowResult fr = integrate_lp(sys, ReducedState{DualVector(Eigen::Vector3d(0.3, 1.0, 0.2)), a0,
                                                   0.0},
                                 g0, 2.0, opts);
    const auto& s = fr.samples;
    for (size_t k = 1; k + 1 < s.size(); k += 97) {
        Eigen::Vector3d prev = se2_xytheta(s[k - 1].g);
        Eigen::Vector3d here = se2_xytheta(s[k].g);
        Eigen::Vector3d next = se2_xytheta(s[k + 1].g);
        double xdot = (next[0] - prev[0]) / (2 * opts.h);
        double ydot = (next[1] - prev[1]) / (2 * opts.h);
        CHECK(std::abs(xdot * std::sin(here[2]) - ydot * std::cos(here[2])) < 1e-5);
    }
}

TEST_CASE("principal-axis spins are relative equilibria") {
    SUBCASE("torque-free body") {
        HeavyTopParams p;
        p.m = 0;
        auto sys = heavy_top_system(p);
        FlowOptions opts;
        opts.h = 1e-3;
        for (int axis = 0; axis < 3; ++axis) {
            DualVector mu0 = DualVector::Zero(3);
            mu0.coords[axis] = 1.3;
            FlowResult fr = integrate_lp(sys, ReducedState{mu0, sys.alpha0, 0.0},
                                         GroupElement::Identity(3), 1.0, opts);
            CHECK(max_abs(fr.samples.back().mu.coords - mu0.coords) < 1e-10);
        }
    }
    SUBCASE("sleeping top") {
        auto sys = heavy_top_system(HeavyTopParams{});
        FlowOptions opts;
        opts.h = 1e-3;
        DualVector mu0(Eigen::Vector3d(0, 0, 2.0));
        FlowResult fr = integrate_lp(sys, ReducedState{mu0, sys.alpha0, 0.0},
                                     GroupElement::Identity(3), 2.0, opts);
        CHECK(max_abs(fr.samples.back().mu.coords - mu0.coords) < 1e-9);
        CHECK(max_abs(fr.samples.back().alpha - sys.alpha0) < 1e-9);
    }
}
