#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lpoc/models.hpp"
#include "lpoc/solver.hpp"

using namespace lpoc;
using test_helpers::max_abs;

TEST_CASE("reconstruct composes step factors") {
    auto sys = unicycle_system(UnicycleParams{0.0});

    SUBCASE("empty path returns the anchor") {
        auto gs = reconstruct(sys.spec, RetractionKind::Cayley, {}, se2_pose(1, 2, 0.3), 0.1);
        REQUIRE(gs.size() == 1);
        CHECK(max_abs(gs[0].matrix - se2_pose(1, 2, 0.3).matrix) == 0.0);
    }
    SUBCASE("constant forward speed is a straight line") {
        // pure translation: the rational and true exponentials coincide
        std::vector<AlgebraVector> u(50, AlgebraVector(Eigen::Vector3d(0, 1, 0)));
        auto gs = reconstruct(sys.spec, RetractionKind::Cayley, u, GroupElement::Identity(3), 0.1);
        REQUIRE(gs.size() == 51);
        for (size_t k = 0; k < gs.size(); ++k) {
            Eigen::Vector3d p = se2_xytheta(gs[k]);
            CHECK(std::abs(p[0] - 0.1 * static_cast<double>(k)) < 1e-12);
            CHECK(std::abs(p[1]) < 1e-12);
            CHECK(std::abs(p[2]) < 1e-12);
        }
    }
    SUBCASE("constant spin matches the axis-angle rotation") {
        auto top = heavy_top_system(HeavyTopParams{});
        Eigen::Vector3d w(0.2, -0.5, 0.4);
        std::vector<AlgebraVector> u(80, AlgebraVector(w));
        auto gs =
            reconstruct(top.spec, RetractionKind::Exponential, u, GroupElement::Identity(3), 0.025);
        GroupElement expect = so3_rotation(w, 80 * 0.025 * w.norm());
        CHECK(max_abs(gs.back().matrix - expect.matrix) < 1e-10);
    }
}

TEST_CASE("damped least squares solves a small nonlinear system") {
    auto r = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(2);
        out << x[0] * x[0] - 4.0, x[0] * x[1] - 6.0;
        return out;
    };
    Eigen::VectorXd x0(2);
    x0 << 1.0, 1.0;
    LmOptions opts;
    auto res = levenberg_marquardt(r, x0, opts);
    CHECK(res.converged);
    CHECK(res.residual_norm <= opts.tol);
    CHECK(std::abs(res.x[0] - 2.0) < 1e-6);
    CHECK(std::abs(res.x[1] - 3.0) < 1e-6);
}

TEST_CASE("shooting: coincident endpoints need no motion") {
    BvpProblem p;
    p.sys = unicycle_system(UnicycleParams{0.0});
    p.g0 = se2_pose(0.5, -2.0, 0.1);
    p.gT = p.g0;
    p.T = 1.0;
    auto res = shoot(p, DualVector::Zero(3));
    CHECK(res.converged);
    CHECK(res.residual_norm <= p.tol);
    CHECK(res.initial_mu.coords.norm() < 1e-6);
}

TEST_CASE("shooting recovers a forward-generated rigid body target") {
    BvpProblem p;
    p.sys = heavy_top_system(HeavyTopParams{});
    p.g0 = GroupElement::Identity(3);
    p.T = 1.0;
    p.h = 1e-3;

    DualVector mu_true(Eigen::Vector3d(0.6, -0.3, 0.8));
    FlowOptions opts;
    opts.h = p.h;
    opts.store_every = 1000;
    Eigen::VectorXd a0 = advect_by_group(p.sys, p.g0, p.sys.alpha0);
    FlowResult fwd = integrate_lp(p.sys, ReducedState{mu_true, a0, 0.0}, p.g0, p.T, opts);
    p.gT = fwd.samples.back().g;

    DualVector guess(mu_true.coords + Eigen::Vector3d(0.15, -0.1, 0.2));
    auto res = shoot(p, guess);
    CHECK(res.converged);
    CHECK(res.residual_norm <= p.tol);
    CHECK(res.segments == 1);
    CHECK(max_abs(res.initial_mu.coords - mu_true.coords) < 1e-5);
    CHECK(max_abs(res.trajectory.back().g.matrix - p.gT.matrix) < 1e-7);
}

TEST_CASE("shooting in stepped mode reaches a nearby pose") {
    BvpProblem p;
    p.sys = unicycle_system(UnicycleParams{0.0});
    p.g0 = GroupElement::Identity(3);
    p.gT = se2_pose(1.5, 0.4, 0.3);
    p.T = 2.0;
    p.mode = BvpMode::Discrete;
    p.N = 100;
    auto res = shoot(p, default_mu0_guess(p));
    CHECK(res.converged);
    CHECK(res.residual_norm <= p.tol);
    CHECK(max_abs(res.trajectory.back().g.matrix - p.gT.matrix) < 1e-6);
}

TEST_CASE("half-turn target falls back to segmented shooting") {
    // a rotation by pi sits outside the rational chart at the endpoint, so
    // the single-shot residual cannot even be evaluated there
    HeavyTopParams hp;
    hp.m = 0;
    BvpProblem p;
    p.sys = heavy_top_system(hp);
    p.g0 = GroupElement::Identity(3);
    p.gT = so3_rotation(Eigen::Vector3d(0, 0, 1), M_PI);
    p.T = 1.0;
    p.h = 1e-3;
    auto res = shoot(p, default_mu0_guess(p));
    CHECK(res.converged);
    CHECK(res.segments > 1);
    CHECK(res.residual_norm <= p.tol);
    CHECK(max_abs(res.trajectory.back().g.matrix - p.gT.matrix) < 1e-6);
}

TEST_CASE("step-size study reports the expected orders") {
    SUBCASE("smooth integrator is fourth order") {
        auto sys = heavy_top_system(HeavyTopParams{});
        ReducedState init{DualVector(Eigen::Vector3d(0.5, -0.2, 0.7)), sys.alpha0, 0.0};
        auto rows = order_study(sys, init, GroupElement::Identity(3), 1.0, BvpMode::Continuous,
                                RetractionKind::Cayley, {0.02, 0.01, 0.005, 0.0025});
        REQUIRE(rows.size() == 4);
        CHECK(std::isnan(rows[0].order));
        for (size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].error < rows[i - 1].error);
            CHECK(rows[i].order > 3.7);
            CHECK(rows[i].order < 4.3);
        }
    }
    SUBCASE("stepped mode is at least first order") {
        auto sys = unicycle_system(UnicycleParams{0.0});
        ReducedState init{DualVector(Eigen::Vector3d(0.6, 1.0, 0.4)), sys.alpha0, 0.0};
        auto rows = order_study(sys, init, GroupElement::Identity(3), 1.0, BvpMode::Discrete,
                                RetractionKind::Cayley, {0.04, 0.02, 0.01});
        for (size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].error < rows[i - 1].error);
            CHECK(rows[i].order > 0.9);
        }
    }
    SUBCASE("repeat runs are bit-identical") {
        auto sys = heavy_top_system(HeavyTopParams{});
        ReducedState init{DualVector(Eigen::Vector3d(0.5, -0.2, 0.7)), sys.alpha0, 0.0};
        auto a = order_study(sys, init, GroupElement::Identity(3), 0.5, BvpMode::Continuous,
                             RetractionKind::Cayley, {0.02, 0.01, 0.005});
        auto b = order_study(sys, init, GroupElement::Identity(3), 0.5, BvpMode::Continuous,
                             RetractionKind::Cayley, {0.02, 0.01, 0.005});
        for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].error == b[i].error);
    }
    SUBCASE("too few step sizes are rejected") {
        auto sys = heavy_top_system(HeavyTopParams{});
        ReducedState init{DualVector::Zero(3), sys.alpha0, 0.0};
        CHECK_THROWS_AS(order_study(sys, init, GroupElement::Identity(3), 1.0,
                                    BvpMode::Continuous, RetractionKind::Cayley, {0.02, 0.01}),
                        ContractViolation);
    }
}

TEST_CASE("default initial guess points the momentum toward the target") {
    BvpProblem p;
    p.sys = unicycle_system(UnicycleParams{0.0});
    p.g0 = GroupElement::Identity(3);
    p.gT = se2_pose(2.0, 0.0, 0.0);
    p.T = 2.0;
    DualVector g = default_mu0_guess(p);
    // straight-ahead target: forward momentum 1, no turning, no multiplier
    CHECK(std::abs(g.coords[0]) < 1e-12);
    CHECK(std::abs(g.coords[1] - 1.0) < 1e-12);
    CHECK(std::abs(g.coords[2]) < 1e-12);
}
