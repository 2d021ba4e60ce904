#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "lpoc/models.hpp"
#include "lpoc/retraction.hpp"

using namespace lpoc;
using test_helpers::Rng;
using test_helpers::max_abs;

namespace {
const RetractionKind kKinds[] = {RetractionKind::Cayley, RetractionKind::Exponential};
}

TEST_CASE("tau basics") {
    Rng rng(21);
    for (const auto& spec : {make_so3(), make_se2()}) {
        for (auto kind : kKinds) {
            CHECK(max_abs(tau(kind, spec, AlgebraVector::Zero(3)).matrix -
                          Eigen::Matrix3d::Identity()) < 1e-15);
            for (int t = 0; t < 50; ++t) {
                Eigen::Vector3d x = rng.vec3();
                if (x.norm() > 1.0) x /= x.norm();
                GroupElement fwd = tau(kind, spec, AlgebraVector(x));
                GroupElement bwd = tau(kind, spec, AlgebraVector(-x));
                CHECK(max_abs(fwd.matrix * bwd.matrix - Eigen::Matrix3d::Identity()) < 1e-10);
                CHECK_NOTHROW(check_group(spec, fwd));
            }
        }
    }
}

TEST_CASE("exponential on so(3) matches the Rodrigues formula") {
    auto so3 = make_so3();
    GroupElement g =
        tau(RetractionKind::Exponential, so3, AlgebraVector(Eigen::Vector3d(0, 0, M_PI / 2)));
    Eigen::Matrix3d expect;
    expect << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    CHECK(max_abs(g.matrix - expect) < 1e-12);

    Rng rng(22);
    for (int t = 0; t < 20; ++t) {
        Eigen::Vector3d x = rng.vec3();
        GroupElement got = tau(RetractionKind::Exponential, so3, AlgebraVector(x));
        GroupElement oracle = so3_rotation(x, x.norm());
        CHECK(max_abs(got.matrix - oracle.matrix) < 1e-12);
    }
}

TEST_CASE("tau_inv round trips") {
    Rng rng(23);
    for (const auto& spec : {make_so3(), make_se2()}) {
        for (auto kind : kKinds) {
            CHECK(tau_inv(kind, spec, GroupElement::Identity(3)).coords.norm() < 1e-12);
            for (int t = 0; t < 50; ++t) {
                Eigen::Vector3d x = 0.5 * rng.vec3();
                AlgebraVector back = tau_inv(kind, spec, tau(kind, spec, AlgebraVector(x)));
                CHECK(max_abs(back.coords - x) < 1e-9);
            }
        }
    }
}

TEST_CASE("cayley inverse agrees with X = 2(g - I)(g + I)^{-1}") {
    Rng rng(24);
    for (const auto& spec : {make_so3(), make_se2()}) {
        for (int t = 0; t < 20; ++t) {
            Eigen::Vector3d x = 0.8 * rng.vec3();
            GroupElement g = tau(RetractionKind::Cayley, spec, AlgebraVector(x));
            Eigen::Matrix3d X = 2.0 * (g.matrix - Eigen::Matrix3d::Identity()) *
                                (g.matrix + Eigen::Matrix3d::Identity()).inverse();
            CHECK(max_abs(tau_inv(RetractionKind::Cayley, spec, g).coords -
                          vee(spec, X).coords) < 1e-10);
        }
    }
}

TEST_CASE("tau_inv rejects group elements outside the chart") {
    auto so3 = make_so3();
    GroupElement flip = so3_rotation(Eigen::Vector3d(0, 0, 1), M_PI);
    CHECK_THROWS_AS(tau_inv(RetractionKind::Cayley, so3, flip), OutsideInjectivityDomain);
}

TEST_CASE("dcay_inv matrix on se(2) matches the printed form") {
    auto se2 = make_se2();
    // evaluated at v = (2, 0, 0)
    Eigen::Matrix3d expect;
    expect << 2, 0, 0, 0, 1, 1, 0, -1, 1;
    CHECK(max_abs(dtau_inv_matrix(RetractionKind::Cayley, se2,
                                  AlgebraVector(Eigen::Vector3d(2, 0, 0))) -
                  expect) < 1e-14);

    // symbolic form at random v, both the fast path and the generic route
    Rng rng(25);
    for (int t = 0; t < 20; ++t) {
        Eigen::Vector3d v = 2.0 * rng.vec3();
        Eigen::Matrix3d P;
        P << 1 + v[0] * v[0] / 4, 0, 0,                    //
            v[0] * v[1] / 4 - v[2] / 2, 1, v[0] / 2,       //
            v[0] * v[2] / 4 + v[1] / 2, -v[0] / 2, 1;
        CHECK(max_abs(dtau_inv_matrix(RetractionKind::Cayley, se2, AlgebraVector(v)) - P) < 1e-12);
        CHECK(max_abs(dcay_inv_se2(v) - P) < 1e-15);

        // generic linear-solve construction, bypassing the fast path: columns
        // vee((I - X/2) hat(e_i) (I + X/2))
        Eigen::Matrix3d X = hat(se2, AlgebraVector(v));
        Eigen::Matrix3d A = Eigen::Matrix3d::Identity() - 0.5 * X;
        Eigen::Matrix3d B = Eigen::Matrix3d::Identity() + 0.5 * X;
        for (int i = 0; i < 3; ++i) {
            AlgebraVector ei = AlgebraVector::Zero(3);
            ei.coords[i] = 1;
            Eigen::Vector3d col = vee(se2, A * hat(se2, ei) * B).coords;
            CHECK(max_abs(col - P.col(i)) < 1e-12);
        }
    }
}

TEST_CASE("dtau_inv_star basics") {
    Rng rng(26);
    for (const auto& spec : {make_so3(), make_se2()}) {
        for (auto kind : kKinds) {
            DualVector m(rng.vec3());
            CHECK(max_abs(dtau_inv_star(kind, spec, AlgebraVector::Zero(3), m).coords - m.coords) <
                  1e-14);
        }
    }
}

TEST_CASE("printed discrete star matrices on se(2)") {
    auto se2 = make_se2();
    Rng rng(27);
    for (int t = 0; t < 20; ++t) {
        double h = 0.05 + 0.3 * std::abs(rng.scalar());
        double u1 = rng.scalar(), u2 = rng.scalar();
        Eigen::Vector3d hu(h * u1, h * u2, 0);
        // mu = dC/du with the half-trace-norm cost
        DualVector mu(Eigen::Vector3d(2 * u1, u2, 0));

        // +h u: printed [dcay^{-1}_{hu}]* mu
        Eigen::Matrix3d P = dcay_inv_se2(hu).transpose() * hat_dual(se2, mu);
        CHECK(std::abs(P(0, 0) - (-h * h * u1 * u1 * u2 / 4 + h * u2 * u2 / 2)) < 1e-12);
        CHECK(std::abs(P(0, 1) - (u1 + h * h * u1 * u1 * u1 / 4)) < 1e-12);
        CHECK(std::abs(P(1, 0) - (-u1 - h * u1 * u2 / 2)) < 1e-12);
        CHECK(std::abs(P(2, 0) - (-h * u1 * u1 / 2 + u2)) < 1e-12);
        CHECK(std::abs(P(1, 1)) + std::abs(P(2, 1)) + P.col(2).cwiseAbs().sum() < 1e-12);

        // -h u: printed [dcay^{-1}_{-hu}]* mu
        Eigen::Matrix3d Q = dcay_inv_se2(-hu).transpose() * hat_dual(se2, mu);
        CHECK(std::abs(Q(0, 0) - (-h * h * u1 * u1 * u2 / 4 - h * u2 * u2 / 2)) < 1e-12);
        CHECK(std::abs(Q(0, 1) - (u1 + h * h * u1 * u1 * u1 / 4)) < 1e-12);
        CHECK(std::abs(Q(1, 0) - (-u1 + h * u1 * u2 / 2)) < 1e-12);
        CHECK(std::abs(Q(2, 0) - (h * u1 * u1 / 2 + u2)) < 1e-12);

        // the coordinate operation is the transpose action in the same frame
        Eigen::Vector3d star = dtau_inv_star(RetractionKind::Cayley, se2, AlgebraVector(hu), mu)
                                   .coords;
        CHECK(max_abs(star - dcay_inv_se2(hu).transpose() * mu.coords) < 1e-14);
    }
}

TEST_CASE("transport identity for dtau_inv_star") {
    // (dtau^{-1}_{-x})* m = Ad*_{tau(x)} (dtau^{-1}_x)* m
    Rng rng(28);
    for (const auto& spec : {make_so3(), make_se2()}) {
        for (auto kind : kKinds) {
            for (int t = 0; t < 100; ++t) {
                Eigen::Vector3d x = 0.9 * rng.vec3();
                DualVector m(rng.vec3());
                DualVector lhs = dtau_inv_star(kind, spec, AlgebraVector(-x), m);
                DualVector rhs = Ad_star(spec, tau(kind, spec, AlgebraVector(x)),
                                         dtau_inv_star(kind, spec, AlgebraVector(x), m));
                CHECK(max_abs(lhs.coords - rhs.coords) < 1e-10);
            }
        }
    }
}

TEST_CASE("dtau_inv inverts the finite-difference tangent of tau") {
    // central-difference d/de tau(x + e delta) tau(x)^{-1} pulled to coords
    Rng rng(29);
    const double eps = 1e-5;
    for (const auto& spec : {make_so3(), make_se2()}) {
        for (auto kind : kKinds) {
            for (int t = 0; t < 10; ++t) {
                Eigen::Vector3d x = 0.7 * rng.vec3();
                Eigen::Matrix3d Dtau;
                for (int j = 0; j < 3; ++j) {
                    Eigen::Vector3d xp = x, xm = x;
                    xp[j] += eps;
                    xm[j] -= eps;
                    Eigen::Matrix3d diff =
                        (tau(kind, spec, AlgebraVector(xp)).matrix -
                         tau(kind, spec, AlgebraVector(xm)).matrix) /
                        (2 * eps);
                    // right-trivialized form: w = vee(dg g^{-1}), i.e.
                    // d/dt tau(x) = hat(w) tau(x)
                    Eigen::Matrix3d spatial =
                        diff * tau(kind, spec, AlgebraVector(x)).matrix.inverse();
                    Dtau.col(j) = vee(spec, spatial).coords;
                }
                Eigen::Matrix3d Dinv = dtau_inv_matrix(kind, spec, AlgebraVector(x));
                CHECK(max_abs(Dinv * Dtau - Eigen::Matrix3d::Identity()) < 1e-6);
            }
        }
    }
}

TEST_CASE("exponential and cayley agree to third order") {
    Rng rng(30);
    for (const auto& spec : {make_so3(), make_se2()}) {
        Eigen::Vector3d x = rng.vec3();
        double prev = -1;
        for (int halvings = 0; halvings < 4; ++halvings) {
            Eigen::Vector3d xs = x / std::pow(2.0, halvings);
            double diff = max_abs(tau(RetractionKind::Exponential, spec, AlgebraVector(xs)).matrix -
                                  tau(RetractionKind::Cayley, spec, AlgebraVector(xs)).matrix);
            if (prev > 0) {
                double ratio = prev / diff;
                CHECK(ratio > 6.0);
                CHECK(ratio < 10.0);
            }
            prev = diff;
        }
    }
}
