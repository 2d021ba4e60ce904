#pragma once

#include <random>

#include <Eigen/Dense>

namespace test_helpers {

// Deterministic sampling for the property checks; entries in [-1, 1].
struct Rng {
    std::mt19937_64 gen;
    std::uniform_real_distribution<double> dist{-1.0, 1.0};

    explicit Rng(unsigned long long seed) : gen(seed) {}

    double scalar() { return dist(gen); }
    Eigen::VectorXd vec(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = dist(gen);
        return v;
    }
    Eigen::Vector3d vec3() { return vec(3); }
};

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace test_helpers
