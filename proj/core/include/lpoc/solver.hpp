#pragma once

#include <limits>
#include <vector>

#include "lpoc/discrete.hpp"
#include "lpoc/dynamics.hpp"

namespace lpoc {

enum class BvpMode { Continuous, Discrete };

struct BvpProblem {
    ReducedSystem sys;
    GroupElement g0;
    GroupElement gT;
    double T = 1.0;
    BvpMode mode = BvpMode::Continuous;
    double h = 1e-3;                ///< continuous-mode RK4 step
    int N = 100;                    ///< discrete-mode step count (h = T/N)
    RetractionKind retraction = RetractionKind::Cayley;  ///< discrete stepper + residual chart
    double tol = 1e-8;
    int max_iters = 200;
};

struct ShootResult {
    DualVector initial_mu;
    std::vector<FlowSample> trajectory;
    double residual_norm = 0;
    int iterations = 0;
    bool converged = false;
    int segments = 1;               ///< > 1 when the multiple-shooting fallback ran
    double min_barrier_gap = std::numeric_limits<double>::infinity();
};

/// Compose g_{k+1} = g_k tau(h u_k) along a sampled velocity path.
std::vector<GroupElement> reconstruct(const LieAlgebraSpec& spec, RetractionKind kind,
                                      const std::vector<AlgebraVector>& u_path,
                                      const GroupElement& g0, double h);

/// Single shooting on mu_0 with a Levenberg-Marquardt loop; falls back to
/// multiple shooting (2 then 4 segments) when the endpoint chart fails.
ShootResult shoot(const BvpProblem& problem, const DualVector& mu0_guess);

/// Default initial costate: Legendre image of the straight interpolating
/// velocity tau^{-1}(g0^{-1} gT)/T projected to k (+ e0).
DualVector default_mu0_guess(const BvpProblem& problem);

struct OrderRow {
    double h;
    double error;
    double order;  ///< NaN on the first row
};

/// Endpoint errors of the chosen mode against a reference at h_min/10,
/// with empirical orders from successive ratios.
std::vector<OrderRow> order_study(const ReducedSystem& sys, const ReducedState& initial,
                                  const GroupElement& g0, double T, BvpMode mode,
                                  RetractionKind retraction, const std::vector<double>& h_list);

/// Generic damped least squares: minimizes |r(x)| with a forward-difference
/// Jacobian.  Used by shoot; exposed for tests.
struct LmOptions {
    double tol = 1e-8;
    int max_iters = 200;
    double lambda0 = 1e-3;
    double fd_eps = 1e-6;  ///< relative step
};
struct LmResult {
    Eigen::VectorXd x;
    double residual_norm;
    int iterations;
    bool converged;
};
LmResult levenberg_marquardt(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& r,
                             const Eigen::VectorXd& x0, const LmOptions& opts);

}  // namespace lpoc
