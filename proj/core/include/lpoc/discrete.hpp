#pragma once

#include <vector>

#include "lpoc/dynamics.hpp"

namespace lpoc {

struct DiscreteState {
    int k = 0;
    AlgebraVector u;      ///< velocity over [t_k, t_{k+1}]; p-part pinned to e0
    DualVector mu;        ///< (1/h) dC_d/du at u_k on k*, multiplier on p*
    Eigen::VectorXd alpha;
    GroupElement g;       ///< configuration at t_k
};

struct StepperConfig {
    double h = 1e-2;
    RetractionKind retraction = RetractionKind::Cayley;
    double newton_tol = 1e-10;
    int newton_max_iters = 50;
    bool with_group = true;
};

/// Advances the implicit discrete momentum equation one step: solves
///   (dtau^{-1}_{h u_k})* mu_k = (dtau^{-1}_{-h u_{k-1}})* mu_{k-1} + J(dV/dalpha_k, alpha_k)
/// for the step unknowns (u_k on k, lambda_k on p*) by damped Newton (warm
/// start from the previous step, forward-difference Jacobian), then updates
/// alpha and the group factor.  prev.alpha is alpha_{k-1}; the parameter
/// seen by the potential is alpha_k = rho*_{tau(h u_{k-1})}(alpha_{k-1}).
DiscreteState discrete_step(const ReducedSystem& sys, const StepperConfig& cfg,
                            const DiscreteState& prev);

/// Residual of the discrete momentum equation at the trial unknowns w
/// (velocity coordinates on k, multiplier coordinates on p), given the
/// transported previous momentum and the current parameter.  Exposed for the
/// printed-matrix cross checks.
Eigen::VectorXd discrete_residual(const ReducedSystem& sys, const StepperConfig& cfg,
                                  const Eigen::VectorXd& w, const Eigen::VectorXd& rhs_prev,
                                  const Eigen::VectorXd& alpha_k);

/// N steps from (mu_0, alpha_bar_0, g_0); returns N+1 states.  alpha_bar_0
/// is the already-advected initial parameter rho*_{g_0}(alpha_0).
std::vector<DiscreteState> discrete_trajectory(const ReducedSystem& sys, const StepperConfig& cfg,
                                               const DualVector& mu0,
                                               const Eigen::VectorXd& alpha_bar0,
                                               const GroupElement& g0, int N);

/// Discrete Noether candidate Ad*_{g_k^{-1}} (dtau^{-1}_{h u_k})* mu_k,
/// constant in k when the potential vanishes.
DualVector transported_momentum(const ReducedSystem& sys, const StepperConfig& cfg,
                                const DiscreteState& s);

}  // namespace lpoc
