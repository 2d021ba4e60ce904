#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lpoc/algebra.hpp"
#include "lpoc/retraction.hpp"

namespace lpoc {

/// How the advected parameter transforms: Adjoint means X = g (the parameter
/// lives in g* and is dragged by Ad*), Coadjoint means X = g* (the parameter
/// lives in g and is dragged by Ad_{g^-1}).
enum class AdvectionCase { Adjoint, Coadjoint };

/// One reduced model: algebra tables, cost, extended potential, advection
/// rule, drift term and control subspace.  All closures act on coordinate
/// vectors; alpha is an element of g* (Adjoint) or g (Coadjoint).
struct ReducedSystem {
    LieAlgebraSpec spec;
    AlgebraVector e0;
    std::function<double(const AlgebraVector&)> cost;              ///< C(u - e0)
    std::function<DualVector(const AlgebraVector&)> cost_grad;     ///< dC/du at u - e0
    std::function<AlgebraVector(const DualVector&)> cost_hessian_inv;
    std::function<double(const Eigen::VectorXd&)> potential;       ///< V_ext at identity
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> potential_grad;
    AdvectionCase advection = AdvectionCase::Adjoint;
    Eigen::VectorXd alpha0;
    /// Distance to the barrier singular set, or unset for barrier-free
    /// models.  Trajectories refuse to start with gap < min_start_gap and
    /// abort when it falls below abort_gap.
    std::function<double(const Eigen::VectorXd&)> barrier_gap;
    double min_start_gap = 0.05;
    double abort_gap = 1e-6;
    std::string name;
};

struct ReducedState {
    DualVector mu;
    Eigen::VectorXd alpha;
    double t = 0;
};

/// Split (Cartan) coordinates: controlled velocity in k, multiplier in p*.
struct SplitState {
    AlgebraVector u;     ///< full coordinates; entries outside k equal e0
    DualVector lambda;   ///< entries outside p* are zero
    Eigen::VectorXd alpha;
    double t = 0;
};

struct EpRates {
    Eigen::VectorXd mu_dot;
    Eigen::VectorXd alpha_dot;
};

struct SplitRates {
    Eigen::VectorXd cost_grad_dot;  ///< d/dt of dC/du (k* part)
    Eigen::VectorXd lambda_dot;     ///< p* part
    Eigen::VectorXd alpha_dot;
};

/// Momentum map J_X(x, alpha): -ad*_x alpha (Adjoint) or ad*_alpha x
/// (Coadjoint).  x is in X: algebra coords (Adjoint) or dual coords
/// (Coadjoint).
DualVector momentum_map_J(const ReducedSystem& sys, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& alpha);

/// Advection rate: ad*_u alpha (Adjoint) or -[u, alpha] (Coadjoint).
Eigen::VectorXd advection_rate(const ReducedSystem& sys, const AlgebraVector& u,
                               const Eigen::VectorXd& alpha);

/// Group drag of the parameter: Ad*_g alpha (Adjoint) or Ad_{g^-1} alpha
/// (Coadjoint).
Eigen::VectorXd advect_by_group(const ReducedSystem& sys, const GroupElement& g,
                                const Eigen::VectorXd& alpha);

DualVector legendre(const ReducedSystem& sys, const AlgebraVector& u, const DualVector& lambda);
std::pair<AlgebraVector, DualVector> legendre_inv(const ReducedSystem& sys, const DualVector& mu);

EpRates ep_rhs(const ReducedSystem& sys, const ReducedState& state);
SplitRates ep_rhs_split(const ReducedSystem& sys, const SplitState& state);

double hamiltonian(const ReducedSystem& sys, const ReducedState& state);

/// One sample of an integrated reduced flow.
struct FlowSample {
    double t;
    AlgebraVector u;
    DualVector mu;
    Eigen::VectorXd alpha;
    GroupElement g;
};

struct FlowOptions {
    double h = 1e-3;
    bool with_group = true;
    RetractionKind reconstruction = RetractionKind::Exponential;  // unused; group is integrated
    int store_every = 1;      ///< keep every n-th sample (endpoints always kept)
    int projection_every = 100;
    double drift_tol = 1e-9;
};

struct FlowResult {
    std::vector<FlowSample> samples;
    int projections_triggered = 0;
};

/// Classical RK4 on the Lie-Poisson equations, optionally carrying the
/// reconstruction g' = g hat(u) in the same Runge-Kutta stages.  The group
/// factor is polar-projected back when its invariant drifts past drift_tol.
FlowResult integrate_lp(const ReducedSystem& sys, const ReducedState& initial,
                        const GroupElement& g0, double T, const FlowOptions& opts);

/// RK4 on the split Euler-Poincare form (u, lambda, alpha).
std::vector<SplitState> integrate_split(const ReducedSystem& sys, const SplitState& initial,
                                        double T, double h, int store_every = 1);

/// Throws BarrierSingular if alpha is too close to the singular set to start.
void check_barrier_start(const ReducedSystem& sys, const Eigen::VectorXd& alpha);

}  // namespace lpoc
