#include "lpoc/discrete.hpp"

#include <cmath>

namespace lpoc {

namespace {

// Step unknowns w pack the controlled velocity on k and the multiplier on p.
AlgebraVector unpack_u(const ReducedSystem& sys, const Eigen::VectorXd& w) {
    return AlgebraVector(project_onto(w, sys.spec.subspace_k, sys.spec.dim) +
                         project_onto(sys.e0.coords, sys.spec.subspace_p, sys.spec.dim));
}

DualVector unpack_mu(const ReducedSystem& sys, const Eigen::VectorXd& w) {
    AlgebraVector u = unpack_u(sys, w);
    return legendre(sys, u, DualVector(project_onto(w, sys.spec.subspace_p, sys.spec.dim)));
}

Eigen::VectorXd pack(const ReducedSystem& sys, const AlgebraVector& u, const DualVector& mu) {
    return project_onto(u.coords, sys.spec.subspace_k, sys.spec.dim) +
           project_onto(mu.coords, sys.spec.subspace_p, sys.spec.dim);
}

}  // namespace

Eigen::VectorXd discrete_residual(const ReducedSystem& sys, const StepperConfig& cfg,
                                  const Eigen::VectorXd& w, const Eigen::VectorXd& rhs_prev,
                                  const Eigen::VectorXd& alpha_k) {
    AlgebraVector u = unpack_u(sys, w);
    DualVector mu = unpack_mu(sys, w);
    DualVector lhs = dtau_inv_star(cfg.retraction, sys.spec, AlgebraVector(cfg.h * u.coords), mu);
    Eigen::VectorXd r = lhs.coords - rhs_prev;
    if (sys.potential_grad)
        r -= cfg.h * momentum_map_J(sys, sys.potential_grad(alpha_k), alpha_k).coords;
    return r;
}

DiscreteState discrete_step(const ReducedSystem& sys, const StepperConfig& cfg,
                            const DiscreteState& prev) {
    const int dim = sys.spec.dim;
    if (sys.barrier_gap && sys.barrier_gap(prev.alpha) < sys.abort_gap)
        throw BarrierSingular("discrete_step: barrier gap collapsed");

    GroupElement step_prev = tau(cfg.retraction, sys.spec, AlgebraVector(cfg.h * prev.u.coords));
    Eigen::VectorXd alpha_k = advect_by_group(sys, step_prev, prev.alpha);

    Eigen::VectorXd rhs_prev =
        dtau_inv_star(cfg.retraction, sys.spec, AlgebraVector(-cfg.h * prev.u.coords), prev.mu)
            .coords;

    Eigen::VectorXd w = pack(sys, prev.u, prev.mu);  // warm start
    Eigen::VectorXd r = discrete_residual(sys, cfg, w, rhs_prev, alpha_k);
    int it = 0;
    for (; it < cfg.newton_max_iters && r.norm() > cfg.newton_tol; ++it) {
        const double eps = 1e-7;
        Eigen::MatrixXd J(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Eigen::VectorXd wp = w;
            wp[j] += eps;
            J.col(j) = (discrete_residual(sys, cfg, wp, rhs_prev, alpha_k) - r) / eps;
        }
        Eigen::VectorXd delta = J.fullPivLu().solve(-r);
        if (!delta.allFinite()) throw NewtonDivergence("discrete_step: singular Jacobian");

        double t = 1.0;
        Eigen::VectorXd w_try, r_try;
        bool accepted = false;
        for (int half = 0; half < 30; ++half) {
            w_try = w + t * delta;
            r_try = discrete_residual(sys, cfg, w_try, rhs_prev, alpha_k);
            if (r_try.norm() < r.norm()) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) throw NewtonDivergence("discrete_step: damping stalled");
        w = w_try;
        r = r_try;
    }
    if (r.norm() > cfg.newton_tol)
        throw NewtonDivergence("discrete_step: residual " + std::to_string(r.norm()) + " after " +
                               std::to_string(it) + " iterations");

    DiscreteState next;
    next.k = prev.k + 1;
    next.u = unpack_u(sys, w);
    next.mu = unpack_mu(sys, w);
    next.alpha = alpha_k;
    if (cfg.with_group) next.g = prev.g * step_prev;
    return next;
}

std::vector<DiscreteState> discrete_trajectory(const ReducedSystem& sys, const StepperConfig& cfg,
                                               const DualVector& mu0,
                                               const Eigen::VectorXd& alpha_bar0,
                                               const GroupElement& g0, int N) {
    if (N < 1) throw ContractViolation("discrete_trajectory: N must be >= 1");
    check_barrier_start(sys, alpha_bar0);
    std::vector<DiscreteState> out;
    out.reserve(N + 1);
    DiscreteState s;
    s.k = 0;
    auto [u0, lambda0] = legendre_inv(sys, mu0);
    s.u = u0;
    s.mu = legendre(sys, u0, lambda0);
    s.alpha = alpha_bar0;
    s.g = g0;
    out.push_back(s);
    for (int k = 0; k < N; ++k) out.push_back(discrete_step(sys, cfg, out.back()));
    return out;
}

DualVector transported_momentum(const ReducedSystem& sys, const StepperConfig& cfg,
                                const DiscreteState& s) {
    DualVector m =
        dtau_inv_star(cfg.retraction, sys.spec, AlgebraVector(cfg.h * s.u.coords), s.mu);
    return Ad_star(sys.spec, s.g.inverse(), m);
}

}  // namespace lpoc
