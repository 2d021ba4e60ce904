#include "lpoc/dynamics.hpp"

#include <cmath>

namespace lpoc {

namespace {

Eigen::VectorXd project_k(const ReducedSystem& sys, const Eigen::VectorXd& v) {
    return project_onto(v, sys.spec.subspace_k, sys.spec.dim);
}

Eigen::VectorXd project_p(const ReducedSystem& sys, const Eigen::VectorXd& v) {
    return project_onto(v, sys.spec.subspace_p, sys.spec.dim);
}

double group_drift(const LieAlgebraSpec& spec, const GroupElement& g) {
    if (spec.group == GroupKind::SO3) {
        return (g.matrix.transpose() * g.matrix - Eigen::Matrix3d::Identity())
            .cwiseAbs()
            .maxCoeff();
    }
    if (spec.group == GroupKind::SE2) {
        Eigen::Matrix2d R = g.matrix.topLeftCorner<2, 2>();
        double d = (R.transpose() * R - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
        d = std::max(d, std::abs(g.matrix(2, 0)));
        d = std::max(d, std::abs(g.matrix(2, 1)));
        d = std::max(d, std::abs(g.matrix(2, 2) - 1.0));
        return d;
    }
    return 0.0;
}

}  // namespace

DualVector momentum_map_J(const ReducedSystem& sys, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& alpha) {
    if (sys.advection == AdvectionCase::Adjoint) {
        // x in g, alpha in g*: J = -ad*_x alpha
        DualVector j = ad_star(sys.spec, AlgebraVector(x), DualVector(alpha));
        return DualVector(-j.coords);
    }
    // x in g*, alpha in g: J = ad*_alpha x
    return ad_star(sys.spec, AlgebraVector(alpha), DualVector(x));
}

Eigen::VectorXd advection_rate(const ReducedSystem& sys, const AlgebraVector& u,
                               const Eigen::VectorXd& alpha) {
    if (sys.advection == AdvectionCase::Adjoint)
        return ad_star(sys.spec, u, DualVector(alpha)).coords;
    return -bracket(sys.spec, u, AlgebraVector(alpha)).coords;
}

Eigen::VectorXd advect_by_group(const ReducedSystem& sys, const GroupElement& g,
                                const Eigen::VectorXd& alpha) {
    if (sys.advection == AdvectionCase::Adjoint)
        return Ad_star(sys.spec, g, DualVector(alpha)).coords;
    return Ad(sys.spec, g.inverse(), AlgebraVector(alpha)).coords;
}

DualVector legendre(const ReducedSystem& sys, const AlgebraVector& u, const DualVector& lambda) {
    Eigen::VectorXd cg = sys.cost_grad(u).coords;
    return DualVector(project_k(sys, cg) + project_p(sys, lambda.coords));
}

std::pair<AlgebraVector, DualVector> legendre_inv(const ReducedSystem& sys, const DualVector& mu) {
    if (!sys.cost_hessian_inv) throw LegendreSingular("legendre_inv: no hessian inverse");
    Eigen::VectorXd uk = sys.cost_hessian_inv(DualVector(project_k(sys, mu.coords))).coords;
    if (!uk.allFinite()) throw LegendreSingular("legendre_inv: non-finite velocity");
    AlgebraVector u(project_k(sys, uk) + project_p(sys, sys.e0.coords));
    DualVector lambda(project_p(sys, mu.coords));
    return {u, lambda};
}

EpRates ep_rhs(const ReducedSystem& sys, const ReducedState& state) {
    auto [u, lambda] = legendre_inv(sys, state.mu);
    EpRates r;
    r.mu_dot = ad_star(sys.spec, u, state.mu).coords;
    if (sys.potential_grad)
        r.mu_dot += momentum_map_J(sys, sys.potential_grad(state.alpha), state.alpha).coords;
    r.alpha_dot = advection_rate(sys, u, state.alpha);
    return r;
}

SplitRates ep_rhs_split(const ReducedSystem& sys, const SplitState& state) {
    if (!has_cartan_splitting(sys.spec))
        throw SplittingViolated("ep_rhs_split: k/p is not a Cartan-type splitting");
    DualVector cg = sys.cost_grad(state.u);
    AlgebraVector du(state.u.coords - sys.e0.coords);
    Eigen::VectorXd j = Eigen::VectorXd::Zero(sys.spec.dim);
    if (sys.potential_grad)
        j = momentum_map_J(sys, sys.potential_grad(state.alpha), state.alpha).coords;

    SplitRates r;
    r.cost_grad_dot = project_k(
        sys, ad_star(sys.spec, sys.e0, cg).coords +
                 ad_star(sys.spec, du, state.lambda).coords + j);
    r.lambda_dot = project_p(
        sys, ad_star(sys.spec, sys.e0, state.lambda).coords +
                 ad_star(sys.spec, du, cg).coords + j);
    r.alpha_dot = advection_rate(sys, state.u, state.alpha);
    return r;
}

double hamiltonian(const ReducedSystem& sys, const ReducedState& state) {
    if (sys.barrier_gap) {
        double gap = sys.barrier_gap(state.alpha);
        if (std::abs(gap) < 1e-12) throw BarrierSingular("hamiltonian: on the singular set");
    }
    auto [u, lambda] = legendre_inv(sys, state.mu);
    AlgebraVector du(u.coords - sys.e0.coords);
    double h = pair(state.mu, u) - sys.cost(du);
    if (sys.potential) h -= sys.potential(state.alpha);
    return h;
}

void check_barrier_start(const ReducedSystem& sys, const Eigen::VectorXd& alpha) {
    if (!sys.barrier_gap) return;
    if (sys.barrier_gap(alpha) < sys.min_start_gap)
        throw BarrierSingular("initial parameter too close to the singular set");
}

FlowResult integrate_lp(const ReducedSystem& sys, const ReducedState& initial,
                        const GroupElement& g0, double T, const FlowOptions& opts) {
    const int dim = sys.spec.dim;
    const int n = sys.spec.matrix_dim;
    check_barrier_start(sys, initial.alpha);

    // Packed state y = (mu, alpha, vec(g)); group carried through the same
    // RK4 stages as g' = g hat(u).
    const int gsz = opts.with_group ? n * n : 0;
    Eigen::VectorXd y(2 * dim + gsz);
    y.head(dim) = initial.mu.coords;
    y.segment(dim, dim) = initial.alpha;
    if (opts.with_group) y.tail(gsz) = Eigen::Map<const Eigen::VectorXd>(g0.matrix.data(), gsz);

    auto rhs = [&](const Eigen::VectorXd& s) {
        ReducedState st{DualVector(s.head(dim)), s.segment(dim, dim), 0.0};
        if (sys.barrier_gap && sys.barrier_gap(st.alpha) < sys.abort_gap)
            throw BarrierSingular("integrate_lp: barrier gap collapsed");
        EpRates r = ep_rhs(sys, st);
        Eigen::VectorXd dy(s.size());
        dy.head(dim) = r.mu_dot;
        dy.segment(dim, dim) = r.alpha_dot;
        if (opts.with_group) {
            Eigen::Map<const Eigen::MatrixXd> g(s.tail(gsz).data(), n, n);
            auto [u, lambda] = legendre_inv(sys, st.mu);
            Eigen::MatrixXd gdot = g * hat(sys.spec, u);
            dy.tail(gsz) = Eigen::Map<const Eigen::VectorXd>(gdot.data(), gsz);
        }
        return dy;
    };

    const long steps = std::lround(T / opts.h);
    const double h = T / static_cast<double>(steps);

    FlowResult out;
    auto record = [&](long k) {
        FlowSample s;
        s.t = k * h;
        s.mu = DualVector(y.head(dim));
        s.alpha = y.segment(dim, dim);
        s.u = legendre_inv(sys, s.mu).first;
        if (opts.with_group)
            s.g = GroupElement(Eigen::Map<const Eigen::MatrixXd>(y.tail(gsz).data(), n, n));
        out.samples.push_back(std::move(s));
    };
    record(0);

    for (long k = 0; k < steps; ++k) {
        Eigen::VectorXd k1 = rhs(y);
        Eigen::VectorXd k2 = rhs(y + 0.5 * h * k1);
        Eigen::VectorXd k3 = rhs(y + 0.5 * h * k2);
        Eigen::VectorXd k4 = rhs(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (opts.with_group && opts.projection_every > 0 && (k + 1) % opts.projection_every == 0) {
            GroupElement g(Eigen::Map<const Eigen::MatrixXd>(y.tail(gsz).data(), n, n));
            if (group_drift(sys.spec, g) > opts.drift_tol) {
                g = project_to_group(sys.spec, g);
                y.tail(gsz) = Eigen::Map<const Eigen::VectorXd>(g.matrix.data(), gsz);
                ++out.projections_triggered;
            }
        }
        if ((k + 1) % opts.store_every == 0 || k + 1 == steps) record(k + 1);
    }
    return out;
}

std::vector<SplitState> integrate_split(const ReducedSystem& sys, const SplitState& initial,
                                        double T, double h, int store_every) {
    const int dim = sys.spec.dim;
    Eigen::VectorXd y(3 * dim);
    y.head(dim) = initial.u.coords;
    y.segment(dim, dim) = initial.lambda.coords;
    y.tail(dim) = initial.alpha;

    auto rhs = [&](const Eigen::VectorXd& s) {
        SplitState st{AlgebraVector(s.head(dim)), DualVector(s.segment(dim, dim)), s.tail(dim), 0.0};
        SplitRates r = ep_rhs_split(sys, st);
        Eigen::VectorXd dy(3 * dim);
        // u_dot = H^{-1} d/dt(dC/du) on k; p part of u is pinned to e0
        dy.head(dim) =
            project_onto(sys.cost_hessian_inv(DualVector(r.cost_grad_dot)).coords,
                         sys.spec.subspace_k, dim);
        dy.segment(dim, dim) = r.lambda_dot;
        dy.tail(dim) = r.alpha_dot;
        return dy;
    };

    const long steps = std::lround(T / h);
    const double hh = T / static_cast<double>(steps);
    std::vector<SplitState> out;
    auto record = [&](long k) {
        out.push_back(SplitState{AlgebraVector(y.head(dim)), DualVector(y.segment(dim, dim)),
                                 y.tail(dim), k * hh});
    };
    record(0);
    for (long k = 0; k < steps; ++k) {
        Eigen::VectorXd k1 = rhs(y);
        Eigen::VectorXd k2 = rhs(y + 0.5 * hh * k1);
        Eigen::VectorXd k3 = rhs(y + 0.5 * hh * k2);
        Eigen::VectorXd k4 = rhs(y + hh * k3);
        y += (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((k + 1) % store_every == 0 || k + 1 == steps) record(k + 1);
    }
    return out;
}

}  // namespace lpoc
