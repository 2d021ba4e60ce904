#include "lpoc/solver.hpp"

#include <cmath>

namespace lpoc {

namespace {

// Forward simulation over one span, returning endpoint (and optionally the
// full sampled path).  Both modes share this shape so the shooting residual
// is mode-agnostic.
struct SpanResult {
    DualVector mu_end;
    Eigen::VectorXd alpha_end;
    GroupElement g_end;
    std::vector<FlowSample> samples;
};

SpanResult simulate_span(const BvpProblem& p, const DualVector& mu0,
                         const Eigen::VectorXd& alpha_bar0, const GroupElement& g_start,
                         double span, bool keep_path) {
    SpanResult out;
    if (p.mode == BvpMode::Continuous) {
        FlowOptions opts;
        opts.h = p.h;
        long steps = std::max(1L, std::lround(span / p.h));
        opts.store_every = keep_path ? 1 : static_cast<int>(steps);
        FlowResult fr = integrate_lp(p.sys, ReducedState{mu0, alpha_bar0, 0.0}, g_start, span, opts);
        out.samples = std::move(fr.samples);
    } else {
        int N = std::max(1, static_cast<int>(std::lround(span / (p.T / p.N))));
        StepperConfig cfg;
        cfg.h = span / N;
        cfg.retraction = p.retraction;
        auto states = discrete_trajectory(p.sys, cfg, mu0, alpha_bar0, g_start, N);
        out.samples.reserve(states.size());
        for (const auto& s : states)
            out.samples.push_back(FlowSample{s.k * cfg.h, s.u, s.mu, s.alpha, s.g});
        if (!keep_path) out.samples.erase(out.samples.begin() + 1, out.samples.end() - 1);
    }
    const FlowSample& last = out.samples.back();
    out.mu_end = last.mu;
    out.alpha_end = last.alpha;
    out.g_end = last.g;
    if (!keep_path) out.samples.clear();
    return out;
}

Eigen::VectorXd chart_residual(const BvpProblem& p, const GroupElement& g_end,
                               const GroupElement& g_target) {
    GroupElement rel = g_end.inverse() * g_target;
    return tau_inv(p.retraction, p.sys.spec, rel).coords;
}

// Penalty magnitude used when a trial trajectory hits the barrier set; large
// enough to reject the step, shaped so LM keeps a usable gradient.
Eigen::VectorXd penalty(int dim, const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(dim, 1e3 * (1.0 + x.norm()));
}

ShootResult finalize(const BvpProblem& p, const DualVector& mu0, const LmResult& lm, int segments) {
    ShootResult res;
    res.initial_mu = mu0;
    res.residual_norm = lm.residual_norm;
    res.iterations = lm.iterations;
    res.converged = lm.converged;
    res.segments = segments;
    Eigen::VectorXd alpha_bar0 = advect_by_group(p.sys, p.g0, p.sys.alpha0);
    SpanResult sr = simulate_span(p, mu0, alpha_bar0, p.g0, p.T, true);
    res.trajectory = std::move(sr.samples);
    if (p.sys.barrier_gap)
        for (const auto& s : res.trajectory)
            res.min_barrier_gap = std::min(res.min_barrier_gap, p.sys.barrier_gap(s.alpha));
    return res;
}

ShootResult shoot_multiple(const BvpProblem& p, const DualVector& mu0_guess, int S) {
    const int dim = p.sys.spec.dim;
    const double span = p.T / S;
    Eigen::VectorXd alpha_bar0 = advect_by_group(p.sys, p.g0, p.sys.alpha0);

    // Interior nodes g_j = g0 tau(xi_j); seed xi from polar-projected linear
    // interpolation between the endpoints.
    std::vector<Eigen::VectorXd> xi0(S - 1);
    for (int j = 1; j < S; ++j) {
        double s = static_cast<double>(j) / S;
        GroupElement gj = project_to_group(
            p.sys.spec, GroupElement((1.0 - s) * p.g0.matrix + s * p.gT.matrix));
        try {
            xi0[j - 1] = tau_inv(p.retraction, p.sys.spec, p.g0.inverse() * gj).coords;
        } catch (const OutsideInjectivityDomain&) {
            xi0[j - 1] = Eigen::VectorXd::Zero(dim);
        }
    }

    // Unknowns: mu_j (j = 0..S-1) then xi_j (j = 1..S-1).
    Eigen::VectorXd z0((2 * S - 1) * dim);
    for (int j = 0; j < S; ++j) z0.segment(j * dim, dim) = mu0_guess.coords;
    for (int j = 1; j < S; ++j) z0.segment((S + j - 1) * dim, dim) = xi0[j - 1];

    auto node_g = [&](const Eigen::VectorXd& z, int j) {
        if (j == 0) return p.g0;
        if (j == S) return p.gT;
        return p.g0 * tau(p.retraction, p.sys.spec,
                          AlgebraVector(z.segment((S + j - 1) * dim, dim)));
    };

    auto resid = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
        Eigen::VectorXd r((2 * S - 1) * dim);
        try {
            for (int j = 0; j < S; ++j) {
                GroupElement gj = node_g(z, j);
                Eigen::VectorXd aj = advect_by_group(p.sys, gj, p.sys.alpha0);
                DualVector muj(z.segment(j * dim, dim));
                SpanResult sr = simulate_span(p, muj, aj, gj, span, false);
                r.segment(j * dim, dim) = chart_residual(p, sr.g_end, node_g(z, j + 1));
                if (j < S - 1)
                    r.segment((S + j) * dim, dim) =
                        sr.mu_end.coords - z.segment((j + 1) * dim, dim);
            }
        } catch (const Error&) {
            return penalty(static_cast<int>(z.size()), z);
        }
        return r;
    };

    LmOptions lopts;
    lopts.tol = p.tol;
    lopts.max_iters = p.max_iters;
    LmResult lm = levenberg_marquardt(resid, z0, lopts);
    return finalize(p, DualVector(lm.x.head(dim)), lm, S);
}

}  // namespace

std::vector<GroupElement> reconstruct(const LieAlgebraSpec& spec, RetractionKind kind,
                                      const std::vector<AlgebraVector>& u_path,
                                      const GroupElement& g0, double h) {
    std::vector<GroupElement> out;
    out.reserve(u_path.size() + 1);
    out.push_back(g0);
    for (const auto& u : u_path)
        out.push_back(out.back() * tau(kind, spec, AlgebraVector(h * u.coords)));
    return out;
}

LmResult levenberg_marquardt(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& r,
                             const Eigen::VectorXd& x0, const LmOptions& opts) {
    Eigen::VectorXd x = x0;
    Eigen::VectorXd rx = r(x);
    double lambda = opts.lambda0;
    int it = 0;
    for (; it < opts.max_iters && rx.norm() > opts.tol; ++it) {
        const int n = static_cast<int>(x.size());
        Eigen::MatrixXd J(rx.size(), n);
        for (int j = 0; j < n; ++j) {
            double eps = opts.fd_eps * std::max(1.0, std::abs(x[j]));
            Eigen::VectorXd xp = x;
            xp[j] += eps;
            J.col(j) = (r(xp) - rx) / eps;
        }
        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * rx;

        bool accepted = false;
        for (int tries = 0; tries < 25; ++tries) {
            Eigen::MatrixXd A = JtJ + lambda * Eigen::MatrixXd::Identity(n, n);
            Eigen::VectorXd delta = A.ldlt().solve(-g);
            if (delta.allFinite()) {
                Eigen::VectorXd x_try = x + delta;
                Eigen::VectorXd r_try = r(x_try);
                if (r_try.norm() < rx.norm()) {
                    x = x_try;
                    rx = r_try;
                    lambda = std::max(lambda / 10.0, 1e-14);
                    accepted = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
    }
    return LmResult{x, rx.norm(), it, rx.norm() <= opts.tol};
}

DualVector default_mu0_guess(const BvpProblem& p) {
    const int dim = p.sys.spec.dim;
    try {
        AlgebraVector x = tau_inv(p.retraction, p.sys.spec, p.g0.inverse() * p.gT);
        Eigen::VectorXd ubar =
            project_onto(x.coords / p.T, p.sys.spec.subspace_k, dim) +
            project_onto(p.sys.e0.coords, p.sys.spec.subspace_p, dim);
        return legendre(p.sys, AlgebraVector(ubar), DualVector::Zero(dim));
    } catch (const OutsideInjectivityDomain&) {
        return DualVector::Zero(dim);
    }
}

ShootResult shoot(const BvpProblem& p, const DualVector& mu0_guess) {
    const int dim = p.sys.spec.dim;
    Eigen::VectorXd alpha_bar0 = advect_by_group(p.sys, p.g0, p.sys.alpha0);
    check_barrier_start(p.sys, alpha_bar0);

    bool chart_failed = false;
    auto resid = [&](const Eigen::VectorXd& mu) -> Eigen::VectorXd {
        try {
            SpanResult sr = simulate_span(p, DualVector(mu), alpha_bar0, p.g0, p.T, false);
            return chart_residual(p, sr.g_end, p.gT);
        } catch (const OutsideInjectivityDomain&) {
            chart_failed = true;
            throw;
        } catch (const Error&) {
            // barrier hit or a blown-up trial trajectory: reject the step
            return penalty(dim, mu);
        }
    };

    try {
        LmOptions lopts;
        lopts.tol = p.tol;
        lopts.max_iters = p.max_iters;
        LmResult lm = levenberg_marquardt(resid, mu0_guess.coords, lopts);
        if (lm.converged) return finalize(p, DualVector(lm.x), lm, 1);
    } catch (const OutsideInjectivityDomain&) {
        if (!chart_failed) throw;
    }

    // Endpoint chart failed or single shooting stalled: bisect the horizon.
    for (int S : {2, 4}) {
        ShootResult r = shoot_multiple(p, mu0_guess, S);
        if (r.converged) return r;
        if (S == 4) return r;
    }
    throw MaxItersExceeded("shoot: unreachable");
}

std::vector<OrderRow> order_study(const ReducedSystem& sys, const ReducedState& initial,
                                  const GroupElement& g0, double T, BvpMode mode,
                                  RetractionKind retraction, const std::vector<double>& h_list) {
    if (h_list.size() < 3)
        throw ContractViolation("order_study: need at least 3 step sizes");
    const int dim = sys.spec.dim;

    auto endpoint = [&](double h) -> Eigen::VectorXd {
        Eigen::VectorXd e(2 * dim);
        if (mode == BvpMode::Continuous) {
            FlowOptions opts;
            opts.h = h;
            opts.with_group = false;
            opts.store_every = static_cast<int>(std::lround(T / h));
            FlowResult fr = integrate_lp(sys, initial, g0, T, opts);
            e << fr.samples.back().mu.coords, fr.samples.back().alpha;
        } else {
            StepperConfig cfg;
            cfg.h = h;
            cfg.retraction = retraction;
            cfg.with_group = false;
            int N = static_cast<int>(std::lround(T / h));
            auto states = discrete_trajectory(sys, cfg, initial.mu, initial.alpha, g0, N);
            e << states.back().mu.coords, states.back().alpha;
        }
        return e;
    };

    double h_min = h_list.back();
    for (double h : h_list) h_min = std::min(h_min, h);
    Eigen::VectorXd ref = endpoint(h_min / 10.0);

    std::vector<OrderRow> rows;
    for (size_t i = 0; i < h_list.size(); ++i) {
        double err = (endpoint(h_list[i]) - ref).norm();
        double order = std::numeric_limits<double>::quiet_NaN();
        if (i > 0 && err > 0 && rows[i - 1].error > 0)
            order = std::log(rows[i - 1].error / err) / std::log(h_list[i - 1] / h_list[i]);
        rows.push_back(OrderRow{h_list[i], err, order});
    }
    return rows;
}

}  // namespace lpoc
