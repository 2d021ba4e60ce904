// lpoc: simulate / step / shoot / order-study / oracle / validate front end.
//
// Exit codes: 0 success, 2 configuration or validation error, 3 solver
// failure.  All numeric output is written with 17 significant digits so
// repeated runs are byte-identical.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "lpoc/discrete.hpp"
#include "lpoc/dynamics.hpp"
#include "lpoc/io.hpp"
#include "lpoc/models.hpp"
#include "lpoc/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    lpoc::ConfigFile raw;
    std::string model;  // heavytop | unicycle
    lpoc::ReducedSystem sys;
    double h;
    double T;
    long N;
    lpoc::RetractionKind retraction;
    double newton_tol;
    double bvp_tol;
    long max_iters;
    lpoc::GroupElement g0;
    std::string prefix;
};

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

RunConfig load_config(const std::string& path) {
    RunConfig rc;
    rc.raw = lpoc::parse_config(path);
    const auto& cfg = rc.raw;

    rc.model = cfg.get_str("", "model", "");
    if (rc.model == "heavytop") {
        lpoc::HeavyTopParams p;
        auto inertia = cfg.get_vec("heavytop", "inertia", {1, 2, 3});
        if (inertia.size() == 3) {
            p.inertia = Eigen::Vector3d(inertia[0], inertia[1], inertia[2]).asDiagonal();
        } else if (inertia.size() == 9) {
            p.inertia = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(
                inertia.data());
        } else {
            throw lpoc::ContractViolation("config: heavytop inertia needs 3 or 9 entries");
        }
        p.m = cfg.get_num("heavytop", "m", 1.0);
        p.g = cfg.get_num("heavytop", "g", 1.0);
        p.l = cfg.get_num("heavytop", "l", 1.0);
        auto chi = cfg.get_vec("heavytop", "chi", {0, 0, 1});
        if (chi.size() != 3) throw lpoc::ContractViolation("config: chi needs 3 entries");
        p.chi = Eigen::Vector3d(chi[0], chi[1], chi[2]);
        rc.sys = lpoc::heavy_top_system(p);

        auto axis = cfg.get_vec("initial", "axis", {0, 0, 1});
        double angle = cfg.get_num("initial", "angle", 0.0);
        if (axis.size() != 3) throw lpoc::ContractViolation("config: initial axis needs 3 entries");
        rc.g0 = lpoc::so3_rotation(Eigen::Vector3d(axis[0], axis[1], axis[2]), angle);
    } else if (rc.model == "unicycle") {
        lpoc::UnicycleParams p;
        p.kappa = cfg.get_num("unicycle", "kappa", 0.1);
        rc.sys = lpoc::unicycle_system(p);
        rc.g0 = lpoc::se2_pose(cfg.get_num("initial", "x", 0.0), cfg.get_num("initial", "y", 0.0),
                               cfg.get_num("initial", "theta", 0.0));
    } else {
        throw lpoc::ContractViolation("config: model must be 'heavytop' or 'unicycle'");
    }

    rc.h = cfg.get_num("run", "h", 1e-3);
    rc.T = cfg.get_num("run", "T", 1.0);
    rc.N = cfg.get_int("run", "N", 0);
    if (rc.h <= 0) throw lpoc::ContractViolation("config: run.h must be > 0");
    if (rc.T <= 0) throw lpoc::ContractViolation("config: run.T must be > 0");
    if (rc.N == 0) rc.N = std::lround(rc.T / rc.h);
    if (rc.N < 1) throw lpoc::ContractViolation("config: run.N must be >= 1");
    if (cfg.has("run", "N") && cfg.has("run", "h") &&
        std::abs(rc.N * rc.h - rc.T) > 1e-9 * std::max(1.0, rc.T))
        throw lpoc::ContractViolation("config: run.N * run.h must equal run.T");
    rc.retraction = lpoc::retraction_from_string(cfg.get_str("run", "retraction", "cayley"));
    rc.newton_tol = cfg.get_num("run", "newton_tol", 1e-10);
    rc.bvp_tol = cfg.get_num("run", "bvp_tol", 1e-8);
    rc.max_iters = cfg.get_int("run", "max_iters", 200);
    if (rc.newton_tol <= 0 || rc.bvp_tol <= 0)
        throw lpoc::ContractViolation("config: tolerances must be > 0");
    rc.prefix = cfg.get_str("output", "prefix", "run");
    return rc;
}

Eigen::VectorXd required_vec(const lpoc::ConfigFile& cfg, const std::string& sec,
                             const std::string& key, int dim) {
    auto v = cfg.get_vec(sec, key, {});
    if (static_cast<int>(v.size()) != dim)
        throw lpoc::ContractViolation("config: [" + sec + "] " + key + " needs " +
                                      std::to_string(dim) + " entries");
    return to_eigen(v);
}

std::vector<std::string> csv_header(const RunConfig& rc) {
    if (rc.model == "unicycle")
        return {"t", "u1", "u2", "lambda3", "alpha1", "alpha2", "alpha3", "x", "y", "theta"};
    return {"t", "u1", "u2", "u3", "mu1", "mu2", "mu3", "alpha1", "alpha2", "alpha3"};
}

std::vector<double> csv_row(const RunConfig& rc, const lpoc::FlowSample& s) {
    std::vector<double> row;
    row.push_back(s.t);
    if (rc.model == "unicycle") {
        row.push_back(s.u.coords[0]);
        row.push_back(s.u.coords[1]);
        row.push_back(s.mu.coords[2]);
        for (int i = 0; i < 3; ++i) row.push_back(s.alpha[i]);
        Eigen::Vector3d p = lpoc::se2_xytheta(s.g);
        for (int i = 0; i < 3; ++i) row.push_back(p[i]);
    } else {
        for (int i = 0; i < 3; ++i) row.push_back(s.u.coords[i]);
        for (int i = 0; i < 3; ++i) row.push_back(s.mu.coords[i]);
        for (int i = 0; i < 3; ++i) row.push_back(s.alpha[i]);
    }
    return row;
}

// Conserved-quantity drift recomputed from the rounded CSV rows, so the
// manifest numbers match an independent recomputation from the file.
json drift_summary(const RunConfig& rc, const std::vector<std::vector<double>>& rows) {
    json out;
    auto drift = [&](auto&& f) {
        double q0 = f(rows.front());
        double d = 0;
        for (const auto& r : rows) d = std::max(d, std::abs(f(r) - q0));
        return d;
    };
    if (rc.model == "unicycle") {
        out["hamiltonian"] = drift([&](const std::vector<double>& r) {
            lpoc::ReducedState st{lpoc::DualVector(Eigen::Vector3d(2 * r[1], r[2], r[3])),
                                  Eigen::Vector3d(r[4], r[5], r[6]), r[0]};
            return lpoc::hamiltonian(rc.sys, st);
        });
        out["alpha1"] = drift([](const std::vector<double>& r) { return r[4]; });
    } else {
        out["hamiltonian"] = drift([&](const std::vector<double>& r) {
            lpoc::ReducedState st{lpoc::DualVector(Eigen::Vector3d(r[4], r[5], r[6])),
                                  Eigen::Vector3d(r[7], r[8], r[9]), r[0]};
            return lpoc::hamiltonian(rc.sys, st);
        });
        out["alpha_norm_sq"] = drift([](const std::vector<double>& r) {
            return r[7] * r[7] + r[8] * r[8] + r[9] * r[9];
        });
        out["mu_dot_alpha"] = drift([](const std::vector<double>& r) {
            return r[4] * r[7] + r[5] * r[8] + r[6] * r[9];
        });
    }
    return out;
}

json echo_config(const lpoc::ConfigFile& cfg) {
    json j;
    for (const auto& [sec, kv] : cfg.tables) {
        json t;
        for (const auto& [k, v] : kv) t[k] = v;
        j[sec.empty() ? "(root)" : sec] = t;
    }
    return j;
}

void write_outputs(const RunConfig& rc, const std::string& out_dir,
                   const std::vector<lpoc::FlowSample>& samples, json extra, bool quiet) {
    fs::create_directories(out_dir);
    std::string csv_path = (fs::path(out_dir) / (rc.prefix + "_trajectory.csv")).string();
    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) rows.push_back(csv_row(rc, s));
    lpoc::write_csv(csv_path, csv_header(rc), rows);

    json manifest;
    manifest["model"] = rc.model;
    manifest["config"] = echo_config(rc.raw);
    manifest["samples"] = rows.size();
    manifest["drift"] = drift_summary(rc, rows);
    for (auto& [k, v] : extra.items()) manifest[k] = v;

    std::string man_path = (fs::path(out_dir) / (rc.prefix + "_manifest.json")).string();
    std::ofstream mf(man_path);
    mf << manifest.dump(2) << "\n";

    std::string plot_path = (fs::path(out_dir) / (rc.prefix + "_plot.gp")).string();
    lpoc::write_plot_script(plot_path, csv_path, rc.model);

    if (!quiet) {
        std::cout << "wrote " << csv_path << "\n" << "wrote " << man_path << "\n";
        std::cout << "drift: " << manifest["drift"].dump() << "\n";
    }
}

int cmd_simulate(const RunConfig& rc, const std::string& out_dir, bool quiet) {
    Eigen::VectorXd mu0 = required_vec(rc.raw, "initial", "mu0", rc.sys.spec.dim);
    Eigen::VectorXd alpha0 = lpoc::advect_by_group(rc.sys, rc.g0, rc.sys.alpha0);
    lpoc::FlowOptions opts;
    opts.h = rc.h;
    lpoc::FlowResult fr = lpoc::integrate_lp(rc.sys, {lpoc::DualVector(mu0), alpha0, 0.0}, rc.g0,
                                             rc.T, opts);
    json extra;
    extra["projections_triggered"] = fr.projections_triggered;
    write_outputs(rc, out_dir, fr.samples, extra, quiet);
    return 0;
}

int cmd_step(const RunConfig& rc, const std::string& out_dir, bool quiet) {
    lpoc::StepperConfig cfg;
    cfg.h = rc.T / static_cast<double>(rc.N);
    cfg.retraction = rc.retraction;
    cfg.newton_tol = rc.newton_tol;
    lpoc::DualVector mu0 = lpoc::DualVector::Zero(rc.sys.spec.dim);
    if (rc.raw.has("initial", "u0")) {
        lpoc::AlgebraVector u0(required_vec(rc.raw, "initial", "u0", rc.sys.spec.dim));
        mu0 = lpoc::legendre(rc.sys, u0, lpoc::DualVector::Zero(rc.sys.spec.dim));
    } else {
        mu0 = lpoc::DualVector(required_vec(rc.raw, "initial", "mu0", rc.sys.spec.dim));
    }
    Eigen::VectorXd alpha0 = lpoc::advect_by_group(rc.sys, rc.g0, rc.sys.alpha0);
    auto states = lpoc::discrete_trajectory(rc.sys, cfg, mu0, alpha0, rc.g0,
                                            static_cast<int>(rc.N));
    std::vector<lpoc::FlowSample> samples;
    samples.reserve(states.size());
    for (const auto& s : states)
        samples.push_back(lpoc::FlowSample{s.k * cfg.h, s.u, s.mu, s.alpha, s.g});
    write_outputs(rc, out_dir, samples, json::object(), quiet);
    return 0;
}

int cmd_shoot(const RunConfig& rc, const std::string& out_dir, bool quiet) {
    lpoc::BvpProblem p;
    p.sys = rc.sys;
    p.g0 = rc.g0;
    p.T = rc.T;
    p.h = rc.h;
    p.N = static_cast<int>(rc.N);
    p.retraction = rc.retraction;
    p.tol = rc.bvp_tol;
    p.max_iters = static_cast<int>(rc.max_iters);
    p.mode = rc.raw.get_str("run", "mode", "continuous") == "discrete" ? lpoc::BvpMode::Discrete
                                                                       : lpoc::BvpMode::Continuous;
    if (rc.model == "unicycle") {
        p.gT = lpoc::se2_pose(rc.raw.get_num("boundary", "x", 0.0),
                              rc.raw.get_num("boundary", "y", 0.0),
                              rc.raw.get_num("boundary", "theta", 0.0));
    } else {
        auto axis = rc.raw.get_vec("boundary", "axis", {0, 0, 1});
        if (axis.size() != 3)
            throw lpoc::ContractViolation("config: boundary axis needs 3 entries");
        p.gT = lpoc::so3_rotation(Eigen::Vector3d(axis[0], axis[1], axis[2]),
                                  rc.raw.get_num("boundary", "angle", 0.0));
    }
    lpoc::DualVector guess =
        rc.raw.has("boundary", "mu_guess")
            ? lpoc::DualVector(required_vec(rc.raw, "boundary", "mu_guess", rc.sys.spec.dim))
            : lpoc::default_mu0_guess(p);

    lpoc::ShootResult res = lpoc::shoot(p, guess);
    json extra;
    extra["solver"] = {{"converged", res.converged},
                       {"residual_norm", res.residual_norm},
                       {"iterations", res.iterations},
                       {"segments", res.segments},
                       {"initial_mu", std::vector<double>(res.initial_mu.coords.data(),
                                                          res.initial_mu.coords.data() +
                                                              res.initial_mu.coords.size())}};
    if (rc.sys.barrier_gap) extra["solver"]["min_barrier_gap"] = res.min_barrier_gap;
    write_outputs(rc, out_dir, res.trajectory, extra, quiet);
    if (!res.converged) {
        if (!quiet) std::cerr << "shoot: did not converge (residual " << res.residual_norm << ")\n";
        return 3;
    }
    return 0;
}

int cmd_order_study(const RunConfig& rc, const std::string& out_dir, bool quiet) {
    Eigen::VectorXd mu0 = required_vec(rc.raw, "initial", "mu0", rc.sys.spec.dim);
    Eigen::VectorXd alpha0 = lpoc::advect_by_group(rc.sys, rc.g0, rc.sys.alpha0);
    auto mode = rc.raw.get_str("order", "mode", "continuous") == "discrete"
                    ? lpoc::BvpMode::Discrete
                    : lpoc::BvpMode::Continuous;
    auto h_list = rc.raw.get_vec("order", "h_list", {0.04, 0.02, 0.01, 0.005});
    auto rows = lpoc::order_study(rc.sys, {lpoc::DualVector(mu0), alpha0, 0.0}, rc.g0, rc.T, mode,
                                  rc.retraction, h_list);

    fs::create_directories(out_dir);
    std::string csv_path = (fs::path(out_dir) / (rc.prefix + "_orders.csv")).string();
    std::vector<std::vector<double>> table;
    for (const auto& r : rows) table.push_back({r.h, r.error, r.order});
    lpoc::write_csv(csv_path, {"h", "error", "order"}, table);

    json manifest;
    manifest["model"] = rc.model;
    manifest["config"] = echo_config(rc.raw);
    json jr = json::array();
    for (const auto& r : rows)
        jr.push_back({{"h", r.h}, {"error", r.error}, {"order", r.order}});
    manifest["orders"] = jr;
    std::ofstream mf(fs::path(out_dir) / (rc.prefix + "_manifest.json"));
    mf << manifest.dump(2) << "\n";
    if (!quiet) {
        for (const auto& r : rows)
            std::cout << "h=" << lpoc::format_g17(r.h) << " error=" << lpoc::format_g17(r.error)
                      << " order=" << lpoc::format_g17(r.order) << "\n";
    }
    return 0;
}

int cmd_oracle(const RunConfig& rc, const std::string& out_dir, bool quiet) {
    if (rc.model != "unicycle")
        throw lpoc::ContractViolation("oracle: only defined for the unicycle model");
    const auto& cfg = rc.raw;
    auto traj = lpoc::unicycle_el_oracle(
        cfg.get_num("el", "x", 0.0), cfg.get_num("el", "y", 0.0), cfg.get_num("el", "theta", 0.0),
        cfg.get_num("el", "xdot", 1.0), cfg.get_num("el", "ydot", 0.0),
        cfg.get_num("el", "thetadot", 0.0), cfg.get_num("el", "lambda0", 0.0), rc.T, rc.h);
    fs::create_directories(out_dir);
    std::string csv_path = (fs::path(out_dir) / (rc.prefix + "_oracle.csv")).string();
    std::vector<std::vector<double>> rows;
    for (const auto& s : traj) rows.push_back({s.t, s.u1, s.u2, s.lambda});
    lpoc::write_csv(csv_path, {"t", "u1", "u2", "lambda"}, rows);
    if (!quiet) std::cout << "wrote " << csv_path << "\n";
    return 0;
}

int cmd_validate(const RunConfig& rc, unsigned long long seed, bool quiet) {
    lpoc::validate(rc.sys.spec);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto rand_vec = [&] {
        Eigen::VectorXd v(rc.sys.spec.dim);
        for (int i = 0; i < v.size(); ++i) v[i] = dist(rng);
        return v;
    };

    double worst_adj = 0, worst_grad = 0, worst_mm = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd u = rand_vec(), v = rand_vec(), m = rand_vec();
        double lhs = lpoc::pair(lpoc::ad_star(rc.sys.spec, lpoc::AlgebraVector(u),
                                              lpoc::DualVector(m)),
                                lpoc::AlgebraVector(v));
        double rhs = lpoc::pair(lpoc::DualVector(m),
                                lpoc::bracket(rc.sys.spec, lpoc::AlgebraVector(u),
                                              lpoc::AlgebraVector(v)));
        worst_adj = std::max(worst_adj, std::abs(lhs - rhs));

        // momentum map pairing identity
        Eigen::VectorXd x = rand_vec(), alpha = rand_vec(), xi = rand_vec();
        lpoc::DualVector J = lpoc::momentum_map_J(rc.sys, x, alpha);
        double jl = lpoc::pair(J, lpoc::AlgebraVector(xi));
        double jr;
        if (rc.sys.advection == lpoc::AdvectionCase::Adjoint) {
            jr = lpoc::pair(lpoc::DualVector(alpha),
                            lpoc::bracket(rc.sys.spec, lpoc::AlgebraVector(xi),
                                          lpoc::AlgebraVector(x)));
        } else {
            jr = -lpoc::pair(lpoc::ad_star(rc.sys.spec, lpoc::AlgebraVector(xi),
                                           lpoc::DualVector(x)),
                             lpoc::AlgebraVector(alpha));
        }
        worst_mm = std::max(worst_mm, std::abs(jl - jr));

        if (rc.sys.potential_grad) {
            Eigen::VectorXd a = rand_vec();
            if (rc.sys.barrier_gap) {
                a[1] += 3.0;  // stay away from the singular set
            }
            Eigen::VectorXd g = rc.sys.potential_grad(a);
            const double eps = 1e-5;
            for (int i = 0; i < a.size(); ++i) {
                Eigen::VectorXd ap = a, am = a;
                ap[i] += eps;
                am[i] -= eps;
                double fd = (rc.sys.potential(ap) - rc.sys.potential(am)) / (2 * eps);
                double denom = std::max(1.0, std::abs(g[i]));
                worst_grad = std::max(worst_grad, std::abs(fd - g[i]) / denom);
            }
        }
    }

    bool split_ok = rc.sys.spec.subspace_p.empty() || lpoc::has_cartan_splitting(rc.sys.spec);
    bool ok = worst_adj <= 1e-12 && worst_mm <= 1e-12 && worst_grad <= 1e-5 && split_ok;
    if (!quiet) {
        std::cout << "algebra tables: ok\n";
        std::cout << "ad* adjointness worst: " << worst_adj << "\n";
        std::cout << "momentum map pairing worst: " << worst_mm << "\n";
        std::cout << "potential gradient worst rel err: " << worst_grad << "\n";
        std::cout << "splitting: " << (split_ok ? "ok" : "FAIL") << "\n";
        std::cout << (ok ? "all checks passed" : "CHECKS FAILED") << "\n";
    }
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetry-reduced optimal control on matrix Lie groups"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    unsigned long long seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "config file path")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_flag("--quiet", quiet, "suppress normal output");

    auto* simulate = app.add_subcommand("simulate", "continuous-time reduced flow (RK4)");
    auto* step = app.add_subcommand("step", "discrete-time variational stepper");
    auto* shoot = app.add_subcommand("shoot", "two-point boundary value solve");
    auto* order = app.add_subcommand("order-study", "step-size convergence table");
    auto* oracle = app.add_subcommand("oracle", "reduced Euler-Lagrange cross-check");
    auto* validate = app.add_subcommand("validate", "run the model invariant suite");
    // let the global flags appear after the subcommand too
    for (auto* sc : {simulate, step, shoot, order, oracle, validate}) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig rc = load_config(config_path);
        if (simulate->parsed()) return cmd_simulate(rc, out_dir, quiet);
        if (step->parsed()) return cmd_step(rc, out_dir, quiet);
        if (shoot->parsed()) return cmd_shoot(rc, out_dir, quiet);
        if (order->parsed()) return cmd_order_study(rc, out_dir, quiet);
        if (oracle->parsed()) return cmd_oracle(rc, out_dir, quiet);
        if (validate->parsed()) return cmd_validate(rc, seed, quiet);
    } catch (const lpoc::ContractViolation& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const lpoc::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
