#include <benchmark/benchmark.h>

#include "lpoc/discrete.hpp"
#include "lpoc/models.hpp"
#include "lpoc/retraction.hpp"

namespace {

void BM_ep_rhs_heavytop(benchmark::State& state) {
    auto sys = lpoc::heavy_top_system({});
    lpoc::ReducedState st{lpoc::DualVector(Eigen::Vector3d(0.3, -0.2, 0.5)),
                          Eigen::Vector3d(0.1, 0.2, 0.97), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(lpoc::ep_rhs(sys, st));
}
BENCHMARK(BM_ep_rhs_heavytop);

void BM_ep_rhs_unicycle(benchmark::State& state) {
    auto sys = lpoc::unicycle_system({0.1});
    lpoc::ReducedState st{lpoc::DualVector(Eigen::Vector3d(0.3, 0.8, 0.1)),
                          Eigen::Vector3d(1.0, 0.5, 2.0), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(lpoc::ep_rhs(sys, st));
}
BENCHMARK(BM_ep_rhs_unicycle);

void BM_tau_cayley_se2(benchmark::State& state) {
    auto spec = lpoc::make_se2();
    lpoc::AlgebraVector x(Eigen::Vector3d(0.3, 0.7, -0.2));
    for (auto _ : state) benchmark::DoNotOptimize(lpoc::tau(lpoc::RetractionKind::Cayley, spec, x));
}
BENCHMARK(BM_tau_cayley_se2);

void BM_tau_exp_so3(benchmark::State& state) {
    auto spec = lpoc::make_so3();
    lpoc::AlgebraVector x(Eigen::Vector3d(0.3, 0.7, -0.2));
    for (auto _ : state)
        benchmark::DoNotOptimize(lpoc::tau(lpoc::RetractionKind::Exponential, spec, x));
}
BENCHMARK(BM_tau_exp_so3);

void BM_discrete_step_unicycle(benchmark::State& state) {
    auto sys = lpoc::unicycle_system({0.1});
    lpoc::StepperConfig cfg;
    cfg.h = 0.01;
    lpoc::DiscreteState s;
    s.u = lpoc::AlgebraVector(Eigen::Vector3d(0.3, 0.8, 0.0));
    s.mu = sys.cost_grad(s.u);
    s.alpha = Eigen::Vector3d(1.0, 0.5, 2.0);
    s.g = lpoc::se2_pose(2.0, 0.5, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(lpoc::discrete_step(sys, cfg, s));
}
BENCHMARK(BM_discrete_step_unicycle);

}  // namespace

BENCHMARK_MAIN();
