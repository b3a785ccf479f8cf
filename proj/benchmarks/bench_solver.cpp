// Per-iteration cost of pwSGD for each preconditioner mode and of the two baselines.

#include "pwsgd/pwsgd.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace pwsgd;

constexpr Index kIters = 10000;

struct Fixture {
  RegressionProblem prob;
  DenseMatrix r;
  SamplingDistribution dist;

  explicit Fixture(Index d) {
    const Dataset ds = gen_synthetic1(5000, d, 5, 3);
    prob = {ds.a, ds.b};
    r = compute_R(prob.a, SketchSpec::make(SketchKind::sparse_l2, 8 * d * d, 4)).r;
    dist = exact_scores(prob.a, r, 2);
  }
};

SolverConfig fixed_config(FMode mode) {
  SolverConfig c;
  c.p = 2;
  c.f_mode = mode;
  c.step_size = mode == FMode::noco ? 1e-6 : 1e-4;
  c.max_iters = kIters;
  c.checkpoint_every = kIters;
  return c;
}

void BM_PwsgdIterations(benchmark::State& state) {
  const auto mode = static_cast<FMode>(state.range(0));
  const Fixture fx(state.range(1));
  const Preconditioner precond(fx.r, mode);
  SolverConfig cfg = fixed_config(mode);
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(pwsgd_solve(fx.prob, precond, fx.dist, cfg));
  }
  state.SetLabel(to_string(mode));
  state.SetItemsProcessed(state.iterations() * kIters);
}

BENCHMARK(BM_PwsgdIterations)
    ->ArgsProduct({{static_cast<std::int64_t>(FMode::full), static_cast<std::int64_t>(FMode::diag),
                    static_cast<std::int64_t>(FMode::noco)},
                   {10, 50}})
    ->Unit(benchmark::kMillisecond);

void BM_Baselines(benchmark::State& state) {
  const Fixture fx(state.range(1));
  SolverConfig cfg = fixed_config(FMode::noco);
  cfg.step_size = 1e-6;
  const bool rk = state.range(0) == 0;
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(rk ? weighted_rk_solve(fx.prob, cfg) : vanilla_sgd_solve(fx.prob, cfg));
  }
  state.SetLabel(rk ? "weighted_rk" : "vanilla_sgd");
  state.SetItemsProcessed(state.iterations() * kIters);
}

BENCHMARK(BM_Baselines)->ArgsProduct({{0, 1}, {10, 50}})->Unit(benchmark::kMillisecond);

}  // namespace
