// Exact leverage scores of A R^-1 against the Gaussian-probe approximation.

#include "pwsgd/pwsgd.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace pwsgd;

struct Input {
  DenseMatrix a;
  DenseMatrix r;

  Input(Index n, Index d) {
    Rng rng(5);
    a = gaussian_matrix(n, d, rng);
    r = compute_R(a, SketchSpec::make(SketchKind::gaussian, 8 * d, 6)).r;
  }
};

void BM_ExactScores(benchmark::State& state) {
  const Input in(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(exact_scores(in.a, in.r, 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ApproxScores(benchmark::State& state) {
  const Index n = state.range(0);
  const Input in(n, state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(approx_scores_l2(in.a, in.r, default_l2_probe_cols(n), ++seed));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

BENCHMARK(BM_ExactScores)->ArgsProduct({{10000, 100000}, {10, 100}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApproxScores)->ArgsProduct({{10000, 100000}, {10, 100}})->Unit(benchmark::kMillisecond);

}  // namespace
