// Cost of applying each sketch kind to a dense n x d matrix.

#include "pwsgd/pwsgd.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace pwsgd;

void BM_ApplySketch(benchmark::State& state) {
  const auto kind = static_cast<SketchKind>(state.range(0));
  const Index n = state.range(1);
  const Index d = 10;
  Rng rng(1);
  const DenseMatrix a = gaussian_matrix(n, d, rng);
  const Index s = kind == SketchKind::sparse_l2 ? 8 * d * d : default_sketch_rows(kind, d);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_sketch(SketchSpec::make(kind, s, ++seed), a));
  }
  state.SetLabel(to_string(kind));
  state.SetItemsProcessed(state.iterations() * n);
}

void sketch_args(benchmark::internal::Benchmark* b) {
  for (auto kind : {SketchKind::gaussian, SketchKind::srht, SketchKind::sparse_l2, SketchKind::dense_cauchy,
                    SketchKind::sparse_cauchy, SketchKind::recip_exp}) {
    for (Index n : {2000, 20000}) b->Args({static_cast<std::int64_t>(kind), n});
  }
}

BENCHMARK(BM_ApplySketch)->Apply(sketch_args)->Unit(benchmark::kMillisecond);

void BM_ComputeR(benchmark::State& state) {
  const Index n = state.range(0);
  const Index d = 10;
  Rng rng(2);
  const DenseMatrix a = gaussian_matrix(n, d, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_R(a, SketchSpec::make(SketchKind::sparse_l2, 8 * d * d, ++seed)));
  }
  state.SetItemsProcessed(state.iterations() * n);
}

BENCHMARK(BM_ComputeR)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
