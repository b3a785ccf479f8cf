#pragma once

#include "pwsgd/constraints.hpp"
#include "pwsgd/leverage.hpp"
#include "pwsgd/linalg.hpp"
#include "pwsgd/sketch.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace pwsgd {

/// QR-based least-squares minimizer.
Vector direct_ls_solve(const DenseMatrix& a, const Vector& b);

/// argmin_{||x||_1 <= radius} ||Ax - b||_2 (projected accelerated gradient to a 1e-12 gap).
Vector constrained_ls_solve(const DenseMatrix& a, const Vector& b, double radius);

struct L1SolveInfo {
  Index irls_iterations = 0;
  Index polish_moves = 0;
  double objective = 0.0;
  bool polished = false;
};

/// l1 regression by IRLS with smoothing delta_k -> 1e-10, then a vertex polish
/// (exact line searches along simplex edges). The polish is kept only if it lowers the objective.
Vector irls_l1_solve(const DenseMatrix& a, const Vector& b, double tol = 1e-10, Index max_iters = 1000,
                     L1SolveInfo* info = nullptr);

/// beta for p = 1: max_x ||x||_inf / ||Ux||_1, computed column by column by l1 regression.
double l1_beta(const DenseMatrix& u);

/// [A b].
DenseMatrix augment(const DenseMatrix& a, const Vector& b);

/// Exact leverage distribution of [A b] with R from `spec` (l2 scores for p = 2, l1 scores for p = 1).
SamplingDistribution augmented_distribution(const DenseMatrix& a, const Vector& b, int p, const SketchSpec& spec);

struct RlaOptions {
  int p = 2;
  Constraint constraint;
  int max_retries = 3;
  /// Test hook: supplies the s sampled indices instead of drawing them.
  std::function<std::vector<Index>(Index attempt)> index_hook;
};

/// Rows i_1..i_m of [A b], each scaled by (1/p_i)^(1/p).
struct SampledProblem {
  DenseMatrix sa;
  Vector sb;
  std::vector<Index> indices;
};
SampledProblem scaled_rows(const DenseMatrix& a, const Vector& b, const SamplingDistribution& dist,
                           const std::vector<Index>& indices, int p);

/// s i.i.d. draws from `dist`; E ||S A x - S b||_p^p = s ||A x - b||_p^p.
SampledProblem rla_sample(const DenseMatrix& a, const Vector& b, const SamplingDistribution& dist, Index s,
                          std::uint64_t seed, int p);

/// Sample s rows i.i.d. from `dist`, scale by (1/p_i)^(1/p), solve the subproblem exactly.
Vector rla_sampling_solve(const DenseMatrix& a, const Vector& b, const SamplingDistribution& dist, Index s,
                          std::uint64_t seed, const RlaOptions& opts = {});

/// (1+g)/(1-g) (32 alpha beta)^p / (p^2 eps^2) ((d+1) log(12/eps) + log(2/delta)), rounded up.
Index sampling_size_bound(int p, double alpha, double beta, double gamma, double eps, double delta, Index d);

}  // namespace pwsgd
