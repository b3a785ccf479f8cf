#pragma once

#include "pwsgd/linalg.hpp"

#include <cstdint>
#include <string>

namespace pwsgd {

struct Dataset {
  DenseMatrix a;
  Vector b;
  Vector x_true;  // empty for loaded data
};

/// Gaussian design with `num_spikes` rows replaced by 20 e_k (k cycling through the columns),
/// giving a few rows with large norm and large leverage. With cond > 1 the design is then
/// multiplied by Q diag(g) Q^T diag(g') (geometric spreads, tuned by bisection) so that the
/// spectral condition number of A is approximately `cond`.
/// b = A x_true + N(0, noise_sigma^2), x_true standard Gaussian.
Dataset gen_synthetic1(Index n, Index d, Index num_spikes, std::uint64_t seed, double cond = 1.0,
                       double noise_sigma = 0.1);

/// A = U Sigma V^T with U, V drawn from `shared_seed` and sigma_i = 1 + (i-1) q, where q >= 0
/// solves sum_i sigma_i^2 = kappa_bar_sq. Noise and x_true come from `data_seed`.
Dataset gen_synthetic2(Index n, Index d, double kappa_bar_sq, std::uint64_t shared_seed, double noise_sigma = 0.1,
                       std::uint64_t data_seed = 0);

struct Synthetic2Factors {
  DenseMatrix u;  // n x d, orthonormal columns
  DenseMatrix v;  // d x d, orthogonal
};
/// U and V of gen_synthetic2; they depend on shared_seed only.
Synthetic2Factors synthetic2_factors(Index n, Index d, std::uint64_t shared_seed);

/// Positive root of sum_{i<d} (1 + i q)^2 = kappa_bar_sq.
double synthetic2_q(Index d, double kappa_bar_sq);

/// b = A x* + e with A, e standard normal and x* having `sparsity` standard normal entries.
Dataset gen_sparse_regression(Index n, Index d, Index sparsity, std::uint64_t seed, double noise_sigma = 1.0);

/// CSV with one sample per line; `response_column` becomes b, the rest A. A non-numeric
/// first line is treated as a header.
Dataset load_csv_dataset(const std::string& path, Index response_column);

}  // namespace pwsgd
