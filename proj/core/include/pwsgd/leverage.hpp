#pragma once

#include "pwsgd/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pwsgd {

struct SamplingDistribution {
  Vector lambda;
  Vector probs;
  double gamma = 0.0;
  std::vector<double> cumulative;

  Index size() const { return probs.size(); }

  /// probs = lambda / sum(lambda). Throws when lambda is negative, non-finite or all zero.
  static SamplingDistribution from_lambda(Vector lambda, double gamma = 0.0);
};

/// lambda_i = ||(A R^-1)_i||_p^p.
SamplingDistribution exact_scores(const DenseMatrix& a, const DenseMatrix& r, int p);

/// lambda_i = ||(A R^-1 G)_i||_2^2 / k with G a d x k Gaussian probe.
/// `probe` overrides G (test hook); `gamma` is the factor the estimate is claimed to achieve.
SamplingDistribution approx_scores_l2(const DenseMatrix& a, const DenseMatrix& r, Index num_probe_cols,
                                      std::uint64_t seed, double gamma = 0.5,
                                      const std::optional<DenseMatrix>& probe = std::nullopt);

/// lambda_i = median_j |(A R^-1 C)_ij| with C a d x k Cauchy probe.
SamplingDistribution approx_scores_l1(const DenseMatrix& a, const DenseMatrix& r, Index num_probe_cols,
                                      std::uint64_t seed, double gamma = 0.5);

/// ceil(8 ln n).
Index default_l2_probe_cols(Index n);
inline constexpr Index kDefaultL1ProbeCols = 21;

/// p_i = ||A_i||_2^2 / ||A||_F^2.
SamplingDistribution row_norm_distribution(const DenseMatrix& a);
SamplingDistribution uniform_distribution(Index n);

/// Inverse-CDF draw; never returns an index with p_i = 0.
Index sample_index(const SamplingDistribution& dist, Rng& rng);

void write_distribution_csv(const std::string& path, const SamplingDistribution& dist);
SamplingDistribution read_distribution_csv(const std::string& path);

}  // namespace pwsgd
