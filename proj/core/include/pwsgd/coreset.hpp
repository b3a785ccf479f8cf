#pragma once

#include "pwsgd/linalg.hpp"
#include "pwsgd/sketch.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pwsgd {

/// Upper bounds m(f_i) on the sensitivities of f_i(x) = |A_i x|^p.
struct SensitivityProfile {
  Vector per_row_bound;
  double total = 0.0;
  double beta = 0.0;
  int p = 2;
};

/// m(f_i) <= n beta^p lambda_i + 1 with lambda_i = ||U_i||_p^p for U = A R^-1.
/// beta is exact: 1/sigma_min(U) for p = 2, an l1-regression computation for p = 1.
SensitivityProfile sensitivity_upper_bounds(const DenseMatrix& a_aug, const DenseMatrix& r, int p);
/// Same, with R from a sketch of `a_aug`.
SensitivityProfile sensitivity_upper_bounds(const DenseMatrix& a_aug, int p, const SketchSpec& spec);

/// Certified lower bounds on sup_x n f_i(x) / sum_j f_j(x): the max over sampled unit
/// directions and the pseudo-inverse witnesses (A^T A)^-1 A_i^T.
Vector sensitivity_lower_bounds(const DenseMatrix& a_aug, int p, Index num_dirs, std::uint64_t seed);

struct Coreset {
  std::vector<Index> indices;
  Vector weights;
};

/// Sensitivity sampling: s draws with replacement, p(f) = m(f)/M(F), weight 1/(s p(f)).
Coreset coreset_construct(const SensitivityProfile& profile, Index s, std::uint64_t seed);

/// sum_k w_k |A_{i_k} x|^p.
double weighted_cost(const DenseMatrix& a_aug, const Coreset& coreset, const Vector& x, int p);
/// sum_i |A_i x|^p.
double full_cost(const DenseMatrix& a_aug, const Vector& x, int p);

/// ceil(c M / eps^2 (dim + log(1/delta))).
Index coreset_sample_size(double total_sensitivity, double eps, double delta, Index dim, double c = 1.0);

void write_coreset_csv(const std::string& path, const Coreset& coreset);
Coreset read_coreset_csv(const std::string& path);

/// Rows a_i in {0,1}^d with d/2 ones, and witnesses with a_i . x = 1 and a_j . x < 0 for j != i,
/// so each hinge loss (a_i . x)^+ has sensitivity at least one share of the total.
struct HingeConstruction {
  Index d = 0;
  std::vector<std::vector<int>> rows;
  /// Witnesses scaled by d so that they are integral: 2 on the support, -d^2 elsewhere.
  std::vector<std::vector<long long>> scaled_witnesses;

  /// Witness in real arithmetic: 2/d on the support, -d elsewhere.
  Vector witness(Index i) const;
  /// Exact integer check of f_i(x_i) = 1 and f_j(x_i) = 0 for every pair.
  bool verify() const;
  /// Number of rows, a lower bound on the total sensitivity.
  Index total_lower_bound() const { return static_cast<Index>(rows.size()); }
};

HingeConstruction hinge_sensitivity_construction(Index d);

}  // namespace pwsgd
