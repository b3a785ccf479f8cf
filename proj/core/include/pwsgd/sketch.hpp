#pragma once

#include "pwsgd/linalg.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace pwsgd {

enum class SketchKind { gaussian, srht, sparse_l2, dense_cauchy, sparse_cauchy, recip_exp };

std::string to_string(SketchKind kind);
SketchKind sketch_kind_from_string(const std::string& name);

/// Norm a sketch kind is designed for: 2 for gaussian/srht/sparse_l2, 1 otherwise.
int native_norm(SketchKind kind);

struct SketchSpec {
  SketchKind kind = SketchKind::gaussian;
  Index sketch_rows = 0;  // 0 = default_sketch_rows(kind, d)
  std::uint64_t seed = 0;
  int target_norm = 2;

  /// Spec with target_norm set from the kind.
  static SketchSpec make(SketchKind kind, Index sketch_rows, std::uint64_t seed);
};

/// max(8d, 50) for l2 kinds and max(8d, 100) for l1 kinds.
Index default_sketch_rows(SketchKind kind, Index d);

/// Throws InvalidArgument when the spec is inconsistent.
void validate(const SketchSpec& spec);

/// S as an explicit matrix: sparse for the one-nonzero-per-column kinds, dense otherwise.
using SketchOperator = std::variant<DenseMatrix, SparseMatrix>;

/// Explicit S (s x n). Consumes random draws in the same order as apply_sketch.
SketchOperator materialize_sketch(const SketchSpec& spec, Index n);

/// S * A, deterministic given spec.seed.
DenseMatrix apply_sketch(const SketchSpec& spec, const DenseMatrix& a);
DenseMatrix apply_sketch(const SketchSpec& spec, const SparseMatrix& a);

struct DistortionEstimate {
  double sigma_s = kNaN;  // smallest observed ||SAx|| / ||Ax||
  double kappa_s = kNaN;  // largest / smallest observed ratio
  Index skipped = 0;
};

/// Monte-Carlo estimate of the embedding distortion in the spec's target norm.
DistortionEstimate distortion_estimate(const SketchSpec& spec, const DenseMatrix& a, Index num_dirs,
                                       std::uint64_t seed);

/// Same, for an already computed SA.
DistortionEstimate distortion_from_pair(const DenseMatrix& a, const DenseMatrix& sa, int norm,
                                        Index num_dirs, std::uint64_t seed);

/// In-place unnormalized fast Walsh-Hadamard transform; length must be a power of two.
void fwht(double* data, Index len, Index stride = 1);

double standard_cauchy(Rng& rng);

}  // namespace pwsgd
