#pragma once

#include "pwsgd/linalg.hpp"
#include "pwsgd/sketch.hpp"

#include <string>

namespace pwsgd {

enum class FMode { full, diag, noco };

std::string to_string(FMode mode);
FMode f_mode_from_string(const std::string& name);

/// F and the metric H = (F F^T)^-1 built from an upper-triangular R.
///   full: F = R^-1, H = R^T R
///   diag: F = D, D_jj = 1 / ||R e_j||_2, H = D^-2
///   noco: F = I
class Preconditioner {
 public:
  Preconditioner(DenseMatrix r, FMode mode);

  FMode mode() const { return mode_; }
  Index dim() const { return r_.rows(); }
  const DenseMatrix& r() const { return r_; }
  /// Diagonal of D (diag mode), ones otherwise.
  const Vector& scaling() const { return scaling_; }

  Vector apply_f(const Vector& y) const;            // F y
  Vector apply_f_inverse(const Vector& x) const;    // F^-1 x
  Vector apply_f_transpose(const Vector& v) const;  // F^T v
  void apply_h_inverse_inplace(Vector& v) const;    // v <- F F^T v
  Vector apply_h_inverse(const Vector& v) const;
  Vector apply_h(const Vector& v) const;            // H v
  double h_norm_sq(const Vector& v) const;
  double h_norm(const Vector& v) const;

  DenseMatrix f_matrix() const;
  /// R F: identity in full mode.
  DenseMatrix rf_matrix() const;
  /// Extreme eigenvalues of H.
  double h_max_eigenvalue() const { return h_max_; }
  double h_min_eigenvalue() const { return h_min_; }

 private:
  DenseMatrix r_;
  FMode mode_;
  Vector scaling_;
  double h_max_ = 1.0;
  double h_min_ = 1.0;
};

Preconditioner make_preconditioner(const DenseMatrix& r, FMode mode);

struct ComputeROptions {
  bool report_conditioning = false;  // l2_conditioning of A R^-1
  Index distortion_dirs = 0;         // > 0: Monte-Carlo kappa_S of the sketch
  int max_retries = 3;
};

struct RFactor {
  DenseMatrix r;
  ConditioningReport report;
  SketchSpec used_spec;  // seed actually used after retries
  int attempts = 1;
};

/// R from the QR of S A. Retries with seed+1 when S A is rank deficient.
RFactor compute_R(const DenseMatrix& a, SketchSpec spec, const ComputeROptions& opts = {});

/// U = A R^-1 via triangular solves.
DenseMatrix well_conditioned_basis(const DenseMatrix& a, const DenseMatrix& r);

/// kappa_S * d^max(1/2, 1/p) * s^|1/p - 1/2|.
double conditioning_bound(int p, double kappa_s, double d, double s);

}  // namespace pwsgd
