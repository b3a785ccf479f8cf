#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <limits>
#include <random>

namespace pwsgd {

using Index = Eigen::Index;
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct QrResult {
  DenseMatrix q;  // n x d, orthonormal columns
  DenseMatrix r;  // d x d, upper triangular, positive diagonal
};

/// Thin Householder QR normalized so that diag(R) > 0.
/// Throws SingularMatrixError when some |R_ii| < 1e-12 * max|M|.
QrResult qr_factorize(const DenseMatrix& m);

/// Same normalization as qr_factorize but skips forming Q.
DenseMatrix qr_r_factor(const DenseMatrix& m);

/// (sum_ij |M_ij|^p)^(1/p).
double elementwise_p_norm(const DenseMatrix& m, double p);

struct ConditioningReport {
  double alpha = kNaN;
  double beta = kNaN;
  double kappa_bar = kNaN;
  double kappa = kNaN;
  double kappa_hat = kNaN;
  double sketch_distortion = kNaN;
  Index sketch_rows = 0;
};

/// alpha = |U|_F, beta = sqrt(||(U^T U)^-1||_2), kappa = sigma_max / sigma_min.
ConditioningReport l2_conditioning(const DenseMatrix& u);

/// Singular values in decreasing order.
Vector singular_values(const DenseMatrix& m);

/// sigma_max / sigma_min; infinity for rank-deficient input.
double spectral_condition(const DenseMatrix& m);

/// |M|_1 * |M^-1|_1 with elementwise 1-norms, for square invertible M.
double kappa_hat(const DenseMatrix& m);

struct DistortionProbe {
  double min_ratio = kNaN;
  double max_ratio = kNaN;
  Index skipped = 0;
};

/// min/max of ||Bx||_1 / ||Ax||_1 over num_dirs random unit directions.
DistortionProbe l1_distortion_probe(const DenseMatrix& a, const DenseMatrix& b, Index num_dirs,
                                    std::uint64_t seed);

/// Uniform direction on the unit sphere in R^d.
Vector random_unit_direction(Index d, Rng& rng);

DenseMatrix gaussian_matrix(Index rows, Index cols, Rng& rng);

}  // namespace pwsgd
