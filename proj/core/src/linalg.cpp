#include "pwsgd/linalg.hpp"

#include "pwsgd/error.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace pwsgd {

namespace {

void check_rank(const DenseMatrix& r, double scale) {
  const double tol = 1e-12 * scale;
  for (Index i = 0; i < r.rows(); ++i) {
    if (!(std::abs(r(i, i)) >= tol) || scale == 0.0) {
      throw SingularMatrixError("qr_factorize: rank deficient input, |R(" + std::to_string(i) + "," +
                                std::to_string(i) + ")| below tolerance");
    }
  }
}

void check_shape(const DenseMatrix& m) {
  if (m.rows() < m.cols() || m.cols() == 0) {
    throw InvalidArgument("qr_factorize: need rows >= cols >= 1");
  }
  if (!m.allFinite()) throw InvalidArgument("qr_factorize: non-finite entries");
}

}  // namespace

QrResult qr_factorize(const DenseMatrix& m) {
  check_shape(m);
  const Index n = m.rows();
  const Index d = m.cols();
  Eigen::HouseholderQR<DenseMatrix> qr(m);
  DenseMatrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  check_rank(r, m.cwiseAbs().maxCoeff());
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n, d);
  for (Index i = 0; i < d; ++i) {
    if (r(i, i) < 0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  return {std::move(q), std::move(r)};
}

DenseMatrix qr_r_factor(const DenseMatrix& m) {
  check_shape(m);
  const Index d = m.cols();
  Eigen::HouseholderQR<DenseMatrix> qr(m);
  DenseMatrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  check_rank(r, m.cwiseAbs().maxCoeff());
  for (Index i = 0; i < d; ++i) {
    if (r(i, i) < 0) r.row(i) *= -1.0;
  }
  return r;
}

double elementwise_p_norm(const DenseMatrix& m, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("elementwise_p_norm: p must be >= 1");
  if (m.size() == 0) return 0.0;
  if (p == 1.0) return m.cwiseAbs().sum();
  if (p == 2.0) return m.norm();
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return scale * std::pow((m.cwiseAbs() / scale).array().pow(p).sum(), 1.0 / p);
}

Vector singular_values(const DenseMatrix& m) {
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues();
}

double spectral_condition(const DenseMatrix& m) {
  const Vector s = singular_values(m);
  if (s.size() == 0) throw InvalidArgument("spectral_condition: empty matrix");
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

ConditioningReport l2_conditioning(const DenseMatrix& u) {
  if (u.rows() < u.cols() || u.cols() == 0) {
    throw InvalidArgument("l2_conditioning: need rows >= cols >= 1");
  }
  const Vector s = singular_values(u);
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smin > 1e-12 * smax)) throw SingularMatrixError("l2_conditioning: U^T U is singular");
  ConditioningReport rep;
  rep.alpha = u.norm();
  rep.beta = 1.0 / smin;
  rep.kappa_bar = rep.alpha * rep.beta;
  rep.kappa = smax / smin;
  return rep;
}

double kappa_hat(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("kappa_hat: matrix must be square");
  Eigen::PartialPivLU<DenseMatrix> lu(m);
  if (!(std::abs(lu.determinant()) > 0.0)) throw SingularMatrixError("kappa_hat: singular matrix");
  const DenseMatrix inv = lu.inverse();
  return m.cwiseAbs().sum() * inv.cwiseAbs().sum();
}

Vector random_unit_direction(Index d, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector x(d);
  double nrm = 0.0;
  do {
    for (Index j = 0; j < d; ++j) x(j) = normal(rng);
    nrm = x.norm();
  } while (nrm == 0.0);
  return x / nrm;
}

DenseMatrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix g(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) g(i, j) = normal(rng);
  }
  return g;
}

DistortionProbe l1_distortion_probe(const DenseMatrix& a, const DenseMatrix& b, Index num_dirs,
                                    std::uint64_t seed) {
  if (a.cols() != b.cols()) throw InvalidArgument("l1_distortion_probe: column counts differ");
  if (num_dirs < 1) throw InvalidArgument("l1_distortion_probe: num_dirs must be >= 1");
  Rng rng(seed);
  DistortionProbe out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index k = 0; k < num_dirs; ++k) {
    const Vector x = random_unit_direction(a.cols(), rng);
    const double den = (a * x).lpNorm<1>();
    if (den == 0.0) {
      ++out.skipped;
      continue;
    }
    const double ratio = (b * x).lpNorm<1>() / den;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (out.skipped == num_dirs) {
    throw InvalidArgument("l1_distortion_probe: ||Ax||_1 = 0 for every sampled direction");
  }
  out.min_ratio = lo;
  out.max_ratio = hi;
  return out;
}

}  // namespace pwsgd
