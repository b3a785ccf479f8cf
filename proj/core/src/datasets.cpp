#include "pwsgd/datasets.hpp"

#include "pwsgd/error.hpp"
#include "pwsgd/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

namespace pwsgd {

namespace {

Vector gaussian_vector(Index n, Rng& rng, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

DenseMatrix random_orthonormal(Index rows, Index cols, Rng& rng) {
  return qr_factorize(gaussian_matrix(rows, cols, rng)).q;
}

Vector geometric(Index d, double top) {
  Vector g(d);
  for (Index i = 0; i < d; ++i) g(i) = d == 1 ? 1.0 : std::pow(top, static_cast<double>(i) / static_cast<double>(d - 1));
  return g;
}

}  // namespace

Dataset gen_synthetic1(Index n, Index d, Index num_spikes, std::uint64_t seed, double cond, double noise_sigma) {
  if (d < 1 || n <= d) throw InvalidArgument("gen_synthetic1: need n > d >= 1");
  if (num_spikes < 0 || num_spikes >= n) throw InvalidArgument("gen_synthetic1: need 0 <= num_spikes < n");
  if (!(cond >= 1.0)) throw InvalidArgument("gen_synthetic1: cond must be >= 1");
  Rng rng(seed);
  DenseMatrix base = gaussian_matrix(n, d, rng);
  std::vector<Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::shuffle(rows.begin(), rows.end(), rng);
  for (Index k = 0; k < num_spikes; ++k) {
    base.row(rows[k]).setZero();
    base(rows[k], k % d) = 20.0;
  }
  const DenseMatrix q = random_orthonormal(d, d, rng);
  std::vector<Index> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  auto mixed = [&](double spread) -> DenseMatrix {
    const Vector g = geometric(d, spread);
    Vector col(d);
    for (Index j = 0; j < d; ++j) col(j) = g(perm[j]);
    const DenseMatrix m = q * g.asDiagonal() * q.transpose() * col.asDiagonal();
    return base * m;
  };

  DenseMatrix a = base;
  if (cond > 1.0 && spectral_condition(base) < cond) {
    // spread s = cond^t; bisection on t so that kappa(A) hits cond.
    double lo = 0.0;
    double hi = 1.0;
    while (spectral_condition(mixed(std::pow(cond, hi))) < cond && hi < 64.0) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (spectral_condition(mixed(std::pow(cond, mid))) < cond) lo = mid;
      else hi = mid;
    }
    a = mixed(std::pow(cond, 0.5 * (lo + hi)));
  }
  Dataset ds;
  ds.x_true = gaussian_vector(d, rng);
  ds.b = a * ds.x_true + gaussian_vector(n, rng, noise_sigma);
  ds.a = std::move(a);
  return ds;
}

double synthetic2_q(Index d, double kappa_bar_sq) {
  const auto dd = static_cast<double>(d);
  if (!(kappa_bar_sq >= dd)) throw InvalidArgument("gen_synthetic2: kappa_bar_sq must be >= d");
  // sum (1 + i q)^2 = d + 2 q S1 + q^2 S2 with S1 = sum i, S2 = sum i^2 over i < d.
  const double s1 = dd * (dd - 1.0) / 2.0;
  const double s2 = (dd - 1.0) * dd * (2.0 * dd - 1.0) / 6.0;
  const double c = dd - kappa_bar_sq;
  if (s2 == 0.0) return 0.0;
  const double disc = s1 * s1 - s2 * c;
  return (-s1 + std::sqrt(disc)) / s2;
}

Synthetic2Factors synthetic2_factors(Index n, Index d, std::uint64_t shared_seed) {
  Rng shared(shared_seed);
  Synthetic2Factors f;
  f.u = random_orthonormal(n, d, shared);
  f.v = random_orthonormal(d, d, shared);
  return f;
}

Dataset gen_synthetic2(Index n, Index d, double kappa_bar_sq, std::uint64_t shared_seed, double noise_sigma,
                       std::uint64_t data_seed) {
  if (d < 1 || n <= d) throw InvalidArgument("gen_synthetic2: need n > d >= 1");
  const double q = synthetic2_q(d, kappa_bar_sq);
  const Synthetic2Factors f = synthetic2_factors(n, d, shared_seed);
  Vector sigma(d);
  for (Index i = 0; i < d; ++i) sigma(i) = 1.0 + static_cast<double>(i) * q;
  Dataset ds;
  ds.a = f.u * sigma.asDiagonal() * f.v.transpose();
  Rng rng(data_seed);
  ds.x_true = gaussian_vector(d, rng);
  ds.b = ds.a * ds.x_true + gaussian_vector(n, rng, noise_sigma);
  return ds;
}

Dataset gen_sparse_regression(Index n, Index d, Index sparsity, std::uint64_t seed, double noise_sigma) {
  if (d < 1 || n < 1) throw InvalidArgument("gen_sparse_regression: need n, d >= 1");
  if (sparsity < 0 || sparsity > d) throw InvalidArgument("gen_sparse_regression: sparsity must lie in [0, d]");
  Rng rng(seed);
  Dataset ds;
  ds.a = gaussian_matrix(n, d, rng);
  std::vector<Index> support(static_cast<std::size_t>(d));
  std::iota(support.begin(), support.end(), Index{0});
  std::shuffle(support.begin(), support.end(), rng);
  ds.x_true = Vector::Zero(d);
  std::normal_distribution<double> normal;
  for (Index k = 0; k < sparsity; ++k) ds.x_true(support[k]) = normal(rng);
  ds.b = ds.a * ds.x_true + gaussian_vector(n, rng, noise_sigma);
  return ds;
}

Dataset load_csv_dataset(const std::string& path, Index response_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  const DenseMatrix m = read_dense_csv(in);
  if (m.rows() == 0) throw ParseError("dataset '" + path + "' has no data rows");
  if (response_column < 0 || response_column >= m.cols()) {
    throw InvalidArgument("dataset '" + path + "': response column " + std::to_string(response_column) +
                          " out of range for " + std::to_string(m.cols()) + " columns");
  }
  if (m.cols() < 2) throw InvalidArgument("dataset '" + path + "': need at least one feature column");
  Dataset ds;
  ds.b = m.col(response_column);
  ds.a.resize(m.rows(), m.cols() - 1);
  for (Index j = 0, c = 0; j < m.cols(); ++j) {
    if (j != response_column) ds.a.col(c++) = m.col(j);
  }
  return ds;
}

}  // namespace pwsgd
