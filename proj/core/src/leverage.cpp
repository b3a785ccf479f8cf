#include "pwsgd/leverage.hpp"

#include "pwsgd/error.hpp"
#include "pwsgd/matrix_io.hpp"
#include "pwsgd/precondition.hpp"
#include "pwsgd/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace pwsgd {

SamplingDistribution SamplingDistribution::from_lambda(Vector lambda, double gamma) {
  if (lambda.size() == 0) throw InvalidArgument("sampling distribution: empty");
  if (!lambda.allFinite() || (lambda.array() < 0.0).any()) {
    throw InvalidArgument("sampling distribution: scores must be finite and nonnegative");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidArgument("sampling distribution: gamma must lie in [0, 1)");
  const double total = lambda.sum();
  if (!(total > 0.0)) throw InvalidArgument("sampling distribution: all scores are zero");
  SamplingDistribution dist;
  dist.probs = lambda / total;
  dist.lambda = std::move(lambda);
  dist.gamma = gamma;
  dist.cumulative.resize(static_cast<std::size_t>(dist.probs.size()));
  double acc = 0.0;
  for (Index i = 0; i < dist.probs.size(); ++i) {
    acc += dist.probs(i);
    dist.cumulative[i] = acc;
  }
  return dist;
}

SamplingDistribution exact_scores(const DenseMatrix& a, const DenseMatrix& r, int p) {
  if (p != 1 && p != 2) throw InvalidArgument("exact_scores: p must be 1 or 2");
  for (Index i = 0; i < r.rows(); ++i) {
    if (r(i, i) == 0.0) throw SingularMatrixError("exact_scores: singular R");
  }
  const DenseMatrix u = well_conditioned_basis(a, r);
  Vector lambda = p == 2 ? Vector(u.rowwise().squaredNorm()) : Vector(u.cwiseAbs().rowwise().sum());
  return SamplingDistribution::from_lambda(std::move(lambda), 0.0);
}

Index default_l2_probe_cols(Index n) {
  return std::max<Index>(1, static_cast<Index>(std::ceil(8.0 * std::log(static_cast<double>(n)))));
}

namespace {

// A R^-1 G computed as A (R^-1 G), so the n x d basis is never formed.
DenseMatrix project_basis(const DenseMatrix& a, const DenseMatrix& r, const DenseMatrix& g) {
  if (g.rows() != r.rows()) throw InvalidArgument("leverage probe: row count must equal d");
  const DenseMatrix rg = r.triangularView<Eigen::Upper>().solve(g);
  return a * rg;
}

}  // namespace

SamplingDistribution approx_scores_l2(const DenseMatrix& a, const DenseMatrix& r, Index num_probe_cols,
                                      std::uint64_t seed, double gamma, const std::optional<DenseMatrix>& probe) {
  if (num_probe_cols < 1) throw InvalidArgument("approx_scores_l2: num_probe_cols must be >= 1");
  DenseMatrix g;
  if (probe) {
    g = *probe;
  } else {
    Rng rng(seed);
    g = gaussian_matrix(r.rows(), num_probe_cols, rng);
  }
  const DenseMatrix proj = project_basis(a, r, g);
  Vector lambda = proj.rowwise().squaredNorm() / static_cast<double>(g.cols());
  return SamplingDistribution::from_lambda(std::move(lambda), gamma);
}

SamplingDistribution approx_scores_l1(const DenseMatrix& a, const DenseMatrix& r, Index num_probe_cols,
                                      std::uint64_t seed, double gamma) {
  if (num_probe_cols < 1) throw InvalidArgument("approx_scores_l1: num_probe_cols must be >= 1");
  Rng rng(seed);
  DenseMatrix c(r.rows(), num_probe_cols);
  for (Index i = 0; i < c.rows(); ++i) {
    for (Index j = 0; j < c.cols(); ++j) c(i, j) = standard_cauchy(rng);
  }
  const DenseMatrix proj = project_basis(a, r, c);
  Vector lambda(a.rows());
  std::vector<double> buf(static_cast<std::size_t>(num_probe_cols));
  const auto k = buf.size();
  for (Index i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < k; ++j) buf[j] = std::abs(proj(i, static_cast<Index>(j)));
    auto mid = buf.begin() + static_cast<std::ptrdiff_t>(k / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    double med = *mid;
    if (k % 2 == 0) med = 0.5 * (med + *std::max_element(buf.begin(), mid));
    lambda(i) = med;
  }
  return SamplingDistribution::from_lambda(std::move(lambda), gamma);
}

SamplingDistribution row_norm_distribution(const DenseMatrix& a) {
  if (a.size() == 0 || a.squaredNorm() == 0.0) throw InvalidArgument("row_norm_distribution: zero matrix");
  return SamplingDistribution::from_lambda(a.rowwise().squaredNorm(), 0.0);
}

SamplingDistribution uniform_distribution(Index n) {
  if (n < 1) throw InvalidArgument("uniform_distribution: n must be >= 1");
  return SamplingDistribution::from_lambda(Vector::Ones(n), 0.0);
}

Index sample_index(const SamplingDistribution& dist, Rng& rng) {
  const double total = dist.cumulative.back();
  const double u = std::generate_canonical<double, 53>(rng) * total;
  auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
  if (it == dist.cumulative.end()) {
    // u landed on the rounding edge; fall back to the last row with mass.
    Index i = dist.size() - 1;
    while (i > 0 && dist.probs(i) == 0.0) --i;
    return i;
  }
  return static_cast<Index>(it - dist.cumulative.begin());
}

void write_distribution_csv(const std::string& path, const SamplingDistribution& dist) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "index,lambda,prob\n" << std::setprecision(17);
  for (Index i = 0; i < dist.size(); ++i) out << i << ',' << dist.lambda(i) << ',' << dist.probs(i) << '\n';
}

SamplingDistribution read_distribution_csv(const std::string& path) {
  const DenseMatrix m = read_dense_csv(path);
  if (m.cols() != 3) throw ParseError("distribution csv: expected columns index,lambda,prob");
  return SamplingDistribution::from_lambda(m.col(1), 0.0);
}

}  // namespace pwsgd
