#include "pwsgd/coreset.hpp"

#include "pwsgd/error.hpp"
#include "pwsgd/leverage.hpp"
#include "pwsgd/matrix_io.hpp"
#include "pwsgd/precondition.hpp"
#include "pwsgd/rla.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace pwsgd {

SensitivityProfile sensitivity_upper_bounds(const DenseMatrix& a_aug, const DenseMatrix& r, int p) {
  if (p != 1 && p != 2) throw InvalidArgument("sensitivity_upper_bounds: p must be 1 or 2");
  const DenseMatrix u = well_conditioned_basis(a_aug, r);
  const auto n = static_cast<double>(a_aug.rows());
  SensitivityProfile prof;
  prof.p = p;
  Vector lambda;
  if (p == 2) {
    prof.beta = l2_conditioning(u).beta;
    lambda = u.rowwise().squaredNorm();
  } else {
    prof.beta = l1_beta(u);
    lambda = u.cwiseAbs().rowwise().sum();
  }
  prof.per_row_bound = (n * std::pow(prof.beta, p)) * lambda.array() + 1.0;
  prof.total = prof.per_row_bound.sum();
  return prof;
}

SensitivityProfile sensitivity_upper_bounds(const DenseMatrix& a_aug, int p, const SketchSpec& spec) {
  return sensitivity_upper_bounds(a_aug, compute_R(a_aug, spec).r, p);
}

namespace {

void update_lower(const DenseMatrix& a, const Vector& x, int p, Vector& best) {
  const Vector ax = a * x;
  const Vector f = p == 1 ? Vector(ax.cwiseAbs()) : Vector(ax.cwiseAbs2());
  const double total = f.sum();
  if (!(total > 0.0)) return;
  const double n = static_cast<double>(a.rows());
  best = best.cwiseMax(n * f / total);
}

}  // namespace

Vector sensitivity_lower_bounds(const DenseMatrix& a_aug, int p, Index num_dirs, std::uint64_t seed) {
  if (p != 1 && p != 2) throw InvalidArgument("sensitivity_lower_bounds: p must be 1 or 2");
  Vector best = Vector::Zero(a_aug.rows());
  Rng rng(seed);
  for (Index k = 0; k < num_dirs; ++k) update_lower(a_aug, random_unit_direction(a_aug.cols(), rng), p, best);
  const DenseMatrix gram = a_aug.transpose() * a_aug;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() == Eigen::Success) {
    for (Index i = 0; i < a_aug.rows(); ++i) {
      const Vector w = ldlt.solve(Vector(a_aug.row(i).transpose()));
      if (w.allFinite()) update_lower(a_aug, w, p, best);
    }
  }
  return best;
}

Coreset coreset_construct(const SensitivityProfile& profile, Index s, std::uint64_t seed) {
  if (s < 1) throw InvalidArgument("coreset_construct: s must be >= 1");
  const auto dist = SamplingDistribution::from_lambda(profile.per_row_bound);
  Rng rng(seed);
  Coreset cs;
  cs.indices.resize(static_cast<std::size_t>(s));
  cs.weights.resize(s);
  for (Index k = 0; k < s; ++k) {
    const Index i = sample_index(dist, rng);
    cs.indices[k] = i;
    cs.weights(k) = 1.0 / (static_cast<double>(s) * dist.probs(i));
  }
  return cs;
}

double weighted_cost(const DenseMatrix& a_aug, const Coreset& coreset, const Vector& x, int p) {
  double total = 0.0;
  for (std::size_t k = 0; k < coreset.indices.size(); ++k) {
    const double v = std::abs(a_aug.row(coreset.indices[k]).dot(x));
    total += coreset.weights(static_cast<Index>(k)) * (p == 1 ? v : v * v);
  }
  return total;
}

double full_cost(const DenseMatrix& a_aug, const Vector& x, int p) {
  const Vector ax = a_aug * x;
  return p == 1 ? ax.lpNorm<1>() : ax.squaredNorm();
}

Index coreset_sample_size(double total_sensitivity, double eps, double delta, Index dim, double c) {
  if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0)) throw InvalidArgument("coreset_sample_size: bad eps or delta");
  const double s = c * total_sensitivity / (eps * eps) * (static_cast<double>(dim) + std::log(1.0 / delta));
  return static_cast<Index>(std::ceil(s));
}

void write_coreset_csv(const std::string& path, const Coreset& coreset) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "index,weight\n" << std::setprecision(17);
  for (std::size_t k = 0; k < coreset.indices.size(); ++k) {
    out << coreset.indices[k] << ',' << coreset.weights(static_cast<Index>(k)) << '\n';
  }
}

Coreset read_coreset_csv(const std::string& path) {
  const DenseMatrix m = read_dense_csv(path);
  if (m.rows() > 0 && m.cols() != 2) throw ParseError("coreset csv: expected columns index,weight");
  Coreset cs;
  cs.indices.resize(static_cast<std::size_t>(m.rows()));
  cs.weights.resize(m.rows());
  for (Index k = 0; k < m.rows(); ++k) {
    cs.indices[k] = static_cast<Index>(m(k, 0));
    cs.weights(k) = m(k, 1);
  }
  return cs;
}

Vector HingeConstruction::witness(Index i) const {
  Vector x(d);
  for (Index j = 0; j < d; ++j) x(j) = static_cast<double>(scaled_witnesses[i][j]) / static_cast<double>(d);
  return x;
}

bool HingeConstruction::verify() const {
  for (std::size_t w = 0; w < scaled_witnesses.size(); ++w) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      long long dot = 0;  // d * (a_i . x_w)
      for (Index j = 0; j < d; ++j) dot += rows[i][j] * scaled_witnesses[w][j];
      const long long hinge = dot > 0 ? dot : 0;
      if (i == w && hinge != d) return false;  // f_w(x_w) = 1
      if (i != w && hinge != 0) return false;  // f_i(x_w) = 0
    }
  }
  return true;
}

HingeConstruction hinge_sensitivity_construction(Index d) {
  if (d < 2 || d % 2 != 0) throw InvalidArgument("hinge construction: d must be even and >= 2");
  if (d > 12) throw InvalidArgument("hinge construction: d must be <= 12");
  HingeConstruction hc;
  hc.d = d;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    if (std::popcount(mask) != d / 2) continue;
    std::vector<int> row(static_cast<std::size_t>(d));
    std::vector<long long> wit(static_cast<std::size_t>(d));
    for (Index j = 0; j < d; ++j) {
      const bool on = (mask >> j) & 1u;
      row[j] = on ? 1 : 0;
      wit[j] = on ? 2 : -static_cast<long long>(d) * d;
    }
    hc.rows.push_back(std::move(row));
    hc.scaled_witnesses.push_back(std::move(wit));
  }
  return hc;
}

}  // namespace pwsgd
