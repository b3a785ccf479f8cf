#include "pwsgd/sketch.hpp"

#include "pwsgd/error.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace pwsgd {

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::gaussian: return "gaussian";
    case SketchKind::srht: return "srht";
    case SketchKind::sparse_l2: return "sparse_l2";
    case SketchKind::dense_cauchy: return "dense_cauchy";
    case SketchKind::sparse_cauchy: return "sparse_cauchy";
    case SketchKind::recip_exp: return "recip_exp";
  }
  return "unknown";
}

SketchKind sketch_kind_from_string(const std::string& name) {
  for (auto k : {SketchKind::gaussian, SketchKind::srht, SketchKind::sparse_l2, SketchKind::dense_cauchy,
                 SketchKind::sparse_cauchy, SketchKind::recip_exp}) {
    if (to_string(k) == name) return k;
  }
  if (name == "count_sketch") return SketchKind::sparse_l2;
  throw InvalidArgument("unknown sketch kind '" + name + "'");
}

int native_norm(SketchKind kind) {
  switch (kind) {
    case SketchKind::gaussian:
    case SketchKind::srht:
    case SketchKind::sparse_l2: return 2;
    default: return 1;
  }
}

SketchSpec SketchSpec::make(SketchKind kind, Index sketch_rows, std::uint64_t seed) {
  SketchSpec s;
  s.kind = kind;
  s.sketch_rows = sketch_rows;
  s.seed = seed;
  s.target_norm = native_norm(kind);
  return s;
}

Index default_sketch_rows(SketchKind kind, Index d) {
  return native_norm(kind) == 2 ? std::max<Index>(8 * d, 50) : std::max<Index>(8 * d, 100);
}

void validate(const SketchSpec& spec) {
  if (spec.sketch_rows < 1) throw InvalidArgument("sketch: sketch_rows must be >= 1");
  if (spec.target_norm != native_norm(spec.kind)) {
    throw InvalidArgument("sketch: kind '" + to_string(spec.kind) + "' is not an l" +
                          std::to_string(spec.target_norm) + " sketch");
  }
}

double standard_cauchy(Rng& rng) {
  double u = 0.0;
  while (u == 0.0) u = std::generate_canonical<double, 53>(rng);
  return std::tan(std::numbers::pi * (u - 0.5));
}

void fwht(double* data, Index len, Index stride) {
  for (Index h = 1; h < len; h *= 2) {
    for (Index i = 0; i < len; i += 2 * h) {
      for (Index j = i; j < i + h; ++j) {
        const double x = data[j * stride];
        const double y = data[(j + h) * stride];
        data[j * stride] = x + y;
        data[(j + h) * stride] = x - y;
      }
    }
  }
}

namespace {

bool is_hashed(SketchKind k) {
  return k == SketchKind::sparse_l2 || k == SketchKind::sparse_cauchy || k == SketchKind::recip_exp;
}

// One nonzero per column of S: bucket then value, drawn column by column.
struct HashedColumn {
  Index bucket;
  double value;
};

HashedColumn draw_hashed(SketchKind kind, Index s, Rng& rng) {
  std::uniform_int_distribution<Index> bucket(0, s - 1);
  HashedColumn c{bucket(rng), 0.0};
  switch (kind) {
    case SketchKind::sparse_l2: {
      std::bernoulli_distribution coin(0.5);
      c.value = coin(rng) ? 1.0 : -1.0;
      break;
    }
    case SketchKind::sparse_cauchy: c.value = standard_cauchy(rng); break;
    case SketchKind::recip_exp: {
      std::bernoulli_distribution coin(0.5);
      const double sign = coin(rng) ? 1.0 : -1.0;
      std::exponential_distribution<double> expo(1.0);
      double u = 0.0;
      while (u == 0.0) u = expo(rng);
      c.value = sign / u;
      break;
    }
    default: throw InvalidArgument("sketch: not a hashed kind");
  }
  return c;
}

// Column i of a dense S (gaussian or dense Cauchy).
void draw_dense_column(SketchKind kind, Index s, Rng& rng, double* out) {
  if (kind == SketchKind::gaussian) {
    std::normal_distribution<double> normal;
    const double scale = 1.0 / std::sqrt(static_cast<double>(s));
    for (Index r = 0; r < s; ++r) out[r] = normal(rng) * scale;
  } else {
    for (Index r = 0; r < s; ++r) out[r] = standard_cauchy(rng);
  }
}

Index padded_length(Index n) {
  if (n > (Index{1} << 40)) throw InvalidArgument("srht: n exceeds the addressable padded size");
  return static_cast<Index>(std::bit_ceil(static_cast<std::uint64_t>(n)));
}

struct SrhtDraw {
  Index n_pad;
  std::vector<double> signs;
  std::vector<Index> rows;
};

SrhtDraw draw_srht(Index s, Index n, Rng& rng) {
  SrhtDraw d;
  d.n_pad = padded_length(n);
  if (s > d.n_pad) throw InvalidArgument("srht: sketch_rows exceeds padded length");
  std::bernoulli_distribution coin(0.5);
  d.signs.resize(static_cast<std::size_t>(n));
  for (auto& v : d.signs) v = coin(rng) ? 1.0 : -1.0;
  std::vector<Index> perm(static_cast<std::size_t>(d.n_pad));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index k = 0; k < s; ++k) {
    std::uniform_int_distribution<Index> pick(k, d.n_pad - 1);
    std::swap(perm[k], perm[pick(rng)]);
  }
  d.rows.assign(perm.begin(), perm.begin() + s);
  return d;
}

template <class RowAccess>
DenseMatrix apply_srht(const SketchSpec& spec, Index n, Index d, RowAccess&& scatter_rows) {
  Rng rng(spec.seed);
  const SrhtDraw draw = draw_srht(spec.sketch_rows, n, rng);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(draw.n_pad, d);  // column-major for the transform
  scatter_rows(y, draw.signs);
  for (Index j = 0; j < d; ++j) fwht(y.col(j).data(), draw.n_pad);
  DenseMatrix out(spec.sketch_rows, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.sketch_rows));
  for (Index k = 0; k < spec.sketch_rows; ++k) out.row(k) = y.row(draw.rows[k]) * scale;
  return out;
}

}  // namespace

SketchOperator materialize_sketch(const SketchSpec& spec, Index n) {
  validate(spec);
  if (n < 1) throw InvalidArgument("materialize_sketch: n must be >= 1");
  const Index s = spec.sketch_rows;
  Rng rng(spec.seed);
  if (is_hashed(spec.kind)) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      const auto c = draw_hashed(spec.kind, s, rng);
      trips.emplace_back(c.bucket, i, c.value);
    }
    SparseMatrix m(s, n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
  }
  if (spec.kind == SketchKind::srht) {
    const SrhtDraw draw = draw_srht(s, n, rng);
    DenseMatrix m(s, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(s));
    for (Index k = 0; k < s; ++k) {
      const auto row = static_cast<std::uint64_t>(draw.rows[k]);
      for (Index i = 0; i < n; ++i) {
        const int parity = std::popcount(row & static_cast<std::uint64_t>(i)) & 1;
        m(k, i) = (parity ? -1.0 : 1.0) * draw.signs[i] * scale;
      }
    }
    return m;
  }
  DenseMatrix m(s, n);
  std::vector<double> col(static_cast<std::size_t>(s));
  for (Index i = 0; i < n; ++i) {
    draw_dense_column(spec.kind, s, rng, col.data());
    for (Index r = 0; r < s; ++r) m(r, i) = col[r];
  }
  return m;
}

DenseMatrix apply_sketch(const SketchSpec& spec, const DenseMatrix& a) {
  validate(spec);
  const Index n = a.rows();
  const Index d = a.cols();
  const Index s = spec.sketch_rows;
  if (n < 1) throw InvalidArgument("apply_sketch: empty input");
  if (spec.kind == SketchKind::srht) {
    return apply_srht(spec, n, d, [&](Eigen::MatrixXd& y, const std::vector<double>& signs) {
      for (Index i = 0; i < n; ++i) y.row(i) = a.row(i) * signs[i];
    });
  }
  Rng rng(spec.seed);
  DenseMatrix out = DenseMatrix::Zero(s, d);
  if (is_hashed(spec.kind)) {
    for (Index i = 0; i < n; ++i) {
      const auto c = draw_hashed(spec.kind, s, rng);
      out.row(c.bucket) += c.value * a.row(i);
    }
    return out;
  }
  Vector col(s);
  for (Index i = 0; i < n; ++i) {
    draw_dense_column(spec.kind, s, rng, col.data());
    out.noalias() += col * a.row(i);
  }
  return out;
}

DenseMatrix apply_sketch(const SketchSpec& spec, const SparseMatrix& a) {
  validate(spec);
  const Index n = a.rows();
  const Index d = a.cols();
  const Index s = spec.sketch_rows;
  if (n < 1) throw InvalidArgument("apply_sketch: empty input");
  if (spec.kind == SketchKind::srht) {
    return apply_srht(spec, n, d, [&](Eigen::MatrixXd& y, const std::vector<double>& signs) {
      for (Index i = 0; i < n; ++i) {
        for (SparseMatrix::InnerIterator it(a, i); it; ++it) y(i, it.col()) = it.value() * signs[i];
      }
    });
  }
  Rng rng(spec.seed);
  DenseMatrix out = DenseMatrix::Zero(s, d);
  if (is_hashed(spec.kind)) {
    for (Index i = 0; i < n; ++i) {
      const auto c = draw_hashed(spec.kind, s, rng);
      for (SparseMatrix::InnerIterator it(a, i); it; ++it) out(c.bucket, it.col()) += c.value * it.value();
    }
    return out;
  }
  Vector col(s);
  for (Index i = 0; i < n; ++i) {
    draw_dense_column(spec.kind, s, rng, col.data());
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) out.col(it.col()) += it.value() * col;
  }
  return out;
}

DistortionEstimate distortion_from_pair(const DenseMatrix& a, const DenseMatrix& sa, int norm, Index num_dirs,
                                        std::uint64_t seed) {
  if (a.cols() != sa.cols()) throw InvalidArgument("distortion: column counts differ");
  if (norm != 1 && norm != 2) throw InvalidArgument("distortion: norm must be 1 or 2");
  if (num_dirs < 1) throw InvalidArgument("distortion: num_dirs must be >= 1");
  Rng rng(seed);
  DistortionEstimate est;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index k = 0; k < num_dirs; ++k) {
    const Vector x = random_unit_direction(a.cols(), rng);
    const Vector ax = a * x;
    const double den = norm == 1 ? ax.lpNorm<1>() : ax.norm();
    if (den == 0.0) {
      ++est.skipped;
      continue;
    }
    const Vector sx = sa * x;
    const double ratio = (norm == 1 ? sx.lpNorm<1>() : sx.norm()) / den;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (est.skipped == num_dirs) throw InvalidArgument("distortion: ||Ax|| = 0 for every sampled direction");
  est.sigma_s = lo;
  est.kappa_s = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return est;
}

DistortionEstimate distortion_estimate(const SketchSpec& spec, const DenseMatrix& a, Index num_dirs,
                                       std::uint64_t seed) {
  return distortion_from_pair(a, apply_sketch(spec, a), spec.target_norm, num_dirs, seed);
}

}  // namespace pwsgd
