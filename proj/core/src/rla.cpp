#include "pwsgd/rla.hpp"

#include "pwsgd/error.hpp"
#include "pwsgd/precondition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pwsgd {

Vector direct_ls_solve(const DenseMatrix& a, const Vector& b) {
  if (a.rows() != b.size()) throw InvalidArgument("direct_ls_solve: dimension mismatch");
  const QrResult qr = qr_factorize(a);
  const Vector qtb = qr.q.transpose() * b;
  return qr.r.triangularView<Eigen::Upper>().solve(qtb);
}

Vector constrained_ls_solve(const DenseMatrix& a, const Vector& b, double radius) {
  const Vector x_ls = direct_ls_solve(a, b);
  if (x_ls.lpNorm<1>() <= radius) return x_ls;
  const DenseMatrix gram = a.transpose() * a;
  const Vector c = -(a.transpose() * b);
  const double lmax = singular_values(gram)(0);
  auto q = [&](const Vector& v) { return Vector(gram * v); };
  return l1_ball_qp(q, c, radius, lmax, project_l1_ball(x_ls, radius), 1e-12, 200000).x;
}

namespace {

double l1_obj(const DenseMatrix& a, const Vector& b, const Vector& x) { return (a * x - b).lpNorm<1>(); }

// Weighted least squares via QR of diag(sqrt(w)) A.
Vector weighted_ls(const DenseMatrix& a, const Vector& b, const Vector& w) {
  const Vector sw = w.cwiseSqrt();
  const DenseMatrix wa = sw.asDiagonal() * a;
  return wa.colPivHouseholderQr().solve(Vector(sw.cwiseProduct(b)));
}

// argmin_t sum_i |r_i + t s_i|: weighted median of -r_i/s_i with weights |s_i|.
double weighted_median_step(const Vector& r, const Vector& s, Index* arg) {
  std::vector<std::pair<double, Index>> pts;
  double total = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    if (s(i) == 0.0) continue;
    pts.emplace_back(-r(i) / s(i), i);
    total += std::abs(s(i));
  }
  if (pts.empty()) {
    *arg = -1;
    return 0.0;
  }
  std::sort(pts.begin(), pts.end());
  double acc = 0.0;
  for (const auto& [t, i] : pts) {
    acc += std::abs(s(i));
    if (acc >= 0.5 * total) {
      *arg = i;
      return t;
    }
  }
  *arg = pts.back().second;
  return pts.back().first;
}

// Rows with the smallest |r| that form an invertible basis.
std::vector<Index> pick_basis(const DenseMatrix& a, const Vector& r) {
  const Index n = a.rows();
  const Index d = a.cols();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index i, Index j) { return std::abs(r(i)) < std::abs(r(j)); });
  std::vector<Index> basis;
  DenseMatrix q(d, d);  // orthonormal rows spanning the chosen rows so far
  const double scale = a.cwiseAbs().maxCoeff();
  for (Index i : order) {
    Vector v = a.row(i).transpose();
    for (std::size_t k = 0; k < basis.size(); ++k) v -= q.row(static_cast<Index>(k)).dot(v) * q.row(static_cast<Index>(k)).transpose();
    const double nrm = v.norm();
    if (nrm > 1e-9 * std::max(scale, a.row(i).norm())) {
      q.row(static_cast<Index>(basis.size())) = v.transpose() / nrm;
      basis.push_back(i);
      if (static_cast<Index>(basis.size()) == d) break;
    }
  }
  return basis;
}

// Simplex-style descent over vertices of the l1 objective.
Vector vertex_polish(const DenseMatrix& a, const Vector& b, const Vector& x_start, Index* moves) {
  const Index d = a.cols();
  Vector r = a * x_start - b;
  std::vector<Index> basis = pick_basis(a, r);
  if (static_cast<Index>(basis.size()) < d) return x_start;
  DenseMatrix ab(d, d);
  Vector bb(d);
  for (Index k = 0; k < d; ++k) {
    ab.row(k) = a.row(basis[k]);
    bb(k) = b(basis[k]);
  }
  Eigen::PartialPivLU<DenseMatrix> lu(ab);
  Vector x = lu.solve(bb);
  r = a * x - b;
  double f = r.lpNorm<1>();
  Index count = 0;
  const Index max_moves = 50 * (d + 1) * std::max<Index>(10, static_cast<Index>(std::log2(a.rows() + 1.0)));
  bool improved = true;
  while (improved && count < max_moves) {
    improved = false;
    const DenseMatrix inv = lu.inverse();
    for (Index j = 0; j < d && count < max_moves; ++j) {
      const Vector dir = inv.col(j);
      const Vector s = a * dir;
      Index arg = -1;
      const double t = weighted_median_step(r, s, &arg);
      if (arg < 0 || t == 0.0) continue;
      const Vector x_new = x + t * dir;
      const Vector r_new = a * x_new - b;
      const double f_new = r_new.lpNorm<1>();
      if (f_new < f * (1.0 - 1e-15) - 1e-300) {
        DenseMatrix ab_new = ab;
        ab_new.row(j) = a.row(arg);
        Eigen::PartialPivLU<DenseMatrix> lu_new(ab_new);
        if (!(std::abs(lu_new.determinant()) > 0.0)) continue;
        ab = ab_new;
        bb(j) = b(arg);
        basis[j] = arg;
        lu = lu_new;
        x = lu.solve(bb);
        r = a * x - b;
        f = r.lpNorm<1>();
        ++count;
        improved = true;
        break;
      }
    }
  }
  *moves = count;
  return x;
}

}  // namespace

Vector irls_l1_solve(const DenseMatrix& a, const Vector& b, double tol, Index max_iters, L1SolveInfo* info) {
  const Index n = a.rows();
  const Index d = a.cols();
  if (b.size() != n) throw InvalidArgument("irls_l1_solve: dimension mismatch");
  if (n < d || d == 0) throw InvalidArgument("irls_l1_solve: need rows >= cols >= 1");
  L1SolveInfo local;
  Vector x = direct_ls_solve(a, b);
  Vector r = a * x - b;
  double f = r.lpNorm<1>();
  const double scale = std::max({b.cwiseAbs().maxCoeff(), (a * x).cwiseAbs().maxCoeff(), 1e-300});
  double delta = std::max(r.cwiseAbs().mean(), 1e-10 * scale);
  const double delta_min = 1e-10 * scale;
  Index it = 0;
  Index in_phase = 0;
  bool done = false;
  for (; it < max_iters && !done; ++it) {
    const Vector w = r.cwiseAbs().cwiseMax(delta).cwiseInverse();
    const Vector x_new = weighted_ls(a, b, w);
    const Vector r_new = a * x_new - b;
    const double f_new = r_new.lpNorm<1>();
    if (!std::isfinite(f_new)) throw ConvergenceError("irls_l1_solve: non-finite iterate");
    const bool stalled = std::abs(f - f_new) <= tol * std::max(f, 1e-300) || ++in_phase >= 50;
    x = x_new;
    r = r_new;
    f = f_new;
    if (stalled) {
      if (delta <= delta_min) done = true;
      delta = std::max(delta * 0.1, delta_min);
      in_phase = 0;
    }
  }
  if (!done) {
    throw ConvergenceError("irls_l1_solve: no convergence after " + std::to_string(max_iters) + " iterations");
  }
  local.irls_iterations = it;
  Index moves = 0;
  const Vector xp = vertex_polish(a, b, x, &moves);
  const double fp = l1_obj(a, b, xp);
  if (fp < f) {
    x = xp;
    f = fp;
    local.polished = true;
    local.polish_moves = moves;
  }
  local.objective = f;
  if (info) *info = local;
  return x;
}

double l1_beta(const DenseMatrix& u) {
  const Index d = u.cols();
  if (d == 0) throw InvalidArgument("l1_beta: empty basis");
  double worst = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < d; ++j) {
    double m = 0.0;
    if (d == 1) {
      m = u.col(0).lpNorm<1>();
    } else {
      DenseMatrix rest(u.rows(), d - 1);
      for (Index k = 0, c = 0; k < d; ++k) {
        if (k != j) rest.col(c++) = u.col(k);
      }
      const Vector target = -u.col(j);
      const Vector z = irls_l1_solve(rest, target);
      m = (rest * z - target).lpNorm<1>();
    }
    worst = std::min(worst, m);
  }
  if (!(worst > 0.0)) throw SingularMatrixError("l1_beta: basis is rank deficient");
  return 1.0 / worst;
}

DenseMatrix augment(const DenseMatrix& a, const Vector& b) {
  if (a.rows() != b.size()) throw InvalidArgument("augment: dimension mismatch");
  DenseMatrix out(a.rows(), a.cols() + 1);
  out.leftCols(a.cols()) = a;
  out.col(a.cols()) = b;
  return out;
}

SamplingDistribution augmented_distribution(const DenseMatrix& a, const Vector& b, int p, const SketchSpec& spec) {
  const DenseMatrix ab = augment(a, b);
  const RFactor rf = compute_R(ab, spec);
  return exact_scores(ab, rf.r, p);
}

SampledProblem scaled_rows(const DenseMatrix& a, const Vector& b, const SamplingDistribution& dist,
                           const std::vector<Index>& indices, int p) {
  const Index m = static_cast<Index>(indices.size());
  SampledProblem out{DenseMatrix(m, a.cols()), Vector(m), indices};
  for (Index k = 0; k < m; ++k) {
    const Index i = indices[k];
    const double w = p == 2 ? 1.0 / std::sqrt(dist.probs(i)) : 1.0 / dist.probs(i);
    out.sa.row(k) = w * a.row(i);
    out.sb(k) = w * b(i);
  }
  return out;
}

SampledProblem rla_sample(const DenseMatrix& a, const Vector& b, const SamplingDistribution& dist, Index s,
                          std::uint64_t seed, int p) {
  Rng rng(seed);
  std::vector<Index> idx(static_cast<std::size_t>(s));
  for (auto& i : idx) i = sample_index(dist, rng);
  return scaled_rows(a, b, dist, idx, p);
}

Vector rla_sampling_solve(const DenseMatrix& a, const Vector& b, const SamplingDistribution& dist, Index s,
                          std::uint64_t seed, const RlaOptions& opts) {
  if (s < 1) throw InvalidArgument("rla_sampling_solve: s must be >= 1");
  if (opts.p != 1 && opts.p != 2) throw InvalidArgument("rla_sampling_solve: p must be 1 or 2");
  if (dist.size() != a.rows()) throw InvalidArgument("rla_sampling_solve: distribution size mismatch");
  if (opts.p == 1 && opts.constraint.active()) {
    throw InvalidArgument("rla_sampling_solve: constrained l1 subproblems are not supported");
  }
  const Index d = a.cols();
  for (int attempt = 0;; ++attempt) {
    const SampledProblem sub = opts.index_hook
                                   ? scaled_rows(a, b, dist, opts.index_hook(attempt), opts.p)
                                   : rla_sample(a, b, dist, s, seed + static_cast<std::uint64_t>(attempt), opts.p);
    const DenseMatrix& sa = sub.sa;
    const Vector& sb = sub.sb;
    const Index m = sa.rows();
    try {
      if (m < d) throw SingularMatrixError("rla_sampling_solve: fewer samples than columns");
      if (opts.p == 1) return irls_l1_solve(sa, sb);
      if (opts.constraint.active()) return constrained_ls_solve(sa, sb, opts.constraint.radius);
      return direct_ls_solve(sa, sb);
    } catch (const SingularMatrixError&) {
      if (attempt >= opts.max_retries) {
        throw SingularMatrixError("rla_sampling_solve: sampled subproblem rank deficient after " +
                                  std::to_string(attempt + 1) + " attempts");
      }
    }
  }
}

Index sampling_size_bound(int p, double alpha, double beta, double gamma, double eps, double delta, Index d) {
  if (p != 1 && p != 2) throw InvalidArgument("sampling_size_bound: p must be 1 or 2");
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("sampling_size_bound: eps must lie in (0, 1/2)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("sampling_size_bound: delta must lie in (0, 1)");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidArgument("sampling_size_bound: gamma must lie in [0, 1)");
  const double s = (1.0 + gamma) / (1.0 - gamma) * std::pow(32.0 * alpha * beta, p) / (p * p * eps * eps) *
                   ((static_cast<double>(d) + 1.0) * std::log(12.0 / eps) + std::log(2.0 / delta));
  return static_cast<Index>(std::ceil(s));
}

}  // namespace pwsgd
