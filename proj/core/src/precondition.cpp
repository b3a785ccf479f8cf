#include "pwsgd/precondition.hpp"

#include "pwsgd/error.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace pwsgd {

std::string to_string(FMode mode) {
  switch (mode) {
    case FMode::full: return "full";
    case FMode::diag: return "diag";
    case FMode::noco: return "noco";
  }
  return "unknown";
}

FMode f_mode_from_string(const std::string& name) {
  if (name == "full") return FMode::full;
  if (name == "diag") return FMode::diag;
  if (name == "noco" || name == "identity") return FMode::noco;
  throw InvalidArgument("unknown preconditioner mode '" + name + "'");
}

Preconditioner::Preconditioner(DenseMatrix r, FMode mode) : r_(std::move(r)), mode_(mode) {
  const Index d = r_.rows();
  if (d == 0 || r_.cols() != d) throw InvalidArgument("preconditioner: R must be square and nonempty");
  if (!r_.allFinite()) throw InvalidArgument("preconditioner: R has non-finite entries");
  if (!r_.isUpperTriangular(0.0)) throw InvalidArgument("preconditioner: R must be upper triangular");
  const double scale = r_.cwiseAbs().maxCoeff();
  for (Index i = 0; i < d; ++i) {
    if (!(std::abs(r_(i, i)) > 1e-14 * scale)) throw SingularMatrixError("preconditioner: R is singular");
  }
  scaling_ = Vector::Ones(d);
  switch (mode_) {
    case FMode::full: {
      const Vector sv = singular_values(r_);
      h_max_ = sv(0) * sv(0);
      h_min_ = sv(d - 1) * sv(d - 1);
      break;
    }
    case FMode::diag: {
      for (Index j = 0; j < d; ++j) {
        const double nrm = r_.col(j).norm();
        if (nrm == 0.0) throw SingularMatrixError("preconditioner: zero column in R");
        scaling_(j) = 1.0 / nrm;
      }
      const Vector h = scaling_.cwiseAbs2().cwiseInverse();
      h_max_ = h.maxCoeff();
      h_min_ = h.minCoeff();
      break;
    }
    case FMode::noco: break;
  }
}

Vector Preconditioner::apply_f(const Vector& y) const {
  switch (mode_) {
    case FMode::full: return r_.triangularView<Eigen::Upper>().solve(y);
    case FMode::diag: return scaling_.cwiseProduct(y);
    case FMode::noco: return y;
  }
  return y;
}

Vector Preconditioner::apply_f_inverse(const Vector& x) const {
  switch (mode_) {
    case FMode::full: return r_.triangularView<Eigen::Upper>() * x;
    case FMode::diag: return x.cwiseQuotient(scaling_);
    case FMode::noco: return x;
  }
  return x;
}

Vector Preconditioner::apply_f_transpose(const Vector& v) const {
  switch (mode_) {
    case FMode::full: return r_.triangularView<Eigen::Upper>().transpose().solve(v);
    case FMode::diag: return scaling_.cwiseProduct(v);
    case FMode::noco: return v;
  }
  return v;
}

void Preconditioner::apply_h_inverse_inplace(Vector& v) const {
  switch (mode_) {
    case FMode::full:
      r_.triangularView<Eigen::Upper>().transpose().solveInPlace(v);
      r_.triangularView<Eigen::Upper>().solveInPlace(v);
      break;
    case FMode::diag: v.array() *= scaling_.array().square(); break;
    case FMode::noco: break;
  }
}

Vector Preconditioner::apply_h_inverse(const Vector& v) const {
  Vector out = v;
  apply_h_inverse_inplace(out);
  return out;
}

Vector Preconditioner::apply_h(const Vector& v) const {
  switch (mode_) {
    case FMode::full: {
      const Vector rv = r_.triangularView<Eigen::Upper>() * v;
      return r_.triangularView<Eigen::Upper>().transpose() * rv;
    }
    case FMode::diag: return v.cwiseQuotient(scaling_.cwiseAbs2());
    case FMode::noco: return v;
  }
  return v;
}

double Preconditioner::h_norm_sq(const Vector& v) const {
  switch (mode_) {
    case FMode::full: return (r_.triangularView<Eigen::Upper>() * v).squaredNorm();
    case FMode::diag: return v.cwiseQuotient(scaling_).squaredNorm();
    case FMode::noco: return v.squaredNorm();
  }
  return v.squaredNorm();
}

double Preconditioner::h_norm(const Vector& v) const { return std::sqrt(h_norm_sq(v)); }

DenseMatrix Preconditioner::f_matrix() const {
  const Index d = dim();
  switch (mode_) {
    case FMode::full: return r_.triangularView<Eigen::Upper>().solve(DenseMatrix::Identity(d, d));
    case FMode::diag: return scaling_.asDiagonal();
    case FMode::noco: return DenseMatrix::Identity(d, d);
  }
  return DenseMatrix::Identity(d, d);
}

DenseMatrix Preconditioner::rf_matrix() const {
  const Index d = dim();
  switch (mode_) {
    case FMode::full: return DenseMatrix::Identity(d, d);
    case FMode::diag: return r_ * scaling_.asDiagonal();
    case FMode::noco: return r_;
  }
  return r_;
}

Preconditioner make_preconditioner(const DenseMatrix& r, FMode mode) { return Preconditioner(r, mode); }

DenseMatrix well_conditioned_basis(const DenseMatrix& a, const DenseMatrix& r) {
  if (a.cols() != r.rows()) throw InvalidArgument("well_conditioned_basis: dimension mismatch");
  // U R = A  <=>  R^T U^T = A^T
  DenseMatrix ut = r.triangularView<Eigen::Upper>().transpose().solve(a.transpose());
  return ut.transpose();
}

RFactor compute_R(const DenseMatrix& a, SketchSpec spec, const ComputeROptions& opts) {
  if (spec.sketch_rows == 0) spec.sketch_rows = default_sketch_rows(spec.kind, a.cols());
  if (spec.sketch_rows < a.cols()) throw InvalidArgument("compute_R: sketch_rows must be >= d");
  RFactor out;
  for (int attempt = 0;; ++attempt) {
    try {
      const DenseMatrix sa = apply_sketch(spec, a);
      out.r = qr_r_factor(sa);
      out.used_spec = spec;
      out.attempts = attempt + 1;
      out.report.sketch_rows = spec.sketch_rows;
      if (opts.distortion_dirs > 0) {
        out.report.sketch_distortion =
            distortion_from_pair(a, sa, spec.target_norm, opts.distortion_dirs, spec.seed ^ 0x9e3779b97f4a7c15ULL)
                .kappa_s;
      }
      break;
    } catch (const SingularMatrixError&) {
      if (attempt >= opts.max_retries) {
        throw SingularMatrixError("compute_R: sketch S A rank deficient after " + std::to_string(attempt + 1) +
                                  " attempts; retry with a new seed or a larger sketch");
      }
      spec.seed += 1;
    }
  }
  if (opts.report_conditioning) {
    const auto cond = l2_conditioning(well_conditioned_basis(a, out.r));
    out.report.alpha = cond.alpha;
    out.report.beta = cond.beta;
    out.report.kappa_bar = cond.kappa_bar;
    out.report.kappa = cond.kappa;
  }
  return out;
}

double conditioning_bound(int p, double kappa_s, double d, double s) {
  if (p != 1 && p != 2) throw InvalidArgument("conditioning_bound: p must be 1 or 2");
  if (!(kappa_s > 0) || !(d > 0) || !(s > 0)) throw InvalidArgument("conditioning_bound: inputs must be positive");
  const double inv_p = 1.0 / p;
  return kappa_s * std::pow(d, std::max(0.5, inv_p)) * std::pow(s, std::abs(inv_p - 0.5));
}

}  // namespace pwsgd
