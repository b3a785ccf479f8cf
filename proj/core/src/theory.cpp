#include "pwsgd/theory.hpp"

#include "pwsgd/error.hpp"
#include "pwsgd/rla.hpp"

#include <cmath>

namespace pwsgd {

TheoryConstants compute_theory_constants(const DenseMatrix& a, const Vector& b, const Preconditioner& precond,
                                         const SamplingDistribution& dist, const Vector& x0, const Vector& x_ref,
                                         int p) {
  if (p != 1 && p != 2) throw InvalidArgument("theory: p must be 1 or 2");
  const Index n = a.rows();
  const Index d = a.cols();
  if (x_ref.size() != d) throw InvalidArgument("theory: reference solution missing or of wrong size");
  if (x0.size() != d || b.size() != n || dist.size() != n) throw InvalidArgument("theory: inconsistent dimensions");

  TheoryConstants k;
  k.p = p;
  k.c1 = (1.0 + dist.gamma) / (1.0 - dist.gamma);
  const DenseMatrix u = well_conditioned_basis(a, precond.r());
  const DenseMatrix rf = precond.rf_matrix();
  const DenseMatrix af = a * precond.f_matrix();
  const Vector resid = a * x_ref - b;
  const Vector ax = a * x_ref;

  const Vector y_diff = precond.apply_f_inverse(x_ref - x0);
  k.x0_err_h_sq = y_diff.squaredNorm();
  k.ax_star_sq = ax.squaredNorm();
  const double xs_h = precond.h_norm_sq(x_ref);
  k.c2 = xs_h > 0.0 ? k.x0_err_h_sq / xs_h : 0.0;

  const Vector sv_af = singular_values(af);
  k.af_norm_sq = sv_af(0) * sv_af(0);
  k.mu = 2.0 * sv_af(d - 1) * sv_af(d - 1);
  const Vector row_sq = af.rowwise().squaredNorm();
  for (Index i = 0; i < n; ++i) {
    if (dist.probs(i) <= 0.0) continue;  // never sampled
    k.sup_L = std::max(k.sup_L, 2.0 * row_sq(i) / dist.probs(i));
    k.sigma_sq += 4.0 * resid(i) * resid(i) * row_sq(i) / dist.probs(i);
  }

  if (p == 2) {
    const auto cond = l2_conditioning(u);
    k.alpha = cond.alpha;
    k.beta = cond.beta;
    k.kappa_bar = cond.kappa_bar;
    k.kappa_u = cond.kappa;
    const Vector sv_rf = singular_values(rf);
    k.rf_norm = sv_rf(0);
    k.rf_inv_norm = 1.0 / sv_rf(d - 1);
    k.kappa_rf = sv_rf(0) / sv_rf(d - 1);
    k.h_star = resid.squaredNorm();
    k.c3 = k.h_star > 0.0 ? ax.squaredNorm() / k.h_star : std::numeric_limits<double>::infinity();
  } else {
    k.alpha = elementwise_p_norm(u, 1.0);
    k.beta = l1_beta(u);
    k.kappa_bar = k.alpha * k.beta;
    k.kappa_u = spectral_condition(u);
    k.rf_norm = elementwise_p_norm(rf, 1.0);
    k.kappa_hat_rf = kappa_hat(rf);
    k.rf_inv_norm = k.kappa_hat_rf / k.rf_norm;
    k.kappa_rf = spectral_condition(rf);
    k.h_star = resid.lpNorm<1>();
    k.c3 = k.h_star > 0.0 ? ax.lpNorm<1>() / k.h_star : std::numeric_limits<double>::infinity();
  }
  return k;
}

StepPlan theory_stepsize_l2(const TheoryConstants& k, double eps, L2Target target) {
  if (!(eps > 0.0)) throw InvalidArgument("theory_stepsize_l2: eps must be positive");
  if (!(k.af_norm_sq > 0.0) || !(k.mu > 0.0)) throw InvalidArgument("theory_stepsize_l2: degenerate constants");
  StepPlan plan;
  plan.constants = k;
  // Accuracy for E||y_T - y*||^2 that yields the requested guarantee.
  const double h = k.h_star;
  const double ax_sq = k.ax_star_sq;
  plan.inner_eps = target == L2Target::prediction ? eps * ax_sq / k.af_norm_sq : 2.0 * eps * h / k.af_norm_sq;
  if (!(plan.inner_eps > 0.0)) {
    throw InvalidArgument("theory_stepsize_l2: target is degenerate (zero residual for the objective target)");
  }
  const double e = plan.inner_eps;
  plan.eta = e * k.mu / (2.0 * k.sigma_sq + 2.0 * e * k.mu * k.sup_L);
  const double log_term = std::log(2.0 * k.x0_err_h_sq / e);
  const double rate = k.sigma_sq / (e * k.mu * k.mu) + k.sup_L / k.mu;
  plan.iterations = log_term > 0.0 ? static_cast<Index>(std::ceil(log_term * rate)) : 0;
  return plan;
}

StepPlan theory_stepsize_l2(const DenseMatrix& a, const Vector& b, const Preconditioner& precond,
                            const SamplingDistribution& dist, double eps, const Vector& x_ref, L2Target target,
                            const Vector* x0) {
  const Vector zero = Vector::Zero(a.cols());
  const auto k = compute_theory_constants(a, b, precond, dist, x0 ? *x0 : zero, x_ref, 2);
  return theory_stepsize_l2(k, eps, target);
}

double theory_stepsize_l1(const TheoryConstants& k, Index T) {
  if (T < 0) throw InvalidArgument("theory_stepsize_l1: T must be >= 0");
  return std::sqrt(k.x0_err_h_sq) / (k.alpha * k.rf_norm * std::sqrt(static_cast<double>(T) + 1.0)) / k.c1;
}

double theory_stepsize_l1(const DenseMatrix& a, const Vector& b, const Preconditioner& precond,
                          const SamplingDistribution& dist, const Vector& x0, const Vector& x_ref, Index T) {
  return theory_stepsize_l1(compute_theory_constants(a, b, precond, dist, x0, x_ref, 1), T);
}

Index theory_iterations_l1(const TheoryConstants& k, Index d, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("theory_iterations_l1: eps must be positive");
  const double t = static_cast<double>(d) * k.kappa_bar * k.kappa_bar * k.kappa_hat_rf * k.kappa_hat_rf * k.c1 *
                   k.c1 * k.c2 * k.c3 * k.c3 / (eps * eps);
  return static_cast<Index>(std::ceil(t));
}

double predicted_bound_l1(const TheoryConstants& k, Index T, double eta) {
  if (!(eta > 0.0) || T < 1) return std::numeric_limits<double>::infinity();
  const double noise = k.c1 * k.alpha * k.rf_norm;
  return k.x0_err_h_sq / (2.0 * eta * static_cast<double>(T)) + 0.5 * eta * noise * noise;
}

double predicted_bound_l2(const TheoryConstants& k, Index T, double eta, double x0_err_h_sq) {
  const double lip = 2.0 * eta * k.c1 * k.alpha * k.alpha * k.rf_norm * k.rf_norm;
  if (!(1.0 - lip > 0.0)) {
    throw InvalidArgument("predicted_bound_l2: step size too large, 1 - 2 eta c1 alpha^2 ||RF||^2 <= 0");
  }
  const double denom = k.beta * k.beta * k.rf_inv_norm * k.rf_inv_norm;
  const double base = 1.0 - 4.0 * eta * (1.0 - lip) / denom;
  if (base < 0.0) throw InvalidArgument("predicted_bound_l2: contraction factor is negative for this step size");
  const double floor = 2.0 * k.c1 * eta * k.kappa_bar * k.kappa_bar * k.kappa_rf * k.kappa_rf * k.h_star / (1.0 - lip);
  return std::pow(base, static_cast<double>(T)) * x0_err_h_sq + floor;
}

}  // namespace pwsgd
