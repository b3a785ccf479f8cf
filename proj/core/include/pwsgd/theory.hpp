#pragma once

#include "pwsgd/leverage.hpp"
#include "pwsgd/linalg.hpp"
#include "pwsgd/precondition.hpp"

namespace pwsgd {

/// Constants entering the step sizes and error bounds. Norms of R F are spectral for
/// p = 2 and elementwise 1-norms for p = 1; alpha, beta are those of U = A R^-1.
struct TheoryConstants {
  int p = 2;
  double c1 = 1.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double mu = 0.0;        // 2 sigma_min^2(AF)
  double sup_L = 0.0;     // max_i 2 ||A_i F||^2 / p_i
  double sigma_sq = 0.0;  // 4 sum_i r_i^2 ||A_i F||^2 / p_i at y*
  double alpha = 0.0;
  double beta = 0.0;
  double kappa_bar = 0.0;
  double kappa_u = 0.0;
  double rf_norm = 0.0;
  double rf_inv_norm = 0.0;
  double kappa_rf = 0.0;   // spectral condition of RF (p = 2)
  double kappa_hat_rf = 0.0;  // |RF|_1 |(RF)^-1|_1 (p = 1)
  double h_star = 0.0;     // f(x*): ||Ax*-b||_2^2 for p = 2, ||Ax*-b||_1 for p = 1
  double af_norm_sq = 0.0;  // ||AF||_2^2
  double ax_star_sq = 0.0;  // ||Ax*||_2^2
  double x0_err_h_sq = 0.0;  // ||x* - x0||_H^2 = ||y* - y0||_2^2
};

TheoryConstants compute_theory_constants(const DenseMatrix& a, const Vector& b, const Preconditioner& precond,
                                         const SamplingDistribution& dist, const Vector& x0, const Vector& x_ref,
                                         int p);

enum class L2Target { prediction, objective };

struct StepPlan {
  double eta = 0.0;
  Index iterations = 0;
  double inner_eps = 0.0;  // accuracy handed to the strongly convex SGD bound
  TheoryConstants constants;
};

/// Step size and iteration count for p = 2. `prediction` targets
/// E||A(x_T - x*)||^2 <= eps ||Ax*||^2; `objective` targets ||Ax_T - b|| <= (1 + eps) ||Ax* - b||.
StepPlan theory_stepsize_l2(const DenseMatrix& a, const Vector& b, const Preconditioner& precond,
                            const SamplingDistribution& dist, double eps, const Vector& x_ref,
                            L2Target target = L2Target::prediction, const Vector* x0 = nullptr);

/// Same formulas from precomputed constants.
StepPlan theory_stepsize_l2(const TheoryConstants& k, double eps, L2Target target);

/// eta = ||y* - y0|| / (alpha |RF|_1 sqrt(T + 1)) (1 - gamma) / (1 + gamma).
double theory_stepsize_l1(const DenseMatrix& a, const Vector& b, const Preconditioner& precond,
                          const SamplingDistribution& dist, const Vector& x0, const Vector& x_ref, Index T);
double theory_stepsize_l1(const TheoryConstants& k, Index T);

/// d kappa_bar_1^2(U) kappa_hat^2(RF) c1^2 c2 c3^2 / eps^2, rounded up.
Index theory_iterations_l1(const TheoryConstants& k, Index d, double eps);

/// ||x* - x0||_H^2 / (2 eta T) + eta/2 (c1 alpha |RF|_1)^2.
double predicted_bound_l1(const TheoryConstants& k, Index T, double eta);

/// Bound on E||x_T - x*||_H^2; throws InvalidArgument when 1 - 2 eta c1 alpha^2 ||RF||^2 <= 0.
double predicted_bound_l2(const TheoryConstants& k, Index T, double eta, double x0_err_h_sq);

}  // namespace pwsgd
