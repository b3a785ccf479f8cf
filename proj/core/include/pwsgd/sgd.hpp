#pragma once

#include "pwsgd/constraints.hpp"
#include "pwsgd/leverage.hpp"
#include "pwsgd/linalg.hpp"
#include "pwsgd/precondition.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pwsgd {

struct RegressionProblem {
  DenseMatrix a;
  Vector b;
};

enum class Averaging { mean_iterate, last_iterate };
enum class SamplingScheme { iid, epoch };
enum class StepRule { fixed, theory, grid };

std::string to_string(Averaging a);
std::string to_string(SamplingScheme s);
std::string to_string(StepRule r);
Averaging averaging_from_string(const std::string& s);
SamplingScheme sampling_scheme_from_string(const std::string& s);
StepRule step_rule_from_string(const std::string& s);

/// Log-spaced candidate step sizes.
struct StepGrid {
  double lo = 1e-6;
  double hi = 1.0;
  Index count = 20;
  std::vector<double> values() const;
};

struct SolverConfig {
  int p = 2;
  FMode f_mode = FMode::full;
  StepRule step_rule = StepRule::fixed;
  double step_size = 0.0;
  StepGrid grid;
  Index max_iters = 0;
  Index batch_size = 1;
  /// Unset means mean_iterate for p = 1 and last_iterate for p = 2.
  std::optional<Averaging> averaging;
  Constraint constraint;
  std::uint64_t seed = 0;
  /// 0 means ceil(n / 10).
  Index checkpoint_every = 0;
  SamplingScheme sampling = SamplingScheme::iid;
  /// Epoch length for SamplingScheme::epoch; 0 means ceil(n / 10).
  Index epoch_length = 0;
  /// When positive and a reference is known, stop once rel_obj_err <= target.
  double target_rel_obj = 0.0;
  Index check_every = 1;
  /// Target used by the theory step rule.
  double theory_eps = 0.1;
  /// When positive, stop at the first checkpoint past this many seconds (setup included).
  double time_budget_sec = 0.0;

  Averaging resolved_averaging() const;
  void validate() const;
};

/// Known optimum used for error reporting and target detection.
struct Reference {
  Vector x_star;
  double f_star = 0.0;       // ||A x* - b||_p (unsquared for p = 2)
  double ax_star_sq = 0.0;   // ||A x*||_2^2
  double x_star_sq = 0.0;    // ||x*||_2^2
  DenseMatrix gram;          // A^T A, filled for p = 2
  /// x* is the unconstrained least-squares minimizer, so f^2 = f*^2 + ||A(x - x*)||^2.
  bool unconstrained_ls = false;

  static Reference make(const RegressionProblem& prob, const Vector& x_star, int p, bool unconstrained_ls);
};

struct Checkpoint {
  Index iter = 0;
  double elapsed_sec = 0.0;
  double obj = 0.0;
  double rel_obj_err = kNaN;
  double rel_sol_l2 = kNaN;
  double rel_sol_pred = kNaN;
};

struct SolverTrace {
  std::vector<Checkpoint> checkpoints;
  Vector final_estimate;
  Index iterations = 0;
  bool aborted = false;
  std::string diagnostic;
  bool budget_exhausted = false;
  Index iterations_to_target = -1;
  double seconds_to_target = kNaN;
  double setup_seconds = 0.0;
  double step_size = 0.0;

  bool reached_target() const { return iterations_to_target >= 0; }
};

/// ||Ax - b||_p, unsquared.
double objective(const RegressionProblem& prob, const Vector& x, int p);

/// Fills obj and the relative errors of `x` at iteration `iter`.
Checkpoint evaluate(const RegressionProblem& prob, const Vector& x, int p, const Reference* ref, Index iter,
                    double elapsed);

/// argmin_{x in Z} eta g^T x + 1/2 ||x_t - x||_H^2, with g = c_t A_xi^T (or a minibatch average).
Vector constrained_step(const Vector& x_t, const Vector& g, double eta, const Preconditioner& precond,
                        const Constraint& constraint);
Vector constrained_step(const Vector& x_t, double c_t, const Vector& row, double eta,
                        const Preconditioner& precond, const Constraint& constraint);

/// c_i = sgn(r_i)/p_i (p = 1) or 2 r_i / p_i (p = 2), r_i = A_i x - b_i.
double scaled_residual(double residual, double prob_i, int p);

/// Mean over `indices` of c_i A_i^T.
Vector minibatch_gradient(const Vector& x, const std::vector<Index>& indices, const SamplingDistribution& dist,
                          const RegressionProblem& prob, int p);

/// Source of row indices: i.i.d. draws, or epochs drawn without replacement.
class IndexStream {
 public:
  IndexStream(const SamplingDistribution& dist, SamplingScheme scheme, Index epoch_length, std::uint64_t seed);
  Index next();
  /// Inclusion probabilities used within an epoch (epoch scheme only).
  const Vector& inclusion() const { return inclusion_; }

 private:
  void refill();

  const SamplingDistribution& dist_;
  SamplingScheme scheme_;
  Index epoch_length_;
  Rng rng_;
  Vector inclusion_;
  std::vector<Index> buffer_;
  std::size_t pos_ = 0;
};

/// Preconditioned weighted SGD.
SolverTrace pwsgd_solve(const RegressionProblem& prob, const Preconditioner& precond,
                        const SamplingDistribution& dist, const SolverConfig& config,
                        const Reference* ref = nullptr, double setup_seconds = 0.0);

/// Weighted randomized Kaczmarz: F = R = I with row-norm sampling.
SolverTrace weighted_rk_solve(const RegressionProblem& prob, const SolverConfig& config,
                              const Reference* ref = nullptr);

/// Plain SGD: F = I with uniform sampling.
SolverTrace vanilla_sgd_solve(const RegressionProblem& prob, const SolverConfig& config,
                              const Reference* ref = nullptr);

void write_trace_csv(const std::string& path, const SolverTrace& trace);
std::vector<Checkpoint> read_trace_csv(const std::string& path);
inline constexpr const char* kTraceCsvHeader = "iter,elapsed_sec,obj,rel_obj_err,rel_sol_l2,rel_sol_pred";

}  // namespace pwsgd
