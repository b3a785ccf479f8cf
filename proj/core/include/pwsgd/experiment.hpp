#pragma once

#include "pwsgd/datasets.hpp"
#include "pwsgd/leverage.hpp"
#include "pwsgd/sgd.hpp"
#include "pwsgd/sketch.hpp"
#include "pwsgd/theory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pwsgd {

struct DatasetRecipe {
  std::string kind = "synthetic1";  // synthetic1 | synthetic2 | sparse | csv
  Index n = 1000;
  Index d = 10;
  double kappa_bar_sq_target = 100.0;  // synthetic2
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t shared_seed = 0;  // synthetic2: U and V
  Index num_spikes = 5;           // synthetic1
  double cond = 1.0;              // synthetic1
  Index sparsity = 30;            // sparse
  std::string path;               // csv
  Index response_column = 0;      // csv

  void validate() const;
};

Dataset make_dataset(const DatasetRecipe& recipe);

enum class Method { pwsgd, weighted_rk, vanilla_sgd };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

enum class DistributionRecipe { exact, approx, row_norm, uniform };
std::string to_string(DistributionRecipe r);
DistributionRecipe distribution_recipe_from_string(const std::string& s);

struct SolverRecipe {
  std::string name;
  Method method = Method::pwsgd;
  SolverConfig config;
  SketchSpec sketch = SketchSpec::make(SketchKind::gaussian, 0, 0);
  DistributionRecipe distribution = DistributionRecipe::exact;
  Index probe_cols = 0;  // 0: default width
  L2Target theory_target = L2Target::objective;
};

struct ExperimentSpec {
  DatasetRecipe dataset;
  std::vector<SolverRecipe> solvers;
  Index trials = 20;
  double time_budget_sec = 0.0;
  double target_eps = 0.1;  // also the stopping target when stop_at_target
  bool stop_at_target = false;
  SamplingScheme sampling = SamplingScheme::epoch;
  std::string output_dir;  // empty: nothing written
  std::uint64_t seed = 0;
  Index max_parallel = 1;

  void validate() const;
};

/// Everything a solver needs besides the data: F, the sampling distribution and setup time.
struct PreparedSolver {
  Preconditioner precond;
  SamplingDistribution dist;
  double setup_seconds = 0.0;
};

/// Builds F and the distribution for one recipe; setup_seconds covers sketching, QR and scores.
PreparedSolver prepare_solver(const RegressionProblem& prob, const SolverRecipe& recipe, std::uint64_t seed);

/// Resolves the theory step rule (fixed and grid configs are returned unchanged).
SolverConfig resolve_theory_step(const RegressionProblem& prob, const PreparedSolver& prep, const SolverRecipe& recipe,
                                 const Reference& ref);

struct SolverSummary {
  std::string name;
  std::vector<SolverTrace> traces;
  std::vector<bool> excluded;
  std::vector<Checkpoint> mean_trace;
  Index reached = 0;
  double mean_iterations_to_target = kNaN;
  double median_iterations_to_target = kNaN;
  double mean_seconds_to_target = kNaN;
  double step_size = kNaN;  // step of the first trial
};

struct ExperimentResult {
  Reference reference;
  std::vector<SolverSummary> solvers;
};

/// Reference optimum: direct QR solve (p = 2, optionally l1-constrained) or IRLS (p = 1).
Vector reference_solution(const RegressionProblem& prob, int p, const Constraint& constraint);

/// Runs every solver for `trials` trials and aggregates; writes CSVs and summary.json when
/// output_dir is set.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Runs `recipe` on a prepared problem for one trial.
SolverTrace run_trial(const RegressionProblem& prob, const SolverRecipe& recipe, const Reference& ref,
                      std::uint64_t seed);

struct GridResult {
  double best_eta = kNaN;
  std::vector<double> etas;
  std::vector<double> errors;  // final relative objective error, NaN if diverged
  std::vector<bool> diverged;
};

/// Tries every candidate within `time_budget` seconds and returns the one with the lowest final
/// error; ties go to the smaller step. Throws ConvergenceError when every candidate diverges.
GridResult grid_search_stepsize(const RegressionProblem& prob, const Preconditioner& precond,
                                const SamplingDistribution& dist, const SolverConfig& base,
                                const std::vector<double>& grid, const Reference& ref, double time_budget);

/// Pointwise mean of traces over their common checkpoints.
std::vector<Checkpoint> mean_trace(const std::vector<const SolverTrace*>& traces);

}  // namespace pwsgd
