#include "pwsgd/experiment.hpp"

#include "pwsgd/error.hpp"
#include "pwsgd/precondition.hpp"
#include "pwsgd/rla.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace pwsgd {

void DatasetRecipe::validate() const {
  if (kind == "csv") {
    if (path.empty()) throw InvalidArgument("dataset: csv recipe needs a path");
    return;
  }
  if (kind != "synthetic1" && kind != "synthetic2" && kind != "sparse") {
    throw InvalidArgument("dataset: unknown kind '" + kind + "'");
  }
  if (!(n > d && d >= 1) && kind != "sparse") throw InvalidArgument("dataset: need n > d >= 1");
  if (kind == "synthetic2" && !(kappa_bar_sq_target >= static_cast<double>(d))) {
    throw InvalidArgument("dataset: kappa_bar_sq_target must be >= d");
  }
}

Dataset make_dataset(const DatasetRecipe& r) {
  r.validate();
  if (r.kind == "synthetic1") return gen_synthetic1(r.n, r.d, r.num_spikes, r.seed, r.cond, r.noise_sigma);
  if (r.kind == "synthetic2") return gen_synthetic2(r.n, r.d, r.kappa_bar_sq_target, r.shared_seed, r.noise_sigma, r.seed);
  if (r.kind == "sparse") return gen_sparse_regression(r.n, r.d, r.sparsity, r.seed, r.noise_sigma);
  return load_csv_dataset(r.path, r.response_column);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::pwsgd: return "pwsgd";
    case Method::weighted_rk: return "weighted_rk";
    case Method::vanilla_sgd: return "vanilla_sgd";
  }
  return "pwsgd";
}

Method method_from_string(const std::string& s) {
  if (s == "pwsgd") return Method::pwsgd;
  if (s == "weighted_rk") return Method::weighted_rk;
  if (s == "vanilla_sgd" || s == "sgd") return Method::vanilla_sgd;
  throw InvalidArgument("unknown method '" + s + "'");
}

std::string to_string(DistributionRecipe r) {
  switch (r) {
    case DistributionRecipe::exact: return "exact";
    case DistributionRecipe::approx: return "approx";
    case DistributionRecipe::row_norm: return "row_norm";
    case DistributionRecipe::uniform: return "uniform";
  }
  return "exact";
}

DistributionRecipe distribution_recipe_from_string(const std::string& s) {
  if (s == "exact") return DistributionRecipe::exact;
  if (s == "approx") return DistributionRecipe::approx;
  if (s == "row_norm") return DistributionRecipe::row_norm;
  if (s == "uniform") return DistributionRecipe::uniform;
  throw InvalidArgument("unknown distribution recipe '" + s + "'");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw InvalidArgument("experiment: trials must be >= 1");
  if (solvers.empty()) throw InvalidArgument("experiment: at least one solver is required");
  if (max_parallel < 1) throw InvalidArgument("experiment: max_parallel must be >= 1");
  dataset.validate();
  for (const auto& s : solvers) {
    if (s.name.empty()) throw InvalidArgument("experiment: every solver needs a name");
    if (s.config.p != solvers.front().config.p) throw InvalidArgument("experiment: solvers must share p");
    if (s.config.constraint.kind != solvers.front().config.constraint.kind ||
        s.config.constraint.radius != solvers.front().config.constraint.radius) {
      throw InvalidArgument("experiment: solvers must share the constraint");
    }
  }
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PreparedSolver prepare_solver(const RegressionProblem& prob, const SolverRecipe& recipe, std::uint64_t seed) {
  const Index d = prob.a.cols();
  const auto t0 = std::chrono::steady_clock::now();
  if (recipe.method != Method::pwsgd) {
    auto dist = recipe.method == Method::weighted_rk ? row_norm_distribution(prob.a)
                                                     : uniform_distribution(prob.a.rows());
    return {Preconditioner(DenseMatrix::Identity(d, d), FMode::noco), std::move(dist), seconds_since(t0)};
  }
  SketchSpec spec = recipe.sketch;
  spec.seed = seed;
  const RFactor rf = compute_R(prob.a, spec);
  const int p = recipe.config.p;
  SamplingDistribution dist;
  switch (recipe.distribution) {
    case DistributionRecipe::exact: dist = exact_scores(prob.a, rf.r, p); break;
    case DistributionRecipe::approx:
      dist = p == 2 ? approx_scores_l2(prob.a, rf.r,
                                       recipe.probe_cols > 0 ? recipe.probe_cols : default_l2_probe_cols(prob.a.rows()),
                                       seed + 1)
                    : approx_scores_l1(prob.a, rf.r, recipe.probe_cols > 0 ? recipe.probe_cols : kDefaultL1ProbeCols,
                                       seed + 1);
      break;
    case DistributionRecipe::row_norm: dist = row_norm_distribution(prob.a); break;
    case DistributionRecipe::uniform: dist = uniform_distribution(prob.a.rows()); break;
  }
  Preconditioner precond(rf.r, recipe.config.f_mode);
  return {std::move(precond), std::move(dist), seconds_since(t0)};
}

SolverConfig resolve_theory_step(const RegressionProblem& prob, const PreparedSolver& prep, const SolverRecipe& recipe,
                                 const Reference& ref) {
  SolverConfig cfg = recipe.config;
  if (cfg.step_rule != StepRule::theory) return cfg;
  const Index d = prob.a.cols();
  // T bounds the error in expectation; a run that stops at a target gets the high-probability
  // horizon 10 T so that slow trials still report a time to target.
  const Index horizon = cfg.target_rel_obj > 0.0 ? 10 : 1;
  const auto k = compute_theory_constants(prob.a, prob.b, prep.precond, prep.dist, Vector::Zero(d), ref.x_star, cfg.p);
  if (cfg.p == 2) {
    const StepPlan plan = theory_stepsize_l2(k, cfg.theory_eps, recipe.theory_target);
    cfg.step_size = plan.eta;
    if (cfg.max_iters == 0) cfg.max_iters = horizon * plan.iterations;
  } else {
    const Index t = cfg.max_iters > 0 ? cfg.max_iters : theory_iterations_l1(k, d, cfg.theory_eps);
    cfg.step_size = theory_stepsize_l1(k, t);
    if (cfg.max_iters == 0) cfg.max_iters = horizon * t;
  }
  return cfg;
}

Vector reference_solution(const RegressionProblem& prob, int p, const Constraint& constraint) {
  if (p == 1) {
    if (constraint.active()) throw InvalidArgument("reference_solution: constrained l1 is not supported");
    return irls_l1_solve(prob.a, prob.b, 1e-10);
  }
  if (constraint.active()) return constrained_ls_solve(prob.a, prob.b, constraint.radius);
  return direct_ls_solve(prob.a, prob.b);
}

GridResult grid_search_stepsize(const RegressionProblem& prob, const Preconditioner& precond,
                                const SamplingDistribution& dist, const SolverConfig& base,
                                const std::vector<double>& grid, const Reference& ref, double time_budget) {
  if (grid.empty()) throw InvalidArgument("grid_search_stepsize: empty grid");
  GridResult res;
  res.etas = grid;
  std::sort(res.etas.begin(), res.etas.end());
  const double f0 = objective(prob, Vector::Zero(prob.a.cols()), base.p);
  double best = std::numeric_limits<double>::infinity();
  for (double eta : res.etas) {
    SolverConfig cfg = base;
    cfg.step_rule = StepRule::fixed;
    cfg.step_size = eta;
    cfg.target_rel_obj = 0.0;
    if (time_budget > 0.0) cfg.time_budget_sec = time_budget;
    const SolverTrace tr = pwsgd_solve(prob, precond, dist, cfg, &ref);
    const double obj = objective(prob, tr.final_estimate, base.p);
    const bool diverged = tr.aborted || !std::isfinite(obj) || obj > 10.0 * std::max(f0, ref.f_star);
    const double err = diverged ? kNaN : (ref.f_star > 0.0 ? (obj - ref.f_star) / ref.f_star : obj);
    res.diverged.push_back(diverged);
    res.errors.push_back(err);
    if (!diverged && err < best) {
      best = err;
      res.best_eta = eta;
    }
  }
  if (std::isnan(res.best_eta)) throw ConvergenceError("grid_search_stepsize: every candidate diverged (grid exhausted)");
  return res;
}

SolverTrace run_trial(const RegressionProblem& prob, const SolverRecipe& recipe, const Reference& ref,
                      std::uint64_t seed) {
  const PreparedSolver prep = prepare_solver(prob, recipe, seed);
  SolverConfig cfg = resolve_theory_step(prob, prep, recipe, ref);
  cfg.seed = seed;
  if (cfg.step_rule == StepRule::grid) {
    const auto g = grid_search_stepsize(prob, prep.precond, prep.dist, cfg, cfg.grid.values(), ref, cfg.time_budget_sec);
    cfg.step_size = g.best_eta;
    cfg.step_rule = StepRule::fixed;
  }
  return pwsgd_solve(prob, prep.precond, prep.dist, cfg, &ref, prep.setup_seconds);
}

std::vector<Checkpoint> mean_trace(const std::vector<const SolverTrace*>& traces) {
  std::vector<Checkpoint> out;
  if (traces.empty()) return out;
  std::size_t len = traces.front()->checkpoints.size();
  for (const auto* t : traces) len = std::min(len, t->checkpoints.size());
  const double k = static_cast<double>(traces.size());
  for (std::size_t c = 0; c < len; ++c) {
    Checkpoint m;
    m.iter = traces.front()->checkpoints[c].iter;
    m.elapsed_sec = m.obj = m.rel_obj_err = m.rel_sol_l2 = m.rel_sol_pred = 0.0;
    for (const auto* t : traces) {
      const auto& cp = t->checkpoints[c];
      m.elapsed_sec += cp.elapsed_sec / k;
      m.obj += cp.obj / k;
      m.rel_obj_err += cp.rel_obj_err / k;
      m.rel_sol_l2 += cp.rel_sol_l2 / k;
      m.rel_sol_pred += cp.rel_sol_pred / k;
    }
    out.push_back(m);
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (auto& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return out;
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void write_outputs(const ExperimentSpec& spec, const ExperimentResult& res) {
  namespace fs = std::filesystem;
  fs::create_directories(spec.output_dir);
  nlohmann::json summary;
  summary["f_star"] = res.reference.f_star;
  summary["trials"] = spec.trials;
  summary["target_eps"] = spec.target_eps;
  summary["solvers"] = nlohmann::json::array();
  for (const auto& s : res.solvers) {
    const std::string base = safe_name(s.name);
    nlohmann::json js;
    js["name"] = s.name;
    js["step_size"] = finite_or_null(s.step_size);
    js["reached"] = s.reached;
    js["mean_iterations_to_target"] = finite_or_null(s.mean_iterations_to_target);
    js["median_iterations_to_target"] = finite_or_null(s.median_iterations_to_target);
    js["mean_seconds_to_target"] = finite_or_null(s.mean_seconds_to_target);
    nlohmann::json per = nlohmann::json::array();
    for (std::size_t k = 0; k < s.traces.size(); ++k) {
      const auto& tr = s.traces[k];
      write_trace_csv((fs::path(spec.output_dir) / (base + "_trial" + std::to_string(k) + ".csv")).string(), tr);
      nlohmann::json jt;
      jt["trial"] = k;
      jt["excluded"] = static_cast<bool>(s.excluded[k]);
      jt["aborted"] = tr.aborted;
      if (tr.aborted) jt["diagnostic"] = tr.diagnostic;
      jt["iterations"] = tr.iterations;
      jt["iterations_to_target"] = tr.iterations_to_target >= 0 ? nlohmann::json(tr.iterations_to_target) : nlohmann::json(nullptr);
      jt["seconds_to_target"] = finite_or_null(tr.seconds_to_target);
      jt["setup_seconds"] = tr.setup_seconds;
      jt["step_size"] = tr.step_size;
      per.push_back(jt);
    }
    js["per_trial"] = per;
    SolverTrace mean;
    mean.checkpoints = s.mean_trace;
    write_trace_csv((fs::path(spec.output_dir) / (base + "_mean.csv")).string(), mean);
    summary["solvers"].push_back(js);
  }
  std::ofstream out(fs::path(spec.output_dir) / "summary.json");
  if (!out) throw IoError("cannot write summary.json in '" + spec.output_dir + "'");
  out << summary.dump(2) << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const Dataset data = make_dataset(spec.dataset);
  const RegressionProblem prob{data.a, data.b};
  const int p = spec.solvers.front().config.p;
  const Constraint constraint = spec.solvers.front().config.constraint;
  ExperimentResult res;
  res.reference = Reference::make(prob, reference_solution(prob, p, constraint), p, !constraint.active());

  const std::size_t ns = spec.solvers.size();
  const auto nt = static_cast<std::size_t>(spec.trials);
  std::vector<SolverTrace> traces(ns * nt);
  std::vector<std::string> errors(ns * nt);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t job = next++; job < ns * nt; job = next++) {
      const std::size_t s = job / nt;
      const std::size_t k = job % nt;
      SolverRecipe recipe = spec.solvers[s];
      recipe.config.sampling = spec.sampling;
      if (spec.stop_at_target) recipe.config.target_rel_obj = spec.target_eps;
      if (spec.time_budget_sec > 0.0) recipe.config.time_budget_sec = spec.time_budget_sec;
      const std::uint64_t seed = spec.seed + 1000003ULL * k + 7919ULL * s + 1;
      try {
        traces[job] = run_trial(prob, recipe, res.reference, seed);
      } catch (const std::exception& e) {
        traces[job].aborted = true;
        traces[job].diagnostic = e.what();
        errors[job] = e.what();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::min<Index>(spec.max_parallel, static_cast<Index>(ns * nt)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t s = 0; s < ns; ++s) {
    SolverSummary sum;
    sum.name = spec.solvers[s].name;
    std::vector<const SolverTrace*> kept;
    std::vector<double> iters, secs;
    for (std::size_t k = 0; k < nt; ++k) {
      SolverTrace& tr = traces[s * nt + k];
      const bool excluded = tr.aborted;
      sum.excluded.push_back(excluded);
      if (!excluded) kept.push_back(&tr);
      if (!excluded && tr.reached_target()) {
        iters.push_back(static_cast<double>(tr.iterations_to_target));
        secs.push_back(tr.seconds_to_target);
      }
    }
    sum.reached = static_cast<Index>(iters.size());
    if (!iters.empty()) {
      double si = 0.0, ss = 0.0;
      for (std::size_t k = 0; k < iters.size(); ++k) {
        si += iters[k];
        ss += secs[k];
      }
      sum.mean_iterations_to_target = si / static_cast<double>(iters.size());
      sum.mean_seconds_to_target = ss / static_cast<double>(iters.size());
      sum.median_iterations_to_target = median(iters);
    }
    sum.mean_trace = mean_trace(kept);
    sum.step_size = traces[s * nt].step_size;
    for (std::size_t k = 0; k < nt; ++k) sum.traces.push_back(std::move(traces[s * nt + k]));
    res.solvers.push_back(std::move(sum));
  }
  if (!spec.output_dir.empty()) write_outputs(spec, res);
  return res;
}

}  // namespace pwsgd
