// pwsgd command line: data generation, single solves, experiments and sketch checks.

#include "pwsgd/pwsgd.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace pwsgd;
using nlohmann::json;

/// PWSGD_SEED, when set, replaces every seed read from a config.
std::optional<std::uint64_t> seed_override() {
  const char* env = std::getenv("PWSGD_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw InvalidArgument(std::string("PWSGD_SEED is not an unsigned integer: ") + env);
  return static_cast<std::uint64_t>(v);
}

void apply_seed(DatasetRecipe& d, std::uint64_t s) { d.seed = s; }

void apply_seed(SolverRecipe& r, std::uint64_t s) {
  r.config.seed = s;
  r.sketch.seed = s;
}

json checkpoint_json(const Checkpoint& c) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"iter", c.iter},           {"elapsed_sec", c.elapsed_sec}, {"obj", num(c.obj)},
          {"rel_obj_err", num(c.rel_obj_err)}, {"rel_sol_l2", num(c.rel_sol_l2)}, {"rel_sol_pred", num(c.rel_sol_pred)}};
}

int cmd_gen_data(const std::string& recipe_path, const std::string& out) {
  DatasetRecipe recipe = read_json_file(recipe_path).get<DatasetRecipe>();
  if (auto s = seed_override()) apply_seed(recipe, *s);
  const Dataset ds = make_dataset(recipe);
  DenseMatrix joined(ds.a.rows(), ds.a.cols() + 1);
  joined.col(0) = ds.b;
  joined.rightCols(ds.a.cols()) = ds.a;
  write_dense_csv(out + ".csv", joined);
  if (ds.x_true.size() > 0) write_vector_csv(out + "_x.csv", ds.x_true);
  std::cout << json{{"data", out + ".csv"},
                    {"x_true", ds.x_true.size() > 0 ? json(out + "_x.csv") : json(nullptr)},
                    {"n", ds.a.rows()},
                    {"d", ds.a.cols()},
                    {"response_column", 0}}
                   .dump(2)
            << '\n';
  return 0;
}

int cmd_solve(const std::string& config_path, const std::string& trace_path, const std::string& precond_path) {
  const json cfg = read_json_file(config_path);
  DatasetRecipe data = cfg.at("dataset").get<DatasetRecipe>();
  SolverRecipe recipe = cfg.at("solver").get<SolverRecipe>();
  const double target = cfg.value("target_eps", 0.0);
  if (auto s = seed_override()) {
    apply_seed(data, *s);
    apply_seed(recipe, *s);
  }
  if (target > 0.0) recipe.config.target_rel_obj = target;
  const Dataset ds = make_dataset(data);
  const RegressionProblem prob{ds.a, ds.b};
  const Vector x_star = reference_solution(prob, recipe.config.p, recipe.config.constraint);
  const Reference ref = Reference::make(prob, x_star, recipe.config.p, !recipe.config.constraint.active());
  const PreparedSolver prep = prepare_solver(prob, recipe, recipe.config.seed);
  SolverConfig sc = resolve_theory_step(prob, prep, recipe, ref);
  if (sc.step_rule == StepRule::grid) {
    const GridResult g = grid_search_stepsize(prob, prep.precond, prep.dist, sc, sc.grid.values(), ref, sc.time_budget_sec);
    sc.step_size = g.best_eta;
    sc.step_rule = StepRule::fixed;
  }
  const SolverTrace tr = pwsgd_solve(prob, prep.precond, prep.dist, sc, &ref, prep.setup_seconds);
  if (!trace_path.empty()) write_trace_csv(trace_path, tr);
  if (!precond_path.empty()) save_preconditioner(precond_path, prep.precond);
  json out{{"solver", recipe.name},
           {"method", to_string(recipe.method)},
           {"f_mode", to_string(sc.f_mode)},
           {"p", sc.p},
           {"step_size", tr.step_size},
           {"iterations", tr.iterations},
           {"aborted", tr.aborted},
           {"diagnostic", tr.diagnostic},
           {"setup_seconds", tr.setup_seconds},
           {"f_star", ref.f_star},
           {"final", tr.checkpoints.empty() ? json(nullptr) : checkpoint_json(tr.checkpoints.back())},
           {"iterations_to_target", tr.reached_target() ? json(tr.iterations_to_target) : json(nullptr)}};
  std::cout << out.dump(2) << '\n';
  return tr.aborted ? 1 : 0;
}

int cmd_bench(const std::string& spec_path, const std::string& out_dir, Index max_parallel,
              const std::string& plot_mode, const std::string& plot_metric) {
  ExperimentSpec spec = read_json_file(spec_path).get<ExperimentSpec>();
  if (auto s = seed_override()) {
    spec.seed = *s;
    apply_seed(spec.dataset, *s);
    for (auto& r : spec.solvers) apply_seed(r, *s);
  }
  if (!out_dir.empty()) spec.output_dir = out_dir;
  if (max_parallel > 0) spec.max_parallel = max_parallel;
  const ExperimentResult res = run_experiment(spec);
  if (!plot_mode.empty()) {
    if (spec.output_dir.empty()) throw InvalidArgument("bench: --plot needs an output directory");
    std::vector<PlotSeries> series;
    for (const auto& s : res.solvers) {
      PlotSeries ps{s.name, {}};
      for (std::size_t k = 0; k < s.traces.size(); ++k) {
        if (!s.excluded[k]) ps.traces.push_back(&s.traces[k]);
      }
      if (!ps.traces.empty()) series.push_back(ps);
    }
    const auto rows = plot_rows(series, plot_mode_from_string(plot_mode), plot_metric_from_string(plot_metric));
    write_plot_csv((std::filesystem::path(spec.output_dir) / "plot.csv").string(), rows);
  }
  json out = json::array();
  for (const auto& s : res.solvers) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    out.push_back({{"solver", s.name},
                   {"trials", s.traces.size()},
                   {"reached", s.reached},
                   {"mean_iterations_to_target", num(s.mean_iterations_to_target)},
                   {"median_iterations_to_target", num(s.median_iterations_to_target)},
                   {"mean_seconds_to_target", num(s.mean_seconds_to_target)},
                   {"step_size", num(s.step_size)}});
  }
  std::cout << json{{"f_star", res.reference.f_star}, {"solvers", out}}.dump(2) << '\n';
  return 0;
}

int cmd_sketch_check(const std::string& kind, Index rows, Index n, Index d, const std::string& input, Index dirs,
                     std::uint64_t seed) {
  if (auto s = seed_override()) seed = *s;
  DenseMatrix a;
  if (!input.empty()) {
    a = read_dense_csv(input);
  } else {
    Rng rng(seed + 1);
    a = gaussian_matrix(n, d, rng);
  }
  const SketchKind sk = sketch_kind_from_string(kind);
  const Index s_used = rows > 0 ? rows : default_sketch_rows(sk, a.cols());
  const SketchSpec spec = SketchSpec::make(sk, s_used, seed);
  const DistortionEstimate est = distortion_estimate(spec, a, dirs, seed + 2);
  json out{{"kind", kind},       {"sketch_rows", s_used},     {"n", a.rows()},      {"d", a.cols()},
           {"directions", dirs}, {"sigma_s", est.sigma_s},    {"kappa_s", est.kappa_s}, {"skipped", est.skipped}};
  if (spec.target_norm == 2) {
    // Over all directions: the condition number of S Q for an orthonormal basis Q.
    const Vector sv = singular_values(apply_sketch(spec, qr_factorize(a).q));
    out["kappa_s_exact"] = sv(0) / sv(sv.size() - 1);
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pwsgd: preconditioned weighted SGD for l1/l2 regression"};
  app.require_subcommand(1);

  std::string recipe_path, out_prefix;
  auto* gen = app.add_subcommand("gen-data", "Generate a dataset from a DatasetRecipe JSON");
  gen->add_option("recipe", recipe_path, "DatasetRecipe JSON file")->required()->check(CLI::ExistingFile);
  gen->add_option("-o,--out", out_prefix, "Output prefix (writes <prefix>.csv and <prefix>_x.csv)")->required();

  std::string solve_path, trace_path, precond_path;
  auto* solve = app.add_subcommand("solve", "Run one solver; prints a summary JSON");
  solve->add_option("config", solve_path, "JSON with 'dataset', 'solver' and optional 'target_eps'")
      ->required()
      ->check(CLI::ExistingFile);
  solve->add_option("--trace", trace_path, "Write the trace CSV here");
  solve->add_option("--save-preconditioner", precond_path, "Write the preconditioner sidecar JSON here");

  std::string spec_path, out_dir, plot_mode, plot_metric = "rel_obj_err";
  Index max_parallel = 0;
  auto* bench = app.add_subcommand("bench", "Run an ExperimentSpec; writes trace CSVs and summary.json");
  bench->add_option("spec", spec_path, "ExperimentSpec JSON file")->required()->check(CLI::ExistingFile);
  bench->add_option("-o,--out", out_dir, "Output directory (overrides the spec)");
  bench->add_option("-j,--max-parallel", max_parallel, "Concurrent trials (overrides the spec)")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--plot", plot_mode, "Also write plot.csv: time_accuracy or iter_accuracy");
  bench->add_option("--plot-metric", plot_metric, "obj, rel_obj_err, rel_sol_l2 or rel_sol_pred");

  std::string kind = "gaussian", input;
  Index rows = 0, n = 2000, d = 10, dirs = 1000;
  std::uint64_t seed = 0;
  auto* sk = app.add_subcommand("sketch-check", "Report the embedding distortion of a sketch");
  sk->add_option("-k,--kind", kind, "gaussian, srht, sparse_l2, dense_cauchy, sparse_cauchy or recip_exp");
  sk->add_option("-s,--rows", rows, "Sketch rows (0: default for the kind)");
  sk->add_option("-n", n, "Rows of the random test matrix");
  sk->add_option("-d", d, "Columns of the random test matrix");
  sk->add_option("-i,--input", input, "Dense CSV matrix to use instead of a random one")->check(CLI::ExistingFile);
  sk->add_option("--dirs", dirs, "Random directions to probe");
  sk->add_option("--seed", seed, "Seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen_data(recipe_path, out_prefix);
    if (*solve) return cmd_solve(solve_path, trace_path, precond_path);
    if (*bench) return cmd_bench(spec_path, out_dir, max_parallel, plot_mode, plot_metric);
    if (*sk) return cmd_sketch_check(kind, rows, n, d, input, dirs, seed);
  } catch (const pwsgd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
