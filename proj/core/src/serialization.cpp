#include "pwsgd/serialization.hpp"

#include "pwsgd/error.hpp"

#include <fstream>
#include <sstream>

namespace pwsgd {

using nlohmann::json;

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.is_object()) throw InvalidArgument("expected a JSON object");
  const auto it = j.find(key);
  if (it != j.end() && !it->is_null()) it->get_to(out);
}

template <class E, class F>
void read_enum(const json& j, const char* key, E& out, F parse) {
  const auto it = j.find(key);
  if (it != j.end() && !it->is_null()) out = parse(it->get<std::string>());
}

}  // namespace

std::string to_string(L2Target t) { return t == L2Target::prediction ? "prediction" : "objective"; }

L2Target l2_target_from_string(const std::string& s) {
  if (s == "prediction") return L2Target::prediction;
  if (s == "objective") return L2Target::objective;
  throw InvalidArgument("unknown theory target '" + s + "'");
}

void to_json(json& j, const SketchSpec& s) {
  j = json{{"kind", to_string(s.kind)}, {"sketch_rows", s.sketch_rows}, {"seed", s.seed}};
}

void from_json(const json& j, SketchSpec& s) {
  SketchSpec out;
  read_enum(j, "kind", out.kind, sketch_kind_from_string);
  read_opt(j, "sketch_rows", out.sketch_rows);
  read_opt(j, "seed", out.seed);
  s = SketchSpec::make(out.kind, out.sketch_rows, out.seed);
}

void to_json(json& j, const Constraint& c) {
  j = c.active() ? json{{"kind", "l1_ball"}, {"radius", c.radius}} : json{{"kind", "none"}};
}

void from_json(const json& j, Constraint& c) {
  const std::string kind = j.value("kind", std::string("none"));
  if (kind == "none") {
    c = Constraint::none();
  } else if (kind == "l1_ball") {
    c = Constraint::l1_ball(j.at("radius").get<double>());
  } else {
    throw InvalidArgument("unknown constraint kind '" + kind + "'");
  }
}

void to_json(json& j, const StepGrid& g) { j = json{{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}}; }

void from_json(const json& j, StepGrid& g) {
  read_opt(j, "lo", g.lo);
  read_opt(j, "hi", g.hi);
  read_opt(j, "count", g.count);
}

void to_json(json& j, const SolverConfig& c) {
  j = json{{"p", c.p},
           {"f_mode", to_string(c.f_mode)},
           {"step_rule", to_string(c.step_rule)},
           {"step_size", c.step_size},
           {"grid", c.grid},
           {"max_iters", c.max_iters},
           {"batch_size", c.batch_size},
           {"averaging", c.averaging ? json(to_string(*c.averaging)) : json(nullptr)},
           {"constraint", c.constraint},
           {"seed", c.seed},
           {"checkpoint_every", c.checkpoint_every},
           {"sampling", to_string(c.sampling)},
           {"epoch_length", c.epoch_length},
           {"target_rel_obj", c.target_rel_obj},
           {"check_every", c.check_every},
           {"theory_eps", c.theory_eps},
           {"time_budget_sec", c.time_budget_sec}};
}

void from_json(const json& j, SolverConfig& c) {
  SolverConfig out;
  read_opt(j, "p", out.p);
  read_enum(j, "f_mode", out.f_mode, f_mode_from_string);
  read_enum(j, "step_rule", out.step_rule, step_rule_from_string);
  read_opt(j, "step_size", out.step_size);
  read_opt(j, "grid", out.grid);
  read_opt(j, "max_iters", out.max_iters);
  read_opt(j, "batch_size", out.batch_size);
  if (j.contains("averaging") && !j["averaging"].is_null()) {
    out.averaging = averaging_from_string(j["averaging"].get<std::string>());
  }
  read_opt(j, "constraint", out.constraint);
  read_opt(j, "seed", out.seed);
  read_opt(j, "checkpoint_every", out.checkpoint_every);
  read_enum(j, "sampling", out.sampling, sampling_scheme_from_string);
  read_opt(j, "epoch_length", out.epoch_length);
  read_opt(j, "target_rel_obj", out.target_rel_obj);
  read_opt(j, "check_every", out.check_every);
  read_opt(j, "theory_eps", out.theory_eps);
  read_opt(j, "time_budget_sec", out.time_budget_sec);
  c = out;
}

void to_json(json& j, const DatasetRecipe& r) {
  j = json{{"kind", r.kind},
           {"n", r.n},
           {"d", r.d},
           {"kappa_bar_sq_target", r.kappa_bar_sq_target},
           {"noise_sigma", r.noise_sigma},
           {"seed", r.seed},
           {"shared_seed", r.shared_seed},
           {"num_spikes", r.num_spikes},
           {"cond", r.cond},
           {"sparsity", r.sparsity},
           {"path", r.path},
           {"response_column", r.response_column}};
}

void from_json(const json& j, DatasetRecipe& r) {
  DatasetRecipe out;
  read_opt(j, "kind", out.kind);
  read_opt(j, "n", out.n);
  read_opt(j, "d", out.d);
  read_opt(j, "kappa_bar_sq_target", out.kappa_bar_sq_target);
  read_opt(j, "noise_sigma", out.noise_sigma);
  read_opt(j, "seed", out.seed);
  read_opt(j, "shared_seed", out.shared_seed);
  read_opt(j, "num_spikes", out.num_spikes);
  read_opt(j, "cond", out.cond);
  read_opt(j, "sparsity", out.sparsity);
  read_opt(j, "path", out.path);
  read_opt(j, "response_column", out.response_column);
  r = out;
}

void to_json(json& j, const SolverRecipe& r) {
  j = json{{"name", r.name},
           {"method", to_string(r.method)},
           {"config", r.config},
           {"sketch", r.sketch},
           {"distribution", to_string(r.distribution)},
           {"probe_cols", r.probe_cols},
           {"theory_target", to_string(r.theory_target)}};
}

void from_json(const json& j, SolverRecipe& r) {
  SolverRecipe out;
  read_opt(j, "name", out.name);
  read_enum(j, "method", out.method, method_from_string);
  read_opt(j, "config", out.config);
  read_opt(j, "sketch", out.sketch);
  read_enum(j, "distribution", out.distribution, distribution_recipe_from_string);
  read_opt(j, "probe_cols", out.probe_cols);
  read_enum(j, "theory_target", out.theory_target, l2_target_from_string);
  r = out;
}

void to_json(json& j, const ExperimentSpec& s) {
  j = json{{"dataset", s.dataset},
           {"solvers", s.solvers},
           {"trials", s.trials},
           {"time_budget_sec", s.time_budget_sec},
           {"target_eps", s.target_eps},
           {"stop_at_target", s.stop_at_target},
           {"sampling", to_string(s.sampling)},
           {"output_dir", s.output_dir},
           {"seed", s.seed},
           {"max_parallel", s.max_parallel}};
}

void from_json(const json& j, ExperimentSpec& s) {
  ExperimentSpec out;
  read_opt(j, "dataset", out.dataset);
  read_opt(j, "solvers", out.solvers);
  read_opt(j, "trials", out.trials);
  read_opt(j, "time_budget_sec", out.time_budget_sec);
  read_opt(j, "target_eps", out.target_eps);
  read_opt(j, "stop_at_target", out.stop_at_target);
  read_enum(j, "sampling", out.sampling, sampling_scheme_from_string);
  read_opt(j, "output_dir", out.output_dir);
  read_opt(j, "seed", out.seed);
  read_opt(j, "max_parallel", out.max_parallel);
  s = out;
}

json preconditioner_to_json(const Preconditioner& p) {
  const DenseMatrix& r = p.r();
  std::vector<double> payload(r.data(), r.data() + r.size());
  return json{{"f_mode", to_string(p.mode())}, {"d", r.rows()}, {"r", payload}};
}

Preconditioner preconditioner_from_json(const json& j) {
  const auto d = j.at("d").get<Index>();
  const auto payload = j.at("r").get<std::vector<double>>();
  if (d < 1 || static_cast<Index>(payload.size()) != d * d) {
    throw InvalidArgument("preconditioner: payload size does not match d*d");
  }
  DenseMatrix r(d, d);
  std::copy(payload.begin(), payload.end(), r.data());
  return Preconditioner(r, f_mode_from_string(j.at("f_mode").get<std::string>()));
}

void save_preconditioner(const std::string& path, const Preconditioner& p) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << preconditioner_to_json(p).dump() << '\n';
}

Preconditioner load_preconditioner(const std::string& path) { return preconditioner_from_json(read_json_file(path)); }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    long line = 1, col = 1;
    for (std::size_t k = 0; k < std::min(e.byte, text.size() + 1) - (e.byte > 0 ? 1 : 0); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("invalid JSON in '") + path + "'", line, col);
  }
}

}  // namespace pwsgd
