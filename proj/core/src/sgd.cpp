#include "pwsgd/sgd.hpp"

#include "pwsgd/error.hpp"
#include "pwsgd/matrix_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace pwsgd {

std::string to_string(Averaging a) { return a == Averaging::mean_iterate ? "mean_iterate" : "last_iterate"; }
std::string to_string(SamplingScheme s) { return s == SamplingScheme::iid ? "iid" : "epoch"; }
std::string to_string(StepRule r) {
  switch (r) {
    case StepRule::fixed: return "fixed";
    case StepRule::theory: return "theory";
    case StepRule::grid: return "grid";
  }
  return "fixed";
}

Averaging averaging_from_string(const std::string& s) {
  if (s == "mean_iterate" || s == "mean") return Averaging::mean_iterate;
  if (s == "last_iterate" || s == "last") return Averaging::last_iterate;
  throw InvalidArgument("unknown averaging '" + s + "'");
}

SamplingScheme sampling_scheme_from_string(const std::string& s) {
  if (s == "iid") return SamplingScheme::iid;
  if (s == "epoch") return SamplingScheme::epoch;
  throw InvalidArgument("unknown sampling scheme '" + s + "'");
}

StepRule step_rule_from_string(const std::string& s) {
  if (s == "fixed") return StepRule::fixed;
  if (s == "theory") return StepRule::theory;
  if (s == "grid") return StepRule::grid;
  throw InvalidArgument("unknown step rule '" + s + "'");
}

std::vector<double> StepGrid::values() const {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("step grid: need count >= 1 and 0 < lo <= hi");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  for (Index k = 0; k < count; ++k) out[k] = std::pow(10.0, llo + (lhi - llo) * k / static_cast<double>(count - 1));
  return out;
}

Averaging SolverConfig::resolved_averaging() const {
  if (averaging) return *averaging;
  return p == 1 ? Averaging::mean_iterate : Averaging::last_iterate;
}

void SolverConfig::validate() const {
  if (p != 1 && p != 2) throw InvalidArgument("solver config: p must be 1 or 2");
  if (batch_size < 1) throw InvalidArgument("solver config: batch_size must be >= 1");
  if (max_iters < 0) throw InvalidArgument("solver config: max_iters must be >= 0");
  if (check_every < 1) throw InvalidArgument("solver config: check_every must be >= 1");
  if (step_rule == StepRule::fixed && !(step_size > 0.0) && max_iters > 0) {
    throw InvalidArgument("solver config: step_size must be positive");
  }
}

double objective(const RegressionProblem& prob, const Vector& x, int p) {
  const Vector r = prob.a * x - prob.b;
  return p == 1 ? r.lpNorm<1>() : r.norm();
}

Reference Reference::make(const RegressionProblem& prob, const Vector& x_star, int p, bool unconstrained_ls) {
  Reference ref;
  ref.x_star = x_star;
  ref.f_star = objective(prob, x_star, p);
  ref.ax_star_sq = (prob.a * x_star).squaredNorm();
  ref.x_star_sq = x_star.squaredNorm();
  if (p == 2) ref.gram = prob.a.transpose() * prob.a;
  ref.unconstrained_ls = unconstrained_ls && p == 2;
  return ref;
}

namespace {

double relative(double f, double f_star) { return f_star > 0.0 ? (f - f_star) / f_star : f; }

// Relative objective error; O(d^2) for the unconstrained least-squares case.
double fast_rel_obj(const RegressionProblem& prob, const Vector& x, int p, const Reference& ref) {
  if (ref.unconstrained_ls) {
    const Vector e = x - ref.x_star;
    const double f = std::sqrt(ref.f_star * ref.f_star + std::max(0.0, e.dot(ref.gram * e)));
    return relative(f, ref.f_star);
  }
  return relative(objective(prob, x, p), ref.f_star);
}

class Stopwatch {
 public:
  void resume() { start_ = std::chrono::steady_clock::now(); }
  void pause() { acc_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }
  double seconds() const { return acc_; }

 private:
  std::chrono::steady_clock::time_point start_{};
  double acc_ = 0.0;
};

}  // namespace

Checkpoint evaluate(const RegressionProblem& prob, const Vector& x, int p, const Reference* ref, Index iter,
                    double elapsed) {
  Checkpoint cp;
  cp.iter = iter;
  cp.elapsed_sec = elapsed;
  cp.obj = objective(prob, x, p);
  if (ref) {
    cp.rel_obj_err = relative(cp.obj, ref->f_star);
    const Vector e = x - ref->x_star;
    cp.rel_sol_l2 = ref->x_star_sq > 0.0 ? e.squaredNorm() / ref->x_star_sq : e.squaredNorm();
    const double pred = (prob.a * e).squaredNorm();
    cp.rel_sol_pred = ref->ax_star_sq > 0.0 ? pred / ref->ax_star_sq : pred;
  }
  return cp;
}

double scaled_residual(double residual, double prob_i, int p) {
  if (p == 1) {
    const double s = residual > 0.0 ? 1.0 : (residual < 0.0 ? -1.0 : 0.0);
    return s / prob_i;
  }
  return 2.0 * residual / prob_i;
}

Vector constrained_step(const Vector& x_t, const Vector& g, double eta, const Preconditioner& precond,
                        const Constraint& constraint) {
  Vector z = g;
  precond.apply_h_inverse_inplace(z);
  z = x_t - eta * z;  // unconstrained minimizer
  if (!constraint.active() || z.lpNorm<1>() <= constraint.radius) return z;
  switch (precond.mode()) {
    case FMode::noco: return project_l1_ball(z, constraint.radius);
    case FMode::diag: {
      const Vector h = precond.scaling().cwiseAbs2().cwiseInverse();
      return project_l1_ball_weighted(z, h, constraint.radius);
    }
    case FMode::full: {
      // min eta g^T x + 1/2 (x - x_t)^T H (x - x_t) = 1/2 x^T H x + (eta g - H x_t)^T x + const
      const Vector c = eta * g - precond.apply_h(x_t);
      auto h_apply = [&](const Vector& v) { return precond.apply_h(v); };
      return l1_ball_qp(h_apply, c, constraint.radius, precond.h_max_eigenvalue(), project_l1_ball(z, constraint.radius))
          .x;
    }
  }
  return z;
}

Vector constrained_step(const Vector& x_t, double c_t, const Vector& row, double eta, const Preconditioner& precond,
                        const Constraint& constraint) {
  return constrained_step(x_t, Vector(c_t * row), eta, precond, constraint);
}

Vector minibatch_gradient(const Vector& x, const std::vector<Index>& indices, const SamplingDistribution& dist,
                          const RegressionProblem& prob, int p) {
  if (indices.empty()) throw InvalidArgument("minibatch_gradient: empty batch");
  Vector g = Vector::Zero(x.size());
  for (Index i : indices) {
    const double r = prob.a.row(i).dot(x) - prob.b(i);
    g.noalias() += scaled_residual(r, dist.probs(i), p) * prob.a.row(i).transpose();
  }
  return g / static_cast<double>(indices.size());
}

IndexStream::IndexStream(const SamplingDistribution& dist, SamplingScheme scheme, Index epoch_length,
                         std::uint64_t seed)
    : dist_(dist), scheme_(scheme), epoch_length_(epoch_length), rng_(seed) {
  if (scheme_ != SamplingScheme::epoch) return;
  const Index n = dist.size();
  const Index positive = (dist.probs.array() > 0.0).count();
  if (epoch_length_ < 1) epoch_length_ = (n + 9) / 10;
  epoch_length_ = std::min(epoch_length_, positive);
  // Inclusion probabilities proportional to p_i, capped at one.
  inclusion_ = Vector::Zero(n);
  std::vector<bool> capped(static_cast<std::size_t>(n), false);
  Index num_capped = 0;
  for (;;) {
    double free_mass = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (!capped[i]) free_mass += dist.probs(i);
    }
    const double budget = static_cast<double>(epoch_length_ - num_capped);
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      if (capped[i]) continue;
      inclusion_(i) = dist.probs(i) * budget / free_mass;
      if (inclusion_(i) >= 1.0) {
        capped[i] = true;
        inclusion_(i) = 1.0;
        ++num_capped;
        changed = true;
      }
    }
    if (!changed) break;
  }
}

void IndexStream::refill() {
  // Systematic sampling: L distinct rows with inclusion probabilities pi_i.
  buffer_.clear();
  const double u = std::generate_canonical<double, 53>(rng_);
  double acc = 0.0;
  Index k = 0;
  const Index n = inclusion_.size();
  for (Index i = 0; i < n && k < epoch_length_; ++i) {
    acc += inclusion_(i);
    if (i == n - 1) acc = static_cast<double>(epoch_length_);
    if (u + static_cast<double>(k) < acc) {
      buffer_.push_back(i);
      ++k;
    }
  }
  std::shuffle(buffer_.begin(), buffer_.end(), rng_);
  pos_ = 0;
}

Index IndexStream::next() {
  if (scheme_ == SamplingScheme::iid) return sample_index(dist_, rng_);
  if (pos_ >= buffer_.size()) refill();
  return buffer_[pos_++];
}

SolverTrace pwsgd_solve(const RegressionProblem& prob, const Preconditioner& precond,
                        const SamplingDistribution& dist, const SolverConfig& config, const Reference* ref,
                        double setup_seconds) {
  config.validate();
  const Index n = prob.a.rows();
  const Index d = prob.a.cols();
  if (prob.b.size() != n) throw InvalidArgument("pwsgd_solve: b has the wrong length");
  if (dist.size() != n) throw InvalidArgument("pwsgd_solve: distribution size differs from row count");
  if (precond.dim() != d) throw InvalidArgument("pwsgd_solve: preconditioner dimension differs from column count");
  if (config.step_rule != StepRule::fixed && !(config.step_size > 0.0) && config.max_iters > 0) {
    throw InvalidArgument("pwsgd_solve: resolve theory/grid step rules before solving");
  }

  const int p = config.p;
  const double eta = config.step_size;
  const bool mean = config.resolved_averaging() == Averaging::mean_iterate;
  const Index T = config.max_iters;
  const Index every = config.checkpoint_every > 0 ? config.checkpoint_every : std::max<Index>(1, (n + 9) / 10);
  const bool track_target = ref != nullptr && config.target_rel_obj > 0.0;
  const bool fast_path = config.batch_size == 1 && !config.constraint.active();
  const Vector s2 = precond.scaling().cwiseAbs2();
  // H^-1 = F F^T formed once: one d x d product per step instead of two small triangular solves.
  DenseMatrix h_inv;
  if (fast_path && precond.mode() == FMode::full) {
    const DenseMatrix f = precond.f_matrix();
    h_inv = f * f.transpose();
  }
  const Eigen::Ref<const DenseMatrix> a = prob.a;

  SolverTrace trace;
  trace.setup_seconds = setup_seconds;
  trace.step_size = eta;
  Vector x = Vector::Zero(d);
  Vector sum = Vector::Zero(d);
  Vector v(d);
  std::vector<Index> batch(static_cast<std::size_t>(config.batch_size));
  IndexStream stream(dist, config.sampling, config.epoch_length, config.seed);

  trace.checkpoints.push_back(evaluate(prob, x, p, ref, 0, setup_seconds));
  Vector last_good = x;
  if (track_target && trace.checkpoints.back().rel_obj_err <= config.target_rel_obj) {
    trace.iterations_to_target = 0;
    trace.seconds_to_target = setup_seconds;
    trace.final_estimate = x;
    return trace;
  }

  auto estimate = [&](Index t) -> Vector { return mean && t > 0 ? Vector(sum / static_cast<double>(t)) : x; };

  Stopwatch clock;
  clock.resume();
  Index t = 0;
  while (t < T) {
    ++t;
    if (fast_path) {
      const Index i = stream.next();
      const double r = a.row(i).dot(x) - prob.b(i);
      if (!std::isfinite(r)) {
        trace.aborted = true;
        break;
      }
      const double c = scaled_residual(r, dist.probs(i), p);
      if (c != 0.0) {
        const double step = eta * c;
        switch (precond.mode()) {
          case FMode::noco: x.noalias() -= step * a.row(i).transpose(); break;
          case FMode::diag: x.array() -= step * a.row(i).transpose().array() * s2.array(); break;
          case FMode::full:
            v.noalias() = h_inv * a.row(i).transpose();
            x.noalias() -= step * v;
            break;
        }
      }
    } else {
      for (auto& idx : batch) idx = stream.next();
      const Vector g = minibatch_gradient(x, batch, dist, prob, p);
      if (!g.allFinite()) {
        trace.aborted = true;
        break;
      }
      x = constrained_step(x, g, eta, precond, config.constraint);
    }
    if (mean) sum += x;

    const bool at_checkpoint = t % every == 0 || t == T;
    const bool at_check = track_target && t % config.check_every == 0;
    if (!at_checkpoint && !at_check) continue;
    clock.pause();
    if (!x.allFinite()) {
      trace.aborted = true;
      clock.resume();
      break;
    }
    const Vector est = estimate(t);
    if (at_check && fast_rel_obj(prob, est, p, *ref) <= config.target_rel_obj) {
      trace.iterations_to_target = t;
      trace.seconds_to_target = setup_seconds + clock.seconds();
      trace.checkpoints.push_back(evaluate(prob, est, p, ref, t, setup_seconds + clock.seconds()));
      last_good = est;
      break;
    }
    if (at_checkpoint) {
      trace.checkpoints.push_back(evaluate(prob, est, p, ref, t, setup_seconds + clock.seconds()));
      last_good = est;
      if (config.time_budget_sec > 0.0 && setup_seconds + clock.seconds() >= config.time_budget_sec) {
        trace.budget_exhausted = true;
        break;
      }
    }
    clock.resume();
  }
  if (trace.iterations_to_target < 0 && !trace.budget_exhausted) clock.pause();
  trace.iterations = t;
  if (trace.aborted) {
    trace.diagnostic = "non-finite iterate at iteration " + std::to_string(t) + "; step size " +
                       std::to_string(eta) + " likely too large";
    trace.final_estimate = last_good;
    return trace;
  }
  trace.final_estimate = estimate(t);
  return trace;
}

namespace {

SolverTrace solve_without_preconditioner(const RegressionProblem& prob, const SamplingDistribution& dist,
                                         SolverConfig config, const Reference* ref) {
  const Index d = prob.a.cols();
  config.f_mode = FMode::noco;
  const Preconditioner identity(DenseMatrix::Identity(d, d), FMode::noco);
  return pwsgd_solve(prob, identity, dist, config, ref);
}

}  // namespace

SolverTrace weighted_rk_solve(const RegressionProblem& prob, const SolverConfig& config, const Reference* ref) {
  if (config.p != 2) throw InvalidArgument("weighted_rk_solve: requires p = 2");
  return solve_without_preconditioner(prob, row_norm_distribution(prob.a), config, ref);
}

SolverTrace vanilla_sgd_solve(const RegressionProblem& prob, const SolverConfig& config, const Reference* ref) {
  return solve_without_preconditioner(prob, uniform_distribution(prob.a.rows()), config, ref);
}

void write_trace_csv(const std::string& path, const SolverTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kTraceCsvHeader << '\n' << std::setprecision(17);
  for (const auto& c : trace.checkpoints) {
    out << c.iter << ',' << c.elapsed_sec << ',' << c.obj << ',' << c.rel_obj_err << ',' << c.rel_sol_l2 << ','
        << c.rel_sol_pred << '\n';
  }
}

std::vector<Checkpoint> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  long lineno = 1;
  if (!std::getline(in, line) || line != kTraceCsvHeader) throw ParseError("trace csv: unexpected header", 1);
  std::vector<Checkpoint> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw ParseError("trace csv: expected 6 fields", lineno);
    double v[6];
    for (int k = 0; k < 6; ++k) {
      if (!parse_double(f[k], v[k])) throw ParseError("trace csv: bad number '" + f[k] + "'", lineno, k + 1);
    }
    out.push_back({static_cast<Index>(v[0]), v[1], v[2], v[3], v[4], v[5]});
  }
  return out;
}

}  // namespace pwsgd
