#include "pwsgd/plot_data.hpp"

#include "pwsgd/error.hpp"
#include "pwsgd/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace pwsgd {

std::string to_string(PlotMode m) {
  switch (m) {
    case PlotMode::time_accuracy: return "time_accuracy";
    case PlotMode::iter_accuracy: return "iter_accuracy";
    case PlotMode::cond_sweep: return "cond_sweep";
  }
  return "iter_accuracy";
}

PlotMode plot_mode_from_string(const std::string& s) {
  if (s == "time_accuracy") return PlotMode::time_accuracy;
  if (s == "iter_accuracy") return PlotMode::iter_accuracy;
  if (s == "cond_sweep") return PlotMode::cond_sweep;
  throw InvalidArgument("unknown plot mode '" + s + "'");
}

std::string to_string(PlotMetric m) {
  switch (m) {
    case PlotMetric::obj: return "obj";
    case PlotMetric::rel_obj_err: return "rel_obj_err";
    case PlotMetric::rel_sol_l2: return "rel_sol_l2";
    case PlotMetric::rel_sol_pred: return "rel_sol_pred";
  }
  return "rel_obj_err";
}

PlotMetric plot_metric_from_string(const std::string& s) {
  if (s == "obj") return PlotMetric::obj;
  if (s == "rel_obj_err") return PlotMetric::rel_obj_err;
  if (s == "rel_sol_l2") return PlotMetric::rel_sol_l2;
  if (s == "rel_sol_pred") return PlotMetric::rel_sol_pred;
  throw InvalidArgument("unknown plot metric '" + s + "'");
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& v) {
  if (v.empty()) throw InvalidArgument("mean_and_stderr: empty input");
  const double k = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= k;
  if (v.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (k - 1.0)) / std::sqrt(k)};
}

namespace {

double metric_of(const Checkpoint& c, PlotMetric m) {
  switch (m) {
    case PlotMetric::obj: return c.obj;
    case PlotMetric::rel_obj_err: return c.rel_obj_err;
    case PlotMetric::rel_sol_l2: return c.rel_sol_l2;
    case PlotMetric::rel_sol_pred: return c.rel_sol_pred;
  }
  return c.rel_obj_err;
}

PlotRow make_row(const std::string& solver, double x, const std::vector<double>& ys) {
  const auto [mean, se] = mean_and_stderr(ys);
  PlotRow row{solver, x, mean, se, 0};
  for (double y : ys) row.nonpositive_y += y <= 0.0 ? 1 : 0;
  return row;
}

}  // namespace

std::vector<PlotRow> plot_rows(const std::vector<PlotSeries>& series, PlotMode mode, PlotMetric metric) {
  if (mode == PlotMode::cond_sweep) throw InvalidArgument("plot_rows: use plot_rows_cond_sweep for cond_sweep");
  if (series.empty()) throw InvalidArgument("plot_rows: empty input");
  std::vector<PlotRow> rows;
  for (const auto& s : series) {
    if (s.traces.empty()) throw InvalidArgument("plot_rows: solver '" + s.solver + "' has no traces");
    std::size_t len = s.traces.front()->checkpoints.size();
    for (const auto* t : s.traces) len = std::min(len, t->checkpoints.size());
    // Trials stopped at a target end on an off-grid checkpoint; keep the shared prefix only.
    std::size_t shared = 0;
    while (shared < len && std::all_of(s.traces.begin(), s.traces.end(), [&](const SolverTrace* t) {
             return t->checkpoints[shared].iter == s.traces.front()->checkpoints[shared].iter;
           })) {
      ++shared;
    }
    for (std::size_t c = 0; c < shared; ++c) {
      std::vector<double> ys;
      double x = 0.0;
      for (const auto* t : s.traces) {
        const auto& cp = t->checkpoints[c];
        ys.push_back(metric_of(cp, metric));
        x += mode == PlotMode::time_accuracy ? cp.elapsed_sec : 0.0;
      }
      if (mode == PlotMode::time_accuracy) {
        x /= static_cast<double>(s.traces.size());
      } else {
        x = static_cast<double>(s.traces.front()->checkpoints[c].iter);
      }
      rows.push_back(make_row(s.solver, x, ys));
    }
  }
  if (rows.empty()) throw InvalidArgument("plot_rows: no checkpoints");
  return rows;
}

std::vector<PlotRow> plot_rows_cond_sweep(const std::vector<SweepPoint>& points) {
  if (points.empty()) throw InvalidArgument("plot_rows_cond_sweep: empty input");
  std::vector<PlotRow> rows;
  for (const auto& p : points) {
    if (p.iterations_to_target.empty()) continue;
    rows.push_back(make_row(p.solver, p.kappa_bar_sq * p.kappa_bar_sq, p.iterations_to_target));
  }
  if (rows.empty()) throw InvalidArgument("plot_rows_cond_sweep: no sweep point reached the target");
  return rows;
}

void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << kPlotCsvHeader << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.solver << ',' << r.x_value << ',' << r.mean_y << ',' << r.stderr_y << ',' << r.nonpositive_y << '\n';
  }
}

void write_plot_csv(const std::string& path, const std::vector<PlotRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_plot_csv(out, rows);
}

std::vector<PlotRow> read_plot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kPlotCsvHeader) throw ParseError("unexpected plot CSV header", 1, 1);
  std::vector<PlotRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw ParseError("expected 5 fields", static_cast<long>(lineno), 1);
    PlotRow r;
    r.solver = f[0];
    double v[4];
    for (int k = 0; k < 4; ++k) {
      if (!parse_double(f[k + 1], v[k])) throw ParseError("non-numeric field", static_cast<long>(lineno), k + 2);
    }
    r.x_value = v[0];
    r.mean_y = v[1];
    r.stderr_y = v[2];
    r.nonpositive_y = static_cast<Index>(v[3]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pwsgd
