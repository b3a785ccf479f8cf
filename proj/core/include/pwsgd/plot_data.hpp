#pragma once

#include "pwsgd/sgd.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pwsgd {

enum class PlotMode { time_accuracy, iter_accuracy, cond_sweep };
std::string to_string(PlotMode m);
PlotMode plot_mode_from_string(const std::string& s);

enum class PlotMetric { obj, rel_obj_err, rel_sol_l2, rel_sol_pred };
std::string to_string(PlotMetric m);
PlotMetric plot_metric_from_string(const std::string& s);

/// One output row. nonpositive_y counts the trials whose y was <= 0 at this point, so a log
/// axis can flag them instead of clipping silently.
struct PlotRow {
  std::string solver;
  double x_value = 0.0;
  double mean_y = 0.0;
  double stderr_y = 0.0;
  Index nonpositive_y = 0;
};

/// All trials of one solver.
struct PlotSeries {
  std::string solver;
  std::vector<const SolverTrace*> traces;
};

/// One solver at one sweep point of a conditioning sweep.
struct SweepPoint {
  std::string solver;
  double kappa_bar_sq = 0.0;
  std::vector<double> iterations_to_target;  // one per trial that reached the target
};

inline constexpr const char* kPlotCsvHeader = "solver,x_value,mean_y,stderr_y,nonpositive_y";

/// time_accuracy: x is the mean elapsed time at each checkpoint; iter_accuracy: x is the
/// iteration. Uses the checkpoints common to all trials of a series.
std::vector<PlotRow> plot_rows(const std::vector<PlotSeries>& series, PlotMode mode,
                               PlotMetric metric = PlotMetric::rel_obj_err);

/// x is kappa_bar_sq^2, y the iterations to target.
std::vector<PlotRow> plot_rows_cond_sweep(const std::vector<SweepPoint>& points);

void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows);
void write_plot_csv(const std::string& path, const std::vector<PlotRow>& rows);
std::vector<PlotRow> read_plot_csv(const std::string& path);

/// Sample mean and sample standard deviation / sqrt(k); stderr is 0 for k = 1.
std::pair<double, double> mean_and_stderr(const std::vector<double>& v);

}  // namespace pwsgd
