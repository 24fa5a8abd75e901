#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wheelleg/sim.hpp"

namespace wheelleg {

struct GammaEpisode {
  double t_start = 0.0;
  double t_end = 0.0;
  double peak_lateral_error = 0.0;  // max |Ye| inside the episode (m)
  /// Time after t_end until |Ye| stays within the band up to the next
  /// episode (or the end of the log). Empty if it never settles.
  std::optional<double> reconvergence;
};

struct Metrics {
  double max_x_error = 0.0;        // m
  double max_y_error = 0.0;        // m
  double max_yaw_error_deg = 0.0;  // deg
  double mean_solve_time = 0.0;    // s, over the rows that applied an input
  double max_solve_time = 0.0;     // s
  std::vector<GammaEpisode> episodes;
  /// Worst reconvergence over all episodes; empty if any never settles or
  /// there are no episodes.
  std::optional<double> reconvergence_time;
  double band = 0.05;
};

/// Throws DomainError for an empty log.
Metrics compute_metrics(const TrajectoryLog& log, double band = 0.05);

/// Per-axis errors in reporting order: X, Y, yaw.
std::array<double, 3> axis_errors(const Metrics& m);

enum class Verdict { a, b, tie, mixed };
std::string_view to_string(Verdict verdict);

struct Comparison {
  std::array<double, 3> delta{};  // b - a per axis
  std::array<double, 3> ratio{};  // b / a per axis (1 when both are zero)
  double solve_time_ratio = 1.0;  // mean b / mean a
  Verdict accuracy = Verdict::tie;
  Verdict speed = Verdict::tie;
};

/// Throws DomainError when the logs do not follow the same reference.
Comparison compare_runs(const TrajectoryLog& a, const TrajectoryLog& b);

/// `key: value` lines, the three maxima and the mean cycle time first.
std::string format_metrics(const Metrics& m);
/// `name,value` rows for scripts.
std::string format_metrics_rows(const Metrics& m);
std::string format_comparison(const Comparison& c, std::string_view name_a,
                              std::string_view name_b);

}  // namespace wheelleg
