#include "wheelleg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wheelleg/errors.hpp"
#include "wheelleg/geometry.hpp"
#include "wheelleg/text_format.hpp"

namespace wheelleg {
namespace {

double ratio_of(double b, double a) {
  if (a == 0.0) return b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return b / a;
}

Verdict smaller(double a, double b) {
  if (a < b) return Verdict::a;
  if (b < a) return Verdict::b;
  return Verdict::tie;
}

}  // namespace

Metrics compute_metrics(const TrajectoryLog& log, double band) {
  if (log.rows.empty()) throw DomainError("compute_metrics: empty log");
  if (!(band > 0.0)) throw DomainError("compute_metrics: band must be positive");
  const auto& rows = log.rows;
  Metrics m;
  m.band = band;
  for (const auto& r : rows) {
    m.max_x_error = std::max(m.max_x_error, std::abs(r.x - r.x_ref));
    m.max_y_error = std::max(m.max_y_error, std::abs(r.y - r.y_ref));
    m.max_yaw_error_deg =
        std::max(m.max_yaw_error_deg, std::abs(wrap_angle(r.theta - r.theta_ref)) * 180.0 / kPi);
  }

  // the final row only repeats the last cycle's values
  const std::size_t applied = rows.size() > 1 ? rows.size() - 1 : rows.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < applied; ++i) {
    sum += rows[i].solve_time;
    m.max_solve_time = std::max(m.max_solve_time, rows[i].solve_time);
  }
  m.mean_solve_time = sum / static_cast<double>(applied);

  std::vector<std::pair<std::size_t, std::size_t>> spans;  // [first, last) row indices
  for (std::size_t i = 0; i < rows.size();) {
    if (rows[i].gamma != 1) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < rows.size() && rows[j].gamma == 1) ++j;
    spans.emplace_back(i, j);
    i = j;
  }

  bool all_settle = !spans.empty();
  double worst = 0.0;
  for (std::size_t e = 0; e < spans.size(); ++e) {
    const auto [first, last] = spans[e];
    GammaEpisode ep;
    ep.t_start = rows[first].t;
    ep.t_end = last < rows.size() ? rows[last].t : rows.back().t;
    for (std::size_t i = first; i < std::min(last + 1, rows.size()); ++i) {
      ep.peak_lateral_error = std::max(ep.peak_lateral_error, std::abs(rows[i].y - rows[i].y_ref));
    }
    const std::size_t stop = e + 1 < spans.size() ? spans[e + 1].first : rows.size();
    std::optional<std::size_t> last_out;
    for (std::size_t i = last; i < stop; ++i) {
      if (std::abs(rows[i].y - rows[i].y_ref) > band) last_out = i;
    }
    if (!last_out) {
      ep.reconvergence = 0.0;
    } else if (*last_out + 1 < stop) {
      ep.reconvergence = rows[*last_out + 1].t - ep.t_end;
    }
    if (ep.reconvergence) {
      worst = std::max(worst, *ep.reconvergence);
    } else {
      all_settle = false;
    }
    m.episodes.push_back(ep);
  }
  if (all_settle) m.reconvergence_time = worst;
  return m;
}

std::array<double, 3> axis_errors(const Metrics& m) {
  return {m.max_x_error, m.max_y_error, m.max_yaw_error_deg};
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::a: return "a";
    case Verdict::b: return "b";
    case Verdict::tie: return "tie";
    case Verdict::mixed: return "mixed";
  }
  return "tie";
}

Comparison compare_runs(const TrajectoryLog& a, const TrajectoryLog& b) {
  if (a.rows.size() != b.rows.size()) {
    throw DomainError("compare_runs: logs differ in length");
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& ra = a.rows[i];
    const auto& rb = b.rows[i];
    if (std::abs(ra.t - rb.t) > 1e-9 || std::abs(ra.x_ref - rb.x_ref) > 1e-9 ||
        std::abs(ra.y_ref - rb.y_ref) > 1e-9) {
      throw DomainError("compare_runs: logs follow different reference paths");
    }
  }
  const auto ma = compute_metrics(a);
  const auto mb = compute_metrics(b);
  const auto ea = axis_errors(ma);
  const auto eb = axis_errors(mb);

  Comparison c;
  bool a_better = false, b_better = false;
  for (std::size_t k = 0; k < 3; ++k) {
    c.delta[k] = eb[k] - ea[k];
    c.ratio[k] = ratio_of(eb[k], ea[k]);
    a_better |= ea[k] < eb[k];
    b_better |= eb[k] < ea[k];
  }
  c.accuracy = a_better && b_better ? Verdict::mixed
               : a_better           ? Verdict::a
               : b_better           ? Verdict::b
                                    : Verdict::tie;
  c.solve_time_ratio = ratio_of(mb.mean_solve_time, ma.mean_solve_time);
  c.speed = smaller(ma.mean_solve_time, mb.mean_solve_time);
  return c;
}

std::string format_metrics(const Metrics& m) {
  using text::format_double;
  std::ostringstream out;
  out << "max_x_error_m: " << format_double(m.max_x_error) << '\n'
      << "max_y_error_m: " << format_double(m.max_y_error) << '\n'
      << "max_yaw_error_deg: " << format_double(m.max_yaw_error_deg) << '\n'
      << "mean_cycle_time_s: " << format_double(m.mean_solve_time) << '\n'
      << "max_cycle_time_s: " << format_double(m.max_solve_time) << '\n'
      << "gamma_episodes: " << m.episodes.size() << '\n';
  for (std::size_t i = 0; i < m.episodes.size(); ++i) {
    const auto& e = m.episodes[i];
    out << "episode_" << i + 1 << ": " << format_double(e.t_start) << " .. "
        << format_double(e.t_end) << " s, peak |Ye| " << format_double(e.peak_lateral_error)
        << " m, reconverged "
        << (e.reconvergence ? format_double(*e.reconvergence) + " s" : std::string("never"))
        << '\n';
  }
  out << "reconvergence_time_s: "
      << (m.reconvergence_time ? format_double(*m.reconvergence_time) : std::string("n/a"))
      << '\n';
  return out.str();
}

std::string format_metrics_rows(const Metrics& m) {
  using text::format_double;
  std::ostringstream out;
  out << "name,value\n"
      << "max_x_error_m," << format_double(m.max_x_error) << '\n'
      << "max_y_error_m," << format_double(m.max_y_error) << '\n'
      << "max_yaw_error_deg," << format_double(m.max_yaw_error_deg) << '\n'
      << "mean_cycle_time_s," << format_double(m.mean_solve_time) << '\n'
      << "max_cycle_time_s," << format_double(m.max_solve_time) << '\n'
      << "gamma_episodes," << m.episodes.size() << '\n';
  for (std::size_t i = 0; i < m.episodes.size(); ++i) {
    const auto& e = m.episodes[i];
    const std::string p = "episode_" + std::to_string(i + 1) + "_";
    out << p << "start_s," << format_double(e.t_start) << '\n'
        << p << "end_s," << format_double(e.t_end) << '\n'
        << p << "peak_y_error_m," << format_double(e.peak_lateral_error) << '\n'
        << p << "reconvergence_s,"
        << (e.reconvergence ? format_double(*e.reconvergence) : std::string("nan")) << '\n';
  }
  return out.str();
}

std::string format_comparison(const Comparison& c, std::string_view name_a,
                              std::string_view name_b) {
  using text::format_double;
  static constexpr const char* kAxes[] = {"x_m", "y_m", "yaw_deg"};
  auto who = [&](Verdict v) -> std::string {
    if (v == Verdict::a) return std::string(name_a);
    if (v == Verdict::b) return std::string(name_b);
    return std::string(to_string(v));
  };
  std::ostringstream out;
  for (std::size_t k = 0; k < 3; ++k) {
    out << "delta_max_error_" << kAxes[k] << ": " << format_double(c.delta[k]) << '\n'
        << "ratio_max_error_" << kAxes[k] << ": " << format_double(c.ratio[k]) << '\n';
  }
  out << "solve_time_ratio: " << format_double(c.solve_time_ratio) << '\n'
      << "more_accurate: " << who(c.accuracy) << '\n'
      << "faster: " << who(c.speed) << '\n';
  return out.str();
}

}  // namespace wheelleg
