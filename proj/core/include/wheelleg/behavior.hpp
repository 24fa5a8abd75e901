#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wheelleg/params.hpp"
#include "wheelleg/plant.hpp"
#include "wheelleg/reference.hpp"

namespace wheelleg {

/// Obstacle centered on the path. `length` is its extent along the path.
struct Obstacle {
  double s_position = 0.0;  // arc position of the obstacle center (m)
  double width = 0.0;       // d_s (m)
  double height = 0.0;      // (m)
  double length = 1.0;      // (m)

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

enum class BehaviorKind { track, widen_track, raise_body, bypass };
std::string_view to_string(BehaviorKind kind);

/// One (alpha_i, t_i) segment. Widen-track segments ramp the track width
/// from d_from to d_target and are the only ones with gamma = 1; a restore
/// to d0 is a widen-track segment whose target is d0.
struct Behavior {
  int gamma = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double d_from = 0.0;
  double d_target = 0.0;
  BehaviorKind kind = BehaviorKind::track;

  friend bool operator==(const Behavior&, const Behavior&) = default;
};

/// Event trigger: 1 iff d_s lies in the open interval (d0, d0 + delta_max).
int trigger(double obstacle_width, double track_width, double max_stretch);

/// Decides how an obstacle is overcome: straddle by widening the track,
/// pass under a raised body, or go around (the reference must avoid it).
BehaviorKind classify_obstacle(const Obstacle& obstacle, const RobotParams& params,
                               double clearance_max);

/// Linear ramp from d_from to behavior.d_target over `duration` seconds
/// starting at behavior.t_start, constant afterwards. t must lie inside the
/// behavior's interval.
double polygon_ramp(double t, const Behavior& behavior, double duration, double d_from);

class BehaviorSchedule {
 public:
  BehaviorSchedule() = default;
  /// Segments must start at 0 and be time-contiguous.
  explicit BehaviorSchedule(std::vector<Behavior> segments);

  const std::vector<Behavior>& segments() const noexcept { return segments_; }
  double end_time() const { return segments_.empty() ? 0.0 : segments_.back().t_end; }

  /// Segment whose half-open interval [t_start, t_end) contains t; the last
  /// segment for t at or past the end.
  const Behavior& active(double t) const;
  int gamma_at(double t) const { return active(t).gamma; }
  double track_width(double t) const;

  /// Behavior switch times t_1..t_n (segment starts after the first).
  std::vector<double> switch_times() const;
  /// First switch time strictly after t, if any.
  std::optional<double> next_switch(double t) const;

  TrackWidthProfile width_profile() const;

  friend bool operator==(const BehaviorSchedule&, const BehaviorSchedule&) = default;

 private:
  std::vector<Behavior> segments_;
};

struct ScheduleOptions {
  double adjust_time = 2.0;     // T_adj (s)
  double lead_distance = 3.0;   // ramp completes this far before wheel contact (m)
  double clear_margin = 0.5;    // past the rear wheels before restoring (m)
  double width_margin = 0.1;    // straddle width over the obstacle (m)
  double clearance_max = 1.5;   // highest obstacle passable under a raised body (m)
  double lookahead = 10.0;      // perception range ahead of the robot (m)
  double time_grid = 0.0;       // snap switch times up to multiples of this (0 = off)

  friend bool operator==(const ScheduleOptions&, const ScheduleOptions&) = default;
};

/// Converts obstacles (sorted by arc position) into a behavior schedule
/// covering [0, max(duration, last behavior end)].
///
/// A straddled obstacle yields widen (gamma = 1), wide tracking, restore
/// (gamma = 1). Raise-body and bypass obstacles yield one gamma = 0 segment
/// spanning wheel contact to clearance. Behaviors never start before the
/// obstacle is perceived: `detected_at[i]` when given, otherwise the time
/// the reference comes within `lookahead` of it. Throws ScheduleError when
/// two obstacles' windows overlap.
BehaviorSchedule build_schedule(std::span<const Obstacle> obstacles, const ReferencePath& path,
                                const RobotParams& params, const ScheduleOptions& options,
                                double duration, std::span<const double> detected_at = {});

}  // namespace wheelleg
