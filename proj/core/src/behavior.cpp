#include "wheelleg/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wheelleg/errors.hpp"

namespace wheelleg {

std::string_view to_string(BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::track: return "track";
    case BehaviorKind::widen_track: return "widen-track";
    case BehaviorKind::raise_body: return "raise-body";
    case BehaviorKind::bypass: return "bypass";
  }
  return "track";
}

int trigger(double obstacle_width, double track_width, double max_stretch) {
  return (obstacle_width > track_width && obstacle_width < track_width + max_stretch) ? 1 : 0;
}

BehaviorKind classify_obstacle(const Obstacle& obstacle, const RobotParams& params,
                               double clearance_max) {
  if (trigger(obstacle.width, params.track_width, params.max_stretch) == 1 &&
      obstacle.height < clearance_max) {
    return BehaviorKind::widen_track;
  }
  if (obstacle.width <= params.track_width && obstacle.height <= clearance_max) {
    return BehaviorKind::raise_body;
  }
  if (obstacle.height > clearance_max || obstacle.width >= params.max_track_width()) {
    return BehaviorKind::bypass;
  }
  return BehaviorKind::track;
}

double polygon_ramp(double t, const Behavior& behavior, double duration, double d_from) {
  if (t < behavior.t_start || t > behavior.t_end) {
    throw RangeError("polygon_ramp: t outside the behavior interval");
  }
  if (!(duration > 0.0)) return behavior.d_target;
  const double frac = std::min(1.0, (t - behavior.t_start) / duration);
  return d_from + (behavior.d_target - d_from) * frac;
}

BehaviorSchedule::BehaviorSchedule(std::vector<Behavior> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ScheduleError("schedule needs at least one behavior");
  if (segments_.front().t_start != 0.0) throw ScheduleError("first behavior must start at t = 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& b = segments_[i];
    if (!(b.t_end > b.t_start)) throw ScheduleError("behavior with empty interval");
    if (i > 0 && b.t_start != segments_[i - 1].t_end) {
      throw ScheduleError("behaviors are not time-contiguous");
    }
    if ((b.gamma == 1) != (b.kind == BehaviorKind::widen_track)) {
      throw ScheduleError("gamma must be 1 exactly for widen-track behaviors");
    }
  }
}

const Behavior& BehaviorSchedule::active(double t) const {
  if (segments_.empty()) throw RangeError("empty behavior schedule");
  const auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double v, const Behavior& b) { return v < b.t_start; });
  if (it == segments_.begin()) return segments_.front();
  return *(it - 1);
}

double BehaviorSchedule::track_width(double t) const {
  const auto& b = active(t);
  if (b.kind != BehaviorKind::widen_track) return b.d_target;
  const double clamped = std::min(t, b.t_end);
  return polygon_ramp(std::max(clamped, b.t_start), b, b.t_end - b.t_start, b.d_from);
}

std::vector<double> BehaviorSchedule::switch_times() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < segments_.size(); ++i) out.push_back(segments_[i].t_start);
  return out;
}

std::optional<double> BehaviorSchedule::next_switch(double t) const {
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    if (segments_[i].t_start > t) return segments_[i].t_start;
  }
  return std::nullopt;
}

TrackWidthProfile BehaviorSchedule::width_profile() const {
  std::vector<TrackWidthProfile::Knot> knots;
  for (const auto& b : segments_) {
    if (b.kind == BehaviorKind::widen_track) {
      knots.push_back({b.t_start, b.d_from});
      knots.push_back({b.t_end, b.d_target});
    } else {
      knots.push_back({b.t_start, b.d_target});
    }
  }
  return TrackWidthProfile(std::move(knots));
}

namespace {

double snap_up(double t, double grid) {
  if (!(grid > 0.0)) return t;
  return std::ceil(t / grid - 1e-9) * grid;
}

struct Episode {
  double t_start;
  double t_end;
  std::vector<Behavior> behaviors;
};

}  // namespace

BehaviorSchedule build_schedule(std::span<const Obstacle> obstacles, const ReferencePath& path,
                                const RobotParams& params, const ScheduleOptions& options,
                                double duration, std::span<const double> detected_at) {
  if (!detected_at.empty() && detected_at.size() != obstacles.size()) {
    throw ScheduleError("detected_at must match the obstacle count");
  }
  for (std::size_t i = 1; i < obstacles.size(); ++i) {
    if (obstacles[i].s_position < obstacles[i - 1].s_position) {
      throw ScheduleError("obstacles must be sorted by arc position");
    }
  }

  const double d0 = params.track_width;
  const double half_l = params.wheelbase / 2.0;
  const double grid = options.time_grid;
  const double adjust = snap_up(options.adjust_time, grid);

  std::vector<Episode> episodes;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const auto& obs = obstacles[i];
    const auto kind = classify_obstacle(obs, params, options.clearance_max);
    if (kind == BehaviorKind::track) continue;

    const double near_edge = obs.s_position - obs.length / 2.0;
    const double far_edge = obs.s_position + obs.length / 2.0;
    const double earliest =
        detected_at.empty() ? path.time_at_arc(std::max(0.0, near_edge - options.lookahead))
                            : detected_at[i];
    const double t_contact = path.time_at_arc(near_edge - half_l);
    const double t_clear = path.time_at_arc(far_edge + half_l + options.clear_margin);

    Episode ep;
    if (kind == BehaviorKind::widen_track) {
      const double target = std::min(obs.width + options.width_margin, params.max_track_width());
      const double want =
          path.time_at_arc(near_edge - half_l - options.lead_distance) - options.adjust_time;
      const double t_widen = snap_up(std::max(earliest, std::max(0.0, want)), grid);
      const double t_wide = snap_up(t_widen + adjust, grid);
      const double t_restore = snap_up(std::max(t_clear, t_wide), grid);
      const double t_done = snap_up(t_restore + adjust, grid);
      ep.t_start = t_widen;
      ep.t_end = t_done;
      ep.behaviors = {
          {1, t_widen, t_wide, d0, target, BehaviorKind::widen_track},
          {0, t_wide, t_restore, target, target, BehaviorKind::track},
          {1, t_restore, t_done, target, d0, BehaviorKind::widen_track},
      };
      if (t_restore == t_wide) ep.behaviors.erase(ep.behaviors.begin() + 1);
    } else {
      const double t0 = snap_up(std::max(earliest, t_contact), grid);
      const double t1 = snap_up(std::max(t_clear, t0 + (grid > 0.0 ? grid : 1e-3)), grid);
      ep.t_start = t0;
      ep.t_end = t1;
      ep.behaviors = {{0, t0, t1, d0, d0, kind}};
    }

    if (!episodes.empty() && ep.t_start < episodes.back().t_end) {
      std::ostringstream msg;
      msg << "obstacle at s=" << obs.s_position << " needs its " << to_string(kind)
          << " window from t=" << ep.t_start << " but the previous window runs until t="
          << episodes.back().t_end;
      throw ScheduleError(msg.str());
    }
    episodes.push_back(std::move(ep));
  }

  std::vector<Behavior> segments;
  double cursor = 0.0;
  for (const auto& ep : episodes) {
    if (ep.t_start > cursor) segments.push_back({0, cursor, ep.t_start, d0, d0, BehaviorKind::track});
    segments.insert(segments.end(), ep.behaviors.begin(), ep.behaviors.end());
    cursor = ep.t_end;
  }
  const double end = std::max(duration, cursor);
  if (end > cursor) {
    segments.push_back({0, cursor, end, d0, d0, BehaviorKind::track});
  } else if (segments.empty()) {
    segments.push_back({0, 0.0, std::max(end, 1e-3), d0, d0, BehaviorKind::track});
  }
  return BehaviorSchedule(std::move(segments));
}

}  // namespace wheelleg
