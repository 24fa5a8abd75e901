#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wheelleg {

enum class PathKind { straight, circle, lane_change, waypoint_spline };

std::string_view to_string(PathKind kind);
PathKind path_kind_from_string(std::string_view name);

struct Waypoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// Declarative reference path. Geometric kinds (straight, circle, lane
/// change) start at the origin heading along +X and are traversed at the
/// constant `speed`; waypoint splines carry their own timing.
struct PathSpec {
  std::string name;
  PathKind kind = PathKind::straight;
  double speed = 2.0;              // m/s along the path

  double length = 45.0;            // straight and circle arc length (m)
  double radius = 5.0;             // circle radius (m)
  int turn = 1;                    // circle direction, +1 left / -1 right

  double lateral_offset = 3.5;     // lane change (m)
  double transition_length = 25.0; // lane change, along X (m)
  double lead_length = 5.0;        // straight run before the transition (m)
  double tail_length = 5.0;        // straight run after the transition (m)

  std::vector<Waypoint> waypoints; // waypoint_spline
  std::string waypoint_file;       // informational; waypoints are loaded eagerly

  friend bool operator==(const PathSpec&, const PathSpec&) = default;
};

struct ReferencePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;      // heading of the velocity vector (rad)
  double speed = 0.0;      // m/s
  double curvature = 0.0;  // K >= 0 (1/m)
  int direction = 0;       // C_d in {-1, 0, 1}, +1 turning left
};

struct CurvatureDirection {
  double curvature = 0.0;
  int direction = 0;
};

/// K = |x' y'' - x'' y'| / (x'^2 + y'^2)^{3/2}, direction from the sign of
/// the planar cross product. Returns (0, 0) below kStandstill speed.
CurvatureDirection curvature_direction(double dx, double dy, double ddx, double ddy);

/// Evaluated reference path with arc-length bookkeeping.
class ReferencePath {
 public:
  explicit ReferencePath(PathSpec spec);

  const PathSpec& spec() const noexcept { return spec_; }
  double duration() const noexcept { return duration_; }
  double length() const noexcept { return total_arc_; }

  struct Kinematics {
    double x = 0.0, y = 0.0;
    double vx = 0.0, vy = 0.0;
    double ax = 0.0, ay = 0.0;
  };
  /// Position and its first two time derivatives. Past the end the path
  /// continues straight at the final velocity. Throws RangeError for t < 0.
  Kinematics kinematics(double t) const;

  /// Arc length travelled by time t (continues linearly past the end).
  double arc_at(double t) const;
  /// Inverse of arc_at.
  double time_at_arc(double arc) const;
  /// Time of the path point nearest to (x, y), searched around t_guess.
  double project(double x, double y, double t_guess) const;

 private:
  struct GeometricSample {
    double x, y, tx, ty, kappa;
  };
  GeometricSample geometric(double arc) const;
  double lane_change_x_at_arc(double arc) const;
  double lane_change_arc_at_x(double x) const;
  Kinematics spline_kinematics(double t) const;
  double spline_arc(double t) const;
  double spline_segment_arc(std::size_t i, double t_end) const;

  PathSpec spec_;
  double duration_ = 0.0;
  double total_arc_ = 0.0;

  // lane change: cumulative arc at uniformly spaced X knots over the transition
  std::vector<double> lane_arc_;
  double lane_dx_ = 0.0;

  // waypoint spline: per-knot second derivatives and cumulative arc
  std::vector<double> spline_mx_, spline_my_, spline_arc_;
};

/// Reference at time t in [0, duration]; throws RangeError outside.
ReferencePoint sample_reference(const ReferencePath& path, double t);
/// Same as sample_reference but accepts t past the end (straight continuation).
ReferencePoint sample_reference_extended(const ReferencePath& path, double t);

/// Unwraps theta along consecutive samples so the sequence is continuous.
void unwrap_headings(std::vector<ReferencePoint>& points);

struct ScenarioPaths {
  PathSpec line1;
  PathSpec line2;
  std::array<double, 2> line2_stations{};  // obstacle arc positions along Line 2 (m)
};

/// Line 1: single lane change, 3.5 m offset over a 25 m transition at 2 m/s.
/// Line 2: 45 m straight at 2 m/s passing obstacle stations at 15 m and 32 m.
ScenarioPaths build_scenario_paths();

/// Preset lookup by name ("line1", "line2"). Throws RangeError if unknown.
PathSpec preset_path(std::string_view name);

/// Plain-text table with one `t X Y` row per line (`#` comments allowed).
std::vector<Waypoint> parse_waypoints(std::string_view text);
std::vector<Waypoint> load_waypoints(const std::filesystem::path& file);

}  // namespace wheelleg
