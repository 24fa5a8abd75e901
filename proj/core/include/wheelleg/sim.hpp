#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wheelleg/behavior.hpp"
#include "wheelleg/mpc/controller.hpp"
#include "wheelleg/params.hpp"
#include "wheelleg/reference.hpp"
#include "wheelleg/types.hpp"

namespace wheelleg {

/// How the per-row solve_time column is filled. `steps` records the
/// solver's plant-step count times a nominal 1 us per step; `wall` records
/// measured wall-clock time.
enum class TimingMode { steps, wall };
std::string_view to_string(TimingMode mode);
TimingMode timing_mode_from_string(std::string_view name);

inline constexpr double kNominalStepTime = 1e-6;

struct PerceptionOptions {
  double width_noise = 0.0;  // standard deviation of the perceived width (m)
  std::uint64_t seed = 1;

  friend bool operator==(const PerceptionOptions&, const PerceptionOptions&) = default;
};

struct ScenarioConfig {
  std::string name;
  PathSpec path;
  std::vector<Obstacle> obstacles;
  mpc::MpcConfig controller;
  RobotParams robot;
  ModelOptions model;
  ScheduleOptions schedule;
  PerceptionOptions perception;
  double duration = 0.0;  // s; 0 runs for the path's own duration
  double dt_plant = 0.005;
  double reconverge_band = 0.05;
  TimingMode timing = TimingMode::steps;

  double effective_duration() const;
  /// Throws DomainError naming the offending key ("section.key: message").
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Offending key and reason of the first broken invariant, if any.
struct ScenarioViolation {
  std::string key;
  std::string message;
};
std::optional<ScenarioViolation> find_violation(const ScenarioConfig& scenario);

struct PerceivedObstacle {
  std::size_t index = 0;  // into scenario.obstacles
  double width = 0.0;
  double height = 0.0;
  double distance = 0.0;  // arc distance from the robot to the obstacle's near edge (m)
};

/// Nearest obstacle whose near edge lies ahead of the robot within
/// `lookahead` metres of arc. The robot's arc position comes from projecting
/// (x, y) onto the path near `t_guess`. Width noise is drawn per obstacle
/// from the scenario seed, so repeated probes see the same value.
/// Obstacles flagged in `known` are skipped.
std::optional<PerceivedObstacle> perception_probe(const ScenarioConfig& scenario,
                                                  const ReferencePath& path,
                                                  const ChassisState& state, double t_guess,
                                                  double lookahead,
                                                  const std::vector<bool>& known = {});

/// One plant step of the closed-loop record. Inputs and steering are those
/// applied over [t, t + dt); the final row repeats the last applied values.
struct LogRow {
  double t = 0.0;
  double x_ref = 0.0, y_ref = 0.0, theta_ref = 0.0;
  double x = 0.0, y = 0.0, theta = 0.0;
  double v_x = 0.0, v_y = 0.0, omega_r = 0.0;
  double d = 0.0;
  int gamma = 0;
  WheelArray u{};
  WheelArray delta{};
  WheelArray lambda{};
  double solve_time = 0.0;

  friend bool operator==(const LogRow&, const LogRow&) = default;
};

struct TrajectoryLog {
  std::vector<LogRow> rows;

  friend bool operator==(const TrajectoryLog&, const TrajectoryLog&) = default;
};

struct CycleStats {
  double t = 0.0;
  int iterations = 0;
  double cost = 0.0;
  double wall_time = 0.0;
  std::size_t model_steps = 0;
  bool failed = false;
  std::vector<double> cost_history;
};

struct SimResult {
  TrajectoryLog log;
  BehaviorSchedule schedule;  // final schedule after all detections
  std::vector<CycleStats> cycles;
  int solver_failures = 0;
  bool diverged = false;
  std::string message;
};

/// Initial state: rolling at the reference speed on the path start.
PlantState initial_state(const ScenarioConfig& scenario, const ReferencePath& path);

/// Runs the perception / schedule / MPC / plant loop. Deterministic for a
/// given scenario. Plant divergence ends the run early with `diverged` set;
/// a failed solve holds the previous input. Throws ScheduleError when
/// perceived obstacles cannot be scheduled.
SimResult run_closed_loop(const ScenarioConfig& scenario);

/// Re-integrates the logged inputs and steering open loop from the
/// scenario's initial state, with the track width interpolated from the
/// logged d column. Returns one state per log row.
std::vector<PlantState> replay_open_loop(const ScenarioConfig& scenario,
                                         const TrajectoryLog& log);

}  // namespace wheelleg
