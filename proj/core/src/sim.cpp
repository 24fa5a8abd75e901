#include "wheelleg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wheelleg/dynamics.hpp"
#include "wheelleg/errors.hpp"
#include "wheelleg/geometry.hpp"
#include "wheelleg/tire.hpp"

namespace wheelleg {
namespace {

constexpr double kDivergenceDistance = 10.0;  // m from the reference

bool is_multiple(double a, double b) {
  const double ratio = a / b;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

std::int64_t step_count(double duration, double dt) {
  return static_cast<std::int64_t>(std::ceil(duration / dt - 1e-9));
}

}  // namespace

std::string_view to_string(TimingMode mode) {
  return mode == TimingMode::wall ? "wall" : "steps";
}

TimingMode timing_mode_from_string(std::string_view name) {
  if (name == "steps") return TimingMode::steps;
  if (name == "wall") return TimingMode::wall;
  throw DomainError("unknown timing mode '" + std::string(name) + "'");
}

double ScenarioConfig::effective_duration() const {
  return duration > 0.0 ? duration : ReferencePath(path).duration();
}

std::optional<ScenarioViolation> find_violation(const ScenarioConfig& s) {
  try {
    s.controller.validate();
  } catch (const DomainError& e) {
    std::string msg = e.what();
    std::string key = "controller";
    if (msg.find("control_horizon") != std::string::npos ||
        msg.find("prediction_horizon") != std::string::npos) {
      key = "controller.control_horizon";
    } else if (msg.find("dt") != std::string::npos) {
      key = "controller.dt";
    }
    return ScenarioViolation{key, msg};
  }
  try {
    s.robot.validate();
  } catch (const DomainError& e) {
    return ScenarioViolation{"robot", e.what()};
  }
  if (!(s.dt_plant > 0.0)) return ScenarioViolation{"sim.dt_plant", "must be positive"};
  if (s.dt_plant > s.controller.dt) {
    return ScenarioViolation{"sim.dt_plant", "must not exceed controller.dt"};
  }
  if (!is_multiple(s.controller.dt, s.dt_plant)) {
    return ScenarioViolation{"controller.dt", "must be an integer multiple of sim.dt_plant"};
  }
  if (s.duration < 0.0 || !std::isfinite(s.duration)) {
    return ScenarioViolation{"sim.duration", "must be positive (0 follows the path)"};
  }
  if (!(s.reconverge_band > 0.0)) {
    return ScenarioViolation{"sim.reconverge_band", "must be positive"};
  }
  if (!(s.path.speed > 0.0)) return ScenarioViolation{"path.speed", "must be positive"};
  if (s.path.kind == PathKind::waypoint_spline && s.path.waypoints.size() < 2) {
    return ScenarioViolation{"path.waypoint", "a spline needs at least two waypoints"};
  }
  for (const auto& o : s.obstacles) {
    if (!(o.width > 0.0) || !(o.height > 0.0) || !(o.length > 0.0)) {
      return ScenarioViolation{"obstacle", "width, height and length must be positive"};
    }
  }
  for (std::size_t i = 1; i < s.obstacles.size(); ++i) {
    if (s.obstacles[i].s_position < s.obstacles[i - 1].s_position) {
      return ScenarioViolation{"obstacle.s", "obstacles must be listed by increasing s"};
    }
  }
  if (!(s.perception.width_noise >= 0.0)) {
    return ScenarioViolation{"perception.width_noise", "must be non-negative"};
  }
  if (!(s.schedule.adjust_time > 0.0)) {
    return ScenarioViolation{"schedule.adjust_time", "must be positive"};
  }
  if (!(s.schedule.lookahead > 0.0)) {
    return ScenarioViolation{"schedule.lookahead", "must be positive"};
  }
  return std::nullopt;
}

void ScenarioConfig::validate() const {
  if (auto v = find_violation(*this)) throw DomainError(v->key + ": " + v->message);
}

std::optional<PerceivedObstacle> perception_probe(const ScenarioConfig& scenario,
                                                  const ReferencePath& path,
                                                  const ChassisState& state, double t_guess,
                                                  double lookahead,
                                                  const std::vector<bool>& known) {
  const double arc = path.arc_at(path.project(state.x, state.y, t_guess));
  std::optional<PerceivedObstacle> best;
  for (std::size_t i = 0; i < scenario.obstacles.size(); ++i) {
    if (i < known.size() && known[i]) continue;
    const auto& o = scenario.obstacles[i];
    const double distance = o.s_position - o.length / 2.0 - arc;
    if (distance < 0.0 || distance > lookahead) continue;
    if (best && best->distance <= distance) continue;
    double width = o.width;
    if (scenario.perception.width_noise > 0.0) {
      std::mt19937_64 rng(scenario.perception.seed + i);
      std::normal_distribution<double> noise(0.0, scenario.perception.width_noise);
      width = std::max(0.0, width + noise(rng));
    }
    best = PerceivedObstacle{i, width, o.height, distance};
  }
  return best;
}

PlantState initial_state(const ScenarioConfig& scenario, const ReferencePath& path) {
  const auto ref = sample_reference(path, 0.0);
  return rolling_state(ref.x, ref.y, ref.theta, ref.speed, scenario.robot.track_width,
                       scenario.robot);
}

SimResult run_closed_loop(const ScenarioConfig& scenario) {
  scenario.validate();
  const ReferencePath path(scenario.path);
  const RobotParams& params = scenario.robot;
  const double dt = scenario.dt_plant;
  const double duration = scenario.effective_duration();
  const auto total = step_count(duration, dt);
  const auto sub = static_cast<std::int64_t>(std::llround(scenario.controller.dt / dt));

  ScheduleOptions sched_opts = scenario.schedule;
  sched_opts.time_grid = dt;

  SimResult result;
  std::vector<Obstacle> known;
  std::vector<double> detected_at;
  std::vector<bool> seen(scenario.obstacles.size(), false);
  auto rebuild = [&] {
    result.schedule = build_schedule(known, path, params, sched_opts, duration, detected_at);
  };
  rebuild();
  TrackWidthProfile width = result.schedule.width_profile();

  PlantState state = initial_state(scenario, path);
  mpc::PredictionContext ctx;
  ctx.path = &path;
  ctx.schedule = &result.schedule;
  ctx.params = params;
  ctx.model = scenario.model;
  ctx.plant_dt = dt;

  std::optional<mpc::MpcSolution> previous;
  ControlInput applied = mpc::equilibrium_input(state, params, scenario.controller.bounds);
  WheelArray steer{};
  double solve_time = 0.0;
  double t_proj = 0.0;
  result.log.rows.reserve(static_cast<std::size_t>(total + 1));

  auto log_row = [&](std::int64_t step) {
    const double t = grid_time(step, dt);
    auto ref = sample_reference_extended(path, t);
    const auto tires = evaluate_tires(state.chassis, state.wheels, steer, params, scenario.model.tire);
    LogRow row;
    row.t = t;
    row.x_ref = ref.x;
    row.y_ref = ref.y;
    row.theta_ref = wrap_angle(ref.theta);
    row.x = state.chassis.x;
    row.y = state.chassis.y;
    row.theta = state.chassis.theta;
    row.v_x = state.chassis.v_x;
    row.v_y = state.chassis.v_y;
    row.omega_r = state.chassis.yaw_rate;
    row.d = state.chassis.track;
    row.gamma = result.schedule.gamma_at(t);
    row.u = applied.u;
    row.delta = steer;
    row.lambda = tires.slip;
    row.solve_time = solve_time;
    result.log.rows.push_back(row);
    return ref;
  };

  std::int64_t step = 0;
  while (step < total) {
    const double t = grid_time(step, dt);

    t_proj = path.project(state.chassis.x, state.chassis.y, t);
    if (auto seen_obs = perception_probe(scenario, path, state.chassis, t_proj,
                                         scenario.schedule.lookahead, seen)) {
      seen[seen_obs->index] = true;
      Obstacle o = scenario.obstacles[seen_obs->index];
      o.width = seen_obs->width;
      const auto pos = std::upper_bound(known.begin(), known.end(), o,
                                        [](const Obstacle& a, const Obstacle& b) {
                                          return a.s_position < b.s_position;
                                        });
      detected_at.insert(detected_at.begin() + (pos - known.begin()), t);
      known.insert(pos, o);
      rebuild();
      width = result.schedule.width_profile();
    }

    ctx.base_step = step;
    auto sol = mpc::solve(state, ctx, scenario.controller, previous ? &*previous : nullptr);
    CycleStats stats;
    stats.t = t;
    stats.iterations = sol.iterations;
    stats.cost = sol.cost;
    stats.wall_time = sol.solve_time;
    stats.model_steps = sol.model_steps;
    stats.failed = sol.failed;
    stats.cost_history = sol.cost_history;
    result.cycles.push_back(std::move(stats));
    if (sol.failed) {
      ++result.solver_failures;
    } else {
      applied = sol.u_sequence.front();
      previous = std::move(sol);
    }
    solve_time = scenario.timing == TimingMode::wall
                     ? result.cycles.back().wall_time
                     : static_cast<double>(result.cycles.back().model_steps) * kNominalStepTime;
    steer = mpc::reference_steering(sample_reference_extended(path, t), params, width.at(t));

    for (std::int64_t i = 0; i < sub && step < total; ++i, ++step) {
      const auto ref = log_row(step);
      if (std::hypot(state.chassis.x - ref.x, state.chassis.y - ref.y) > kDivergenceDistance) {
        result.diverged = true;
        result.message = "tracking error exceeded " + std::to_string(kDivergenceDistance) +
                         " m at t=" + std::to_string(grid_time(step, dt));
        return result;
      }
      try {
        state = plant_step(state, PlantInput{applied, steer}, grid_time(step, dt), dt, params,
                           width, scenario.model);
      } catch (const IntegrationError& e) {
        result.diverged = true;
        result.message = e.what();
        return result;
      }
    }
  }
  log_row(step);
  return result;
}

std::vector<PlantState> replay_open_loop(const ScenarioConfig& scenario,
                                         const TrajectoryLog& log) {
  if (log.rows.empty()) return {};
  const ReferencePath path(scenario.path);
  std::vector<TrackWidthProfile::Knot> knots;
  knots.reserve(log.rows.size());
  for (const auto& row : log.rows) knots.push_back({row.t, row.d});
  const TrackWidthProfile width(std::move(knots));

  std::vector<PlantState> states;
  states.reserve(log.rows.size());
  PlantState state = initial_state(scenario, path);
  states.push_back(state);
  for (std::size_t k = 0; k + 1 < log.rows.size(); ++k) {
    const auto& row = log.rows[k];
    PlantInput in{ControlInput{row.u}, row.delta};
    state = plant_step(state, in, grid_time(static_cast<std::int64_t>(k), scenario.dt_plant),
                       scenario.dt_plant, scenario.robot, width, scenario.model);
    states.push_back(state);
  }
  return states;
}

}  // namespace wheelleg
