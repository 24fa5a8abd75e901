#include "wheelleg/mpc/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "wheelleg/dynamics.hpp"
#include "wheelleg/errors.hpp"
#include "wheelleg/geometry.hpp"
#include "wheelleg/mpc/horizon.hpp"
#include "wheelleg/mpc/shooting.hpp"

namespace wheelleg::mpc {
namespace {

constexpr std::size_t kStateDim = 10;
constexpr std::size_t kErrorDim = 4;  // X, Y, yaw, admissible-set excess

Eigen::VectorXd to_vector(const PlantState& s) {
  Eigen::VectorXd v(kStateDim);
  const auto& c = s.chassis;
  v << c.x, c.y, c.theta, c.v_x, c.v_y, c.yaw_rate, s.wheels.spin[0], s.wheels.spin[1],
      s.wheels.spin[2], s.wheels.spin[3];
  return v;
}

PlantState from_vector(const Eigen::VectorXd& v, double track) {
  PlantState s;
  s.chassis = {v[0], v[1], v[2], v[3], v[4], v[5], track};
  s.wheels.spin = {v[6], v[7], v[8], v[9]};
  return s;
}

std::int64_t substeps_per_control(const MpcConfig& config, double plant_dt) {
  const double ratio = config.dt / plant_dt;
  const auto n = static_cast<std::int64_t>(std::llround(ratio));
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
    throw DomainError("controller dt must be an integer multiple of the plant dt");
  }
  return n;
}

}  // namespace

void MpcConfig::validate() const {
  if (control_horizon < 1) throw DomainError("control_horizon must be at least 1");
  if (prediction_horizon < control_horizon) {
    throw DomainError("prediction_horizon must be >= control_horizon");
  }
  if (!(dt > 0.0)) throw DomainError("controller dt must be positive");
  for (double w : q) {
    if (!(w > 0.0)) throw DomainError("q weights must be positive");
  }
  for (double w : r) {
    if (!(w > 0.0)) throw DomainError("r weights must be positive");
  }
  for (double w : s) {
    if (!(w >= 0.0)) throw DomainError("s weights must be non-negative");
  }
  if (!(bounds.lower < bounds.upper)) throw DomainError("u_min must be below u_max");
  if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be non-negative");
  if (!(state_penalty >= 0.0)) throw DomainError("state_penalty must be non-negative");
  if (!(max_speed > 0.0)) throw DomainError("max_speed must be positive");
}

WheelArray project_inputs(const WheelArray& u, const InputBounds& bounds) {
  WheelArray out;
  for (std::size_t i = 0; i < kWheelCount; ++i) out[i] = std::clamp(u[i], bounds.lower, bounds.upper);
  return out;
}

StateCheck state_constraint_check(const ChassisState& state, const RobotParams& params,
                                  const MpcConfig& config) {
  StateCheck out;
  out.speed_excess = std::max(0.0, std::hypot(state.v_x, state.v_y) - config.max_speed);
  if (state.track < params.track_width) {
    out.track_excess = params.track_width - state.track;
  } else if (state.track > params.max_track_width()) {
    out.track_excess = state.track - params.max_track_width();
  }
  out.within = out.speed_excess == 0.0 && out.track_excess == 0.0;
  return out;
}

WheelArray reference_steering(const ReferencePoint& ref, const RobotParams& params, double track) {
  const double limit = (2.0 - 1e-3) / track;
  return ackermann_angles(std::min(ref.curvature, limit), ref.direction, params, track);
}

ControlInput equilibrium_input(const PlantState& state, const RobotParams& params,
                               const InputBounds& bounds) {
  ControlInput u;
  for (std::size_t i = 0; i < kWheelCount; ++i) {
    u.u[i] = resistance_torque(state.wheels.spin[i], params) / params.motor_gain[i];
  }
  u.u = project_inputs(u.u, bounds);
  return u;
}

MpcSolution solve(const PlantState& x_now, const PredictionContext& ctx, const MpcConfig& config,
                  const MpcSolution* warm_start) {
  config.validate();
  if (ctx.path == nullptr || ctx.schedule == nullptr) {
    throw DomainError("solve: prediction context needs a path and a schedule");
  }
  const auto started = std::chrono::steady_clock::now();

  const auto horizon = static_cast<std::size_t>(config.prediction_horizon);
  const auto control = static_cast<std::size_t>(config.control_horizon);
  const std::int64_t sub = substeps_per_control(config, ctx.plant_dt);
  const TrackWidthProfile width = ctx.schedule->width_profile();
  const RobotParams& params = ctx.params;

  // Reference and kinematic steering at every control step of the window.
  std::vector<ReferencePoint> refs(horizon + 1);
  std::vector<WheelArray> steer(horizon);
  for (std::size_t k = 0; k <= horizon; ++k) {
    const double t = grid_time(ctx.base_step + static_cast<std::int64_t>(k) * sub, ctx.plant_dt);
    refs[k] = sample_reference_extended(*ctx.path, t);
    if (k < horizon) steer[k] = reference_steering(refs[k], params, width.at(t));
  }
  unwrap_headings(refs);

  ShootingProblem problem;
  problem.state_dim = kStateDim;
  problem.input_dim = kWheelCount;
  problem.error_dim = kErrorDim;
  problem.horizon = horizon;
  problem.control_horizon = control;
  problem.dt = config.dt;
  problem.translation_states = {0, 1};
  problem.step = [&](std::size_t k, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const std::int64_t first = ctx.base_step + static_cast<std::int64_t>(k) * sub;
    PlantState s = from_vector(x, width.at(grid_time(first, ctx.plant_dt)));
    PlantInput in;
    for (std::size_t i = 0; i < kWheelCount; ++i) in.command.u[i] = u[static_cast<Eigen::Index>(i)];
    in.steer = steer[k];
    for (std::int64_t i = 0; i < sub; ++i) {
      s = plant_step(s, in, grid_time(first + i, ctx.plant_dt), ctx.plant_dt, params, width,
                     ctx.model);
    }
    return to_vector(s);
  };
  problem.error = [&](std::size_t k, const Eigen::VectorXd& x) {
    Eigen::VectorXd e(kErrorDim);
    e[0] = x[0] - refs[k].x;
    e[1] = x[1] - refs[k].y;
    e[2] = wrap_angle(x[2] - refs[k].theta);
    e[3] = std::max(0.0, std::hypot(x[3], x[4]) - config.max_speed);
    return e;
  };
  problem.stage_weight = Eigen::Vector4d(config.q[0], config.q[1], config.q[2], config.state_penalty);
  problem.terminal_weight = Eigen::Vector4d(config.s[0], config.s[1], config.s[2], 0.0);
  problem.input_weight = Eigen::Map<const Eigen::Vector4d>(config.r.data());
  problem.lower = Eigen::Vector4d::Constant(config.bounds.lower);
  problem.upper = Eigen::Vector4d::Constant(config.bounds.upper);
  problem.segment_ends =
      segment_ends(grid_time(ctx.base_step, ctx.plant_dt), config.dt, horizon,
                   ctx.schedule->switch_times());

  Eigen::MatrixXd initial(kWheelCount, control);
  if (warm_start != nullptr && !warm_start->u_sequence.empty()) {
    const auto& prev = warm_start->u_sequence;
    for (std::size_t b = 0; b < control; ++b) {
      const auto& u = prev[std::min(b + 1, prev.size() - 1)].u;
      for (std::size_t i = 0; i < kWheelCount; ++i) {
        initial(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = u[i];
      }
    }
  } else {
    const auto eq = equilibrium_input(x_now, params, config.bounds);
    for (std::size_t b = 0; b < control; ++b) {
      for (std::size_t i = 0; i < kWheelCount; ++i) {
        initial(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = eq.u[i];
      }
    }
  }

  SolverOptions options;
  options.max_iterations = config.max_iterations;
  options.tolerance = config.tolerance;
  const auto result = solve_shooting(problem, to_vector(x_now), initial, options);

  MpcSolution out;
  out.u_sequence.resize(control);
  for (std::size_t b = 0; b < control; ++b) {
    for (std::size_t i = 0; i < kWheelCount; ++i) {
      out.u_sequence[b].u[i] = result.inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
    }
    out.u_sequence[b].u = project_inputs(out.u_sequence[b].u, config.bounds);
  }
  out.predicted_trajectory.reserve(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) {
    const double t = grid_time(ctx.base_step + static_cast<std::int64_t>(k) * sub, ctx.plant_dt);
    PlantState s = from_vector(result.states[k], width.at(t));
    out.predicted_trajectory.push_back(s);
  }
  out.cost = result.cost;
  out.iterations = result.iterations;
  out.cost_history = result.cost_history;
  out.model_steps = result.model_steps * static_cast<std::size_t>(sub);
  out.failed = result.failed;
  out.solve_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace wheelleg::mpc
