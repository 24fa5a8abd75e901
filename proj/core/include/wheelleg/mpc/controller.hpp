#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "wheelleg/behavior.hpp"
#include "wheelleg/params.hpp"
#include "wheelleg/plant.hpp"
#include "wheelleg/reference.hpp"
#include "wheelleg/types.hpp"

namespace wheelleg::mpc {

/// Receding-horizon controller settings. The tracked error is
/// (X, Y, yaw); the position block of `q` carries the 2-D weights
/// diag(1, 10), yaw gets its own weight.
struct MpcConfig {
  int prediction_horizon = 60;   // N_p (steps)
  int control_horizon = 30;      // N_c (steps)
  double dt = 0.05;              // controller step (s)
  std::array<double, 3> q{1.0, 10.0, 5.0};
  WheelArray r{1.0, 1.0, 1.0, 1.0};
  std::array<double, 3> s{10.0, 100.0, 50.0};
  InputBounds bounds;
  int max_iterations = 10;
  double tolerance = 1e-6;
  double state_penalty = 1000.0;  // soft weight on leaving the admissible state set
  double max_speed = 10.0 / 3.6;  // |v| bound of the admissible set (m/s)

  /// Throws DomainError naming the violated invariant.
  void validate() const;

  friend bool operator==(const MpcConfig&, const MpcConfig&) = default;
};

struct MpcSolution {
  std::vector<ControlInput> u_sequence;          // control_horizon inputs
  std::vector<PlantState> predicted_trajectory;  // prediction_horizon states after each step
  double cost = 0.0;
  int iterations = 0;
  double solve_time = 0.0;                       // wall clock (s)
  std::size_t model_steps = 0;                   // plant integrator steps spent
  std::vector<double> cost_history;              // accepted-iterate costs
  bool failed = false;
};

/// Everything the prediction model needs besides the current state.
struct PredictionContext {
  const ReferencePath* path = nullptr;
  const BehaviorSchedule* schedule = nullptr;
  RobotParams params;
  ModelOptions model;
  double plant_dt = 0.005;
  std::int64_t base_step = 0;  // plant grid index at which the horizon starts
};

/// Componentwise clamp to the bounds.
WheelArray project_inputs(const WheelArray& u, const InputBounds& bounds);

struct StateCheck {
  bool within = true;
  double speed_excess = 0.0;  // m/s above max_speed
  double track_excess = 0.0;  // m outside [d0, d0 + delta_max]
};
/// Admissible set: planar speed at most max_speed, track width inside the
/// stretch range (both ends allowed).
StateCheck state_constraint_check(const ChassisState& state, const RobotParams& params,
                                  const MpcConfig& config);

/// Kinematic Ackermann steering for a reference point at the given track
/// width. Curvatures too tight for the track are limited to the tightest
/// feasible turn.
WheelArray reference_steering(const ReferencePoint& ref, const RobotParams& params, double track);

/// Inputs that hold the wheels' resistance torque at their current spin.
ControlInput equilibrium_input(const PlantState& state, const RobotParams& params,
                               const InputBounds& bounds);

/// One receding-horizon solve over the behavior-split window starting at
/// ctx.base_step. `warm_start` is shifted by one control step.
MpcSolution solve(const PlantState& x_now, const PredictionContext& ctx, const MpcConfig& config,
                  const MpcSolution* warm_start = nullptr);

}  // namespace wheelleg::mpc
