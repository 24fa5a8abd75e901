#include "wheelleg/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "wheelleg/geometry.hpp"
#include "wheelleg/tire.hpp"

namespace wheelleg {
namespace {

// Keeps tan(alpha) finite for states far from anything physical.
constexpr double kSideslipLimit = kPi / 2.0 - 1e-3;

}  // namespace

ChassisRates chassis_derivative(const ChassisState& state, const TireState& tires,
                                const WheelArray& steer, const RobotParams& params,
                                ChassisMode mode) {
  double sum_x = 0.0;
  double sum_y = 0.0;
  double moment = 0.0;

  if (mode == ChassisMode::physical) {
    for (std::size_t i = 0; i < kWheelCount; ++i) {
      const double c = std::cos(steer[i]);
      const double s = std::sin(steer[i]);
      const double fx = tires.force_x[i] * c - tires.force_y[i] * s;
      const double fy = tires.force_x[i] * s + tires.force_y[i] * c;
      const auto corner = corner_position(i, params.wheelbase, state.track);
      sum_x += fx;
      sum_y += fy;
      moment += corner.x * fy - corner.y * fx;
    }
  } else {
    const double delta = geometry_delta(params, state.track);
    double lever_sum = 0.0;
    for (std::size_t i = 0; i < kWheelCount; ++i) {
      const double c = std::cos(steer[i]);
      const double s = std::sin(steer[i]);
      sum_x += tires.force_x[i] * c + tires.force_y[i] * s;
      sum_y += tires.force_x[i] * s + tires.force_y[i] * c;
      lever_sum += tires.force_x[i] * std::cos(steer[i] - delta) +
                   tires.force_y[i] * std::sin(steer[i] - delta);
    }
    const double lever =
        std::sqrt(params.wheelbase * params.wheelbase + state.track * state.track) / 2.0;
    moment = lever * lever_sum;
  }

  ChassisRates rates;
  rates.v_x = sum_x / params.mass + state.yaw_rate * state.v_y;
  rates.v_y = sum_y / params.mass - state.yaw_rate * state.v_x;
  rates.yaw_rate = moment / params.yaw_inertia;
  return rates;
}

double resistance_torque(double wheel_spin, const RobotParams& params) {
  const double sign = (wheel_spin > 0.0) - (wheel_spin < 0.0);
  return params.viscous_coeff * wheel_spin + params.coulomb_torque * sign;
}

double wheel_derivative(std::size_t wheel, double input, double wheel_spin, double force_x,
                        const RobotParams& params) {
  const double drive = params.motor_gain[wheel] * input;
  return (drive - resistance_torque(wheel_spin, params) - force_x * params.wheel_radius) /
         params.wheel_inertia;
}

TireState evaluate_tires(const ChassisState& chassis, const WheelState& wheels,
                         const WheelArray& steer, const RobotParams& params, TireMode mode) {
  TireState tires;
  const auto alpha = sideslip_angles(chassis, steer, params);
  const double load = params.wheel_load();
  for (std::size_t i = 0; i < kWheelCount; ++i) {
    tires.load[i] = load;
    tires.slip[i] = slip_ratio(wheels.spin[i], chassis.v_x, params.wheel_radius);
    tires.sideslip[i] = std::clamp(alpha[i], -kSideslipLimit, kSideslipLimit);
    tires.combined[i] = combined_slip(tires.slip[i], tires.sideslip[i]);
    const auto f = tire_forces(load, tires.slip[i], tires.sideslip[i], params, mode);
    tires.force_x[i] = f.x;
    tires.force_y[i] = f.y;
  }
  return tires;
}

}  // namespace wheelleg
