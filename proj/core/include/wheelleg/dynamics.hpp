#pragma once

#include "wheelleg/params.hpp"
#include "wheelleg/types.hpp"

namespace wheelleg {

/// Body accelerations from tire forces.
///
/// Physical mode rotates each wheel-frame force into the body frame by its
/// steering angle and takes the yaw moment about the center of gravity from
/// the four corner positions. Literal mode sums F_x cos + F_y sin into the
/// x row and takes the yaw moment through the single lever sqrt(l^2 + d^2)/2.
ChassisRates chassis_derivative(const ChassisState& state, const TireState& tires,
                                const WheelArray& steer, const RobotParams& params,
                                ChassisMode mode = ChassisMode::physical);

/// Transmission resistance T_s = b omega + T_c sign(omega), sign(0) = 0.
double resistance_torque(double wheel_spin, const RobotParams& params);

/// (k_i u_i - T_s - F_x r) / J_w.
double wheel_derivative(std::size_t wheel, double input, double wheel_spin, double force_x,
                        const RobotParams& params);

/// Slip, sideslip and Burckhardt forces for all four wheels under the static
/// load split. Sideslip is clamped to just inside +-pi/2.
TireState evaluate_tires(const ChassisState& chassis, const WheelState& wheels,
                         const WheelArray& steer, const RobotParams& params, TireMode mode);

}  // namespace wheelleg
