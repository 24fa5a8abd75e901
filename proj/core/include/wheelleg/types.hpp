#pragma once

#include <array>
#include <cstddef>

namespace wheelleg {

inline constexpr std::size_t kWheelCount = 4;

/// One value per wheel. Wheel order: 0 front-left, 1 rear-left,
/// 2 front-right, 3 rear-right.
using WheelArray = std::array<double, kWheelCount>;

enum class ChassisMode { physical, literal };
enum class TireMode { standard, literal };

struct ModelOptions {
  ChassisMode chassis = ChassisMode::physical;
  TireMode tire = TireMode::standard;

  friend bool operator==(const ModelOptions&, const ModelOptions&) = default;
};

/// Planar pose, body-frame velocities and the current track width.
struct ChassisState {
  double x = 0.0;         // world X (m)
  double y = 0.0;         // world Y (m)
  double theta = 0.0;     // heading (rad), wrapped to (-pi, pi]
  double v_x = 0.0;       // body longitudinal velocity (m/s)
  double v_y = 0.0;       // body lateral velocity (m/s)
  double yaw_rate = 0.0;  // (rad/s)
  double track = 0.0;     // current track width d (m)

  friend bool operator==(const ChassisState&, const ChassisState&) = default;
};

struct WheelState {
  WheelArray spin{};  // omega_w (rad/s), sign free

  friend bool operator==(const WheelState&, const WheelState&) = default;
};

/// Per-wheel tire quantities evaluated at one instant.
struct TireState {
  WheelArray load{};      // F_z (N)
  WheelArray slip{};      // lambda
  WheelArray sideslip{};  // alpha (rad)
  WheelArray combined{};  // s_res
  WheelArray force_x{};   // F_x (N), wheel frame
  WheelArray force_y{};   // F_y (N), wheel frame
};

/// Motor commands in input units; torque on wheel i is motor_gain[i] * u[i].
struct ControlInput {
  WheelArray u{};

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

/// Lower/upper bound applied to every motor command.
struct InputBounds {
  double lower = -10.0;
  double upper = 10.0;

  friend bool operator==(const InputBounds&, const InputBounds&) = default;
};

struct ChassisRates {
  double v_x = 0.0;
  double v_y = 0.0;
  double yaw_rate = 0.0;
};

}  // namespace wheelleg
