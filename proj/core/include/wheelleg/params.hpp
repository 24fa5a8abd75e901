#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wheelleg/types.hpp"

namespace wheelleg {

/// Physical and geometric constants of the robot.
///
/// Mass and wheel radius are the built robot's. Geometry (wheelbase, track, stretch), the wheel/motor constants and
/// the transmission resistance are estimates inside the 1.5 m x 1.5 m
/// footprint; see data/robot_params.txt.
struct RobotParams {
  double mass = 278.0;           // m (kg)
  double yaw_inertia = 66.72;    // I (kg m^2), m (l^2 + d0^2) / 12
  double wheelbase = 1.2;        // l (m)
  double track_width = 1.2;      // d0 (m)
  double max_stretch = 0.5;      // delta d_max (m)
  double wheel_radius = 0.1;     // r (m)
  double wheel_inertia = 0.5;    // J_w (kg m^2), motor inertia reflected through 40:1
  WheelArray motor_gain{20.0, 20.0, 20.0, 20.0};  // k_i (N m / unit)
  double coulomb_torque = 0.2;   // T_s Coulomb part (N m)
  double viscous_coeff = 0.01;   // T_s viscous part (N m s / rad)
  double c1 = 1.2801;            // Burckhardt, dry asphalt
  double c2 = 23.99;
  double c3 = 0.52;
  double gravity = 9.81;         // g (m/s^2)

  double max_track_width() const noexcept { return track_width + max_stretch; }
  /// Static vertical load per wheel, m g / 4.
  double wheel_load() const noexcept { return mass * gravity / 4.0; }

  /// Throws DomainError naming the first field that breaks an invariant.
  void validate() const;

  friend bool operator==(const RobotParams&, const RobotParams&) = default;
};

/// Box approximation m (l^2 + d0^2) / 12.
double box_yaw_inertia(double mass, double wheelbase, double track_width);

/// Sets one field by its file key. Returns false for unknown keys; throws
/// ParseError for unparsable values.
bool set_param(RobotParams& params, std::string_view key, std::string_view value);

/// Reads `key = value` lines over defaults. Unknown keys are rejected.
RobotParams parse_params(std::string_view text, const RobotParams& base = {});
RobotParams load_params(const std::filesystem::path& file);

/// Emits every field as `key = value`, round-trippable through parse_params.
std::string format_params(const RobotParams& params);

}  // namespace wheelleg
