#pragma once

#include "wheelleg/params.hpp"
#include "wheelleg/types.hpp"

namespace wheelleg {

/// Velocity magnitude below which slip quantities are reported as zero.
inline constexpr double kStandstill = 1e-6;

/// Longitudinal slip (omega r - v_x) / max(omega r, v_x), clamped to [-1, 1].
/// Zero at standstill.
double slip_ratio(double wheel_spin, double v_x, double wheel_radius);

/// Per-wheel sideslip angles from body velocities, steering angles and the
/// track width carried by `state`. A wheel whose velocity denominator is
/// below kStandstill gets alpha = 0.
WheelArray sideslip_angles(const ChassisState& state, const WheelArray& steer,
                           const RobotParams& params);

/// sqrt(lambda^2 + tan(alpha)^2). Throws DomainError for |alpha| >= pi/2.
double combined_slip(double slip, double sideslip);

struct TireForce {
  double total = 0.0;  // F_t
  double x = 0.0;      // F_x
  double y = 0.0;      // F_y
};

/// Burckhardt friction force split into longitudinal and lateral parts in
/// proportion to lambda and tan(alpha).
///
/// Standard mode: F_t = F_z (c1 (1 - exp(-c2 s)) - c3 s).
/// Literal mode evaluates F_z c1 (1 - exp(c2 s)) - c3 s instead,
/// which is only useful for formula-level comparison.
/// The split uses F_t / s, taken at its limit when s is zero.
TireForce tire_forces(double load, double slip, double sideslip, const RobotParams& params,
                      TireMode mode = TireMode::standard);

}  // namespace wheelleg
