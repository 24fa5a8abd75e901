#pragma once

#include "wheelleg/params.hpp"
#include "wheelleg/types.hpp"

namespace wheelleg {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

/// Lever angle arctan(l / d) between a corner and the longitudinal axis,
/// evaluated at the current track width.
double geometry_delta(const RobotParams& params, double track);

/// Body-frame contact point of wheel i: (+-l/2, +-d/2), left wheels at +d/2.
struct CornerPosition {
  double x = 0.0;
  double y = 0.0;
};
CornerPosition corner_position(std::size_t wheel, double wheelbase, double track);

/// Ackermann steering angles for turning curvature magnitude `curvature`
/// and direction `direction` in {-1, 0, 1} (+1 turns left).
///
/// Front and rear wheels of a side steer by equal and opposite angles, so
/// the instantaneous center lies on the lateral axis through the center of
/// gravity at distance 1/K. Throws InfeasibleTurnError when the inner
/// wheels would sit at or past the turning center (|K| d >= 2).
WheelArray ackermann_angles(double curvature, int direction, const RobotParams& params,
                            double track);

}  // namespace wheelleg
