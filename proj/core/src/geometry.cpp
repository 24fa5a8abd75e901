#include "wheelleg/geometry.hpp"

#include <cmath>

#include "wheelleg/errors.hpp"

namespace wheelleg {

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

double geometry_delta(const RobotParams& params, double track) {
  if (!(params.wheelbase > 0.0) || !(track > 0.0)) {
    throw DomainError("geometry_delta: wheelbase and track width must be positive");
  }
  return std::atan(params.wheelbase / track);
}

CornerPosition corner_position(std::size_t wheel, double wheelbase, double track) {
  const double x = (wheel == 0 || wheel == 2) ? wheelbase / 2.0 : -wheelbase / 2.0;
  const double y = (wheel < 2) ? track / 2.0 : -track / 2.0;
  return {x, y};
}

WheelArray ackermann_angles(double curvature, int direction, const RobotParams& params,
                            double track) {
  if (!(track > 0.0)) throw DomainError("ackermann_angles: track width must be positive");
  if (direction < -1 || direction > 1) {
    throw DomainError("ackermann_angles: direction must be -1, 0 or 1");
  }
  const double signed_k = curvature * direction;
  const double inner = 2.0 - track * signed_k;  // left side
  const double outer = 2.0 + track * signed_k;  // right side
  if (!(inner > 0.0) || !(outer > 0.0)) {
    throw InfeasibleTurnError("ackermann_angles: turning radius " +
                              std::to_string(1.0 / std::abs(curvature)) +
                              " m is inside half the track width");
  }
  const double lk = params.wheelbase * signed_k;
  const double left = std::atan(lk / inner);
  const double right = std::atan(lk / outer);
  return {left, -left, right, -right};
}

}  // namespace wheelleg
