#include "wheelleg/tire.hpp"

#include <algorithm>
#include <cmath>

#include "wheelleg/errors.hpp"
#include "wheelleg/geometry.hpp"

namespace wheelleg {

double slip_ratio(double wheel_spin, double v_x, double wheel_radius) {
  const double rim = wheel_spin * wheel_radius;
  if (std::max(std::abs(rim), std::abs(v_x)) < kStandstill) return 0.0;
  const double numerator = rim - v_x;
  const double denominator = std::max(rim, v_x);
  if (std::abs(denominator) < kStandstill) return numerator > 0.0 ? 1.0 : -1.0;
  return std::clamp(numerator / denominator, -1.0, 1.0);
}

WheelArray sideslip_angles(const ChassisState& state, const WheelArray& steer,
                           const RobotParams& params) {
  const double l = params.wheelbase;
  const double d = state.track;
  const double w = state.yaw_rate;
  const double front = 2.0 * state.v_y + l * w;
  const double rear = 2.0 * state.v_y - l * w;
  const double left = 2.0 * state.v_x - d * w;
  const double right = 2.0 * state.v_x + d * w;

  auto angle = [](double delta, double num, double den) {
    return std::abs(den) < kStandstill ? 0.0 : delta - num / den;
  };
  return {angle(steer[0], front, left), angle(steer[1], rear, left), angle(steer[2], front, right),
          angle(steer[3], rear, right)};
}

double combined_slip(double slip, double sideslip) {
  if (!(std::abs(sideslip) < kPi / 2.0)) {
    throw DomainError("combined_slip: |alpha| must be below pi/2");
  }
  const double t = std::tan(sideslip);
  return std::sqrt(slip * slip + t * t);
}

TireForce tire_forces(double load, double slip, double sideslip, const RobotParams& params,
                      TireMode mode) {
  if (!(load >= 0.0)) throw DomainError("tire_forces: vertical load must be non-negative");
  const double s = combined_slip(slip, sideslip);

  // F_t / s, finite as s -> 0
  double per_slip = 0.0;
  TireForce out;
  if (mode == TireMode::standard) {
    out.total = load * (params.c1 * (1.0 - std::exp(-params.c2 * s)) - params.c3 * s);
    per_slip = s > 0.0 ? load * (params.c1 * -std::expm1(-params.c2 * s) / s - params.c3)
                       : load * (params.c1 * params.c2 - params.c3);
  } else {
    out.total = load * params.c1 * (1.0 - std::exp(params.c2 * s)) - params.c3 * s;
    per_slip = s > 0.0 ? load * params.c1 * -std::expm1(params.c2 * s) / s - params.c3
                       : -load * params.c1 * params.c2 - params.c3;
  }
  out.x = slip * per_slip;
  out.y = std::tan(sideslip) * per_slip;
  return out;
}

}  // namespace wheelleg
