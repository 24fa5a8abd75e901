#include "wheelleg/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wheelleg/dynamics.hpp"
#include "wheelleg/errors.hpp"
#include "wheelleg/geometry.hpp"

namespace wheelleg {

TrackWidthProfile::TrackWidthProfile(double constant_width) : knots_{{0.0, constant_width}} {}

TrackWidthProfile::TrackWidthProfile(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw DomainError("TrackWidthProfile: needs at least one knot");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].t < knots_[i - 1].t) {
      throw DomainError("TrackWidthProfile: knot times must be non-decreasing");
    }
  }
}

double TrackWidthProfile::at(double t) const {
  if (knots_.empty()) return 0.0;
  if (t <= knots_.front().t) return knots_.front().width;
  if (t >= knots_.back().t) return knots_.back().width;
  // First knot strictly after t.
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const Knot& k) { return v < k.t; });
  const auto lo = hi - 1;
  const double span = hi->t - lo->t;
  if (span <= 0.0) return hi->width;
  const double frac = (t - lo->t) / span;
  return lo->width + (hi->width - lo->width) * frac;
}

namespace {

PlantVector pack(const PlantState& s) {
  const auto& c = s.chassis;
  const auto& w = s.wheels.spin;
  return {c.x, c.y, c.theta, c.v_x, c.v_y, c.yaw_rate, w[0], w[1], w[2], w[3]};
}

PlantState unpack(const PlantVector& v, double track) {
  PlantState s;
  s.chassis = {v[0], v[1], v[2], v[3], v[4], v[5], track};
  s.wheels.spin = {v[6], v[7], v[8], v[9]};
  return s;
}

PlantVector axpy(const PlantVector& x, double a, const PlantVector& k) {
  PlantVector out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + a * k[i];
  return out;
}

}  // namespace

PlantVector plant_derivative(const PlantState& state, const PlantInput& input,
                             const RobotParams& params, const ModelOptions& options) {
  const auto& c = state.chassis;
  const auto tires = evaluate_tires(c, state.wheels, input.steer, params, options.tire);
  const auto rates = chassis_derivative(c, tires, input.steer, params, options.chassis);

  const double cos_t = std::cos(c.theta);
  const double sin_t = std::sin(c.theta);
  PlantVector d;
  d[0] = c.v_x * cos_t - c.v_y * sin_t;
  d[1] = c.v_x * sin_t + c.v_y * cos_t;
  d[2] = c.yaw_rate;
  d[3] = rates.v_x;
  d[4] = rates.v_y;
  d[5] = rates.yaw_rate;
  for (std::size_t i = 0; i < kWheelCount; ++i) {
    d[6 + i] = wheel_derivative(i, input.command.u[i], state.wheels.spin[i], tires.force_x[i],
                                params);
  }
  return d;
}

PlantState plant_step(const PlantState& state, const PlantInput& input, double t, double dt,
                      const RobotParams& params, const TrackWidthProfile& width,
                      const ModelOptions& options) {
  if (!(dt > 0.0)) throw DomainError("plant_step: dt must be positive");

  const double half = 0.5 * dt;
  const double track_mid = width.at(t + half);
  const double track_end = width.at(t + dt);
  const PlantVector x0 = pack(state);

  PlantState stage = state;
  stage.chassis.track = width.at(t);
  PlantVector k1, k2, k3, k4;
  try {
    k1 = plant_derivative(stage, input, params, options);
    k2 = plant_derivative(unpack(axpy(x0, half, k1), track_mid), input, params, options);
    k3 = plant_derivative(unpack(axpy(x0, half, k2), track_mid), input, params, options);
    k4 = plant_derivative(unpack(axpy(x0, dt, k3), track_end), input, params, options);
  } catch (const DomainError& e) {
    // a stage state that has already blown up
    throw IntegrationError(std::string("plant_step: ") + e.what() + " at t=" + std::to_string(t));
  }

  PlantVector x1;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    x1[i] = x0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  for (std::size_t i = 0; i < x1.size(); ++i) {
    if (!std::isfinite(x1[i])) {
      std::ostringstream msg;
      msg << "plant_step: non-finite state component " << i << " at t=" << t + dt
          << " (v_x=" << state.chassis.v_x << ", yaw_rate=" << state.chassis.yaw_rate << ")";
      throw IntegrationError(msg.str());
    }
  }
  x1[2] = wrap_angle(x1[2]);
  return unpack(x1, track_end);
}

PlantState rolling_state(double x, double y, double theta, double speed, double track,
                         const RobotParams& params) {
  PlantState s;
  s.chassis = {x, y, wrap_angle(theta), speed, 0.0, 0.0, track};
  s.wheels.spin.fill(speed / params.wheel_radius);
  return s;
}

}  // namespace wheelleg
