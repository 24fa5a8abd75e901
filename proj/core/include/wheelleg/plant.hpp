#pragma once

#include <cstdint>
#include <vector>

#include "wheelleg/params.hpp"
#include "wheelleg/types.hpp"

namespace wheelleg {

/// Piecewise-linear track width over time, constant outside its knots.
class TrackWidthProfile {
 public:
  struct Knot {
    double t = 0.0;
    double width = 0.0;
  };

  TrackWidthProfile() = default;
  explicit TrackWidthProfile(double constant_width);
  /// Knots must have non-decreasing times.
  explicit TrackWidthProfile(std::vector<Knot> knots);

  double at(double t) const;
  const std::vector<Knot>& knots() const noexcept { return knots_; }

 private:
  std::vector<Knot> knots_;
};

struct PlantState {
  ChassisState chassis;
  WheelState wheels;

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

/// Inputs held constant across one plant step.
struct PlantInput {
  ControlInput command;
  WheelArray steer{};
};

/// Time derivative of (X, Y, theta, v_x, v_y, omega_r, omega_w[4]).
using PlantVector = std::array<double, 10>;
PlantVector plant_derivative(const PlantState& state, const PlantInput& input,
                             const RobotParams& params, const ModelOptions& options);

/// Advances the plant by one classical fourth-order Runge-Kutta step.
///
/// The track width follows `width` at every stage time; the returned state
/// carries width.at(t + dt) and a wrapped heading. Throws IntegrationError
/// when the result is not finite.
PlantState plant_step(const PlantState& state, const PlantInput& input, double t, double dt,
                      const RobotParams& params, const TrackWidthProfile& width,
                      const ModelOptions& options = {});

/// Time of plant step `index` on a fixed grid.
inline double grid_time(std::int64_t index, double dt) { return static_cast<double>(index) * dt; }

/// Rolling-without-slip state at the given pose and forward speed.
PlantState rolling_state(double x, double y, double theta, double speed, double track,
                         const RobotParams& params);

}  // namespace wheelleg
