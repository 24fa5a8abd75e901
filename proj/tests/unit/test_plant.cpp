#include <cmath>

#include "doctest.h"
#include "wheelleg/errors.hpp"
#include "wheelleg/geometry.hpp"
#include "wheelleg/plant.hpp"

using namespace wheelleg;

namespace {

double max_state_error(const PlantState& a, const PlantState& b) {
  const auto& x = a.chassis;
  const auto& y = b.chassis;
  double e = 0.0;
  for (double d : {x.x - y.x, x.y - y.y, x.theta - y.theta, x.v_x - y.v_x, x.v_y - y.v_y,
                   x.yaw_rate - y.yaw_rate}) {
    e = std::max(e, std::abs(d));
  }
  for (std::size_t i = 0; i < 4; ++i) e = std::max(e, std::abs(a.wheels.spin[i] - b.wheels.spin[i]));
  return e;
}

PlantState run(PlantState s, const PlantInput& in, double dt, double duration,
               const RobotParams& p, const TrackWidthProfile& width) {
  const auto n = std::llround(duration / dt);
  for (long long i = 0; i < n; ++i) s = plant_step(s, in, grid_time(i, dt), dt, p, width);
  return s;
}

}  // namespace

TEST_CASE("track width profile interpolates and holds its ends") {
  const TrackWidthProfile w({{1.0, 1.2}, {3.0, 1.6}});
  CHECK(w.at(0.0) == 1.2);
  CHECK(w.at(2.0) == doctest::Approx(1.4));
  CHECK(w.at(5.0) == 1.6);
  CHECK(TrackWidthProfile(1.3).at(100.0) == 1.3);
}

TEST_CASE("a resting robot without resistance stays put") {
  RobotParams p;
  p.coulomb_torque = 0.0;
  p.viscous_coeff = 0.0;
  PlantState s;
  s.chassis.track = 1.2;
  const auto next = plant_step(s, PlantInput{}, 0.0, 0.005, p, TrackWidthProfile(1.2));
  CHECK(next == s);
}

TEST_CASE("pure rolling covers distance at constant speed") {
  RobotParams p;
  p.coulomb_torque = 0.0;
  p.viscous_coeff = 0.0;
  const auto s0 = rolling_state(0.0, 0.0, 0.0, 1.0, 1.2, p);
  const auto s = run(s0, PlantInput{}, 0.005, 1.0, p, TrackWidthProfile(1.2));
  CHECK(s.chassis.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s.chassis.y) < 1e-15);
  CHECK(s.chassis.v_x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pose integrates the body velocity in the world frame") {
  RobotParams p;
  p.coulomb_torque = 0.0;
  p.viscous_coeff = 0.0;
  const auto s0 = rolling_state(1.0, 2.0, kPi / 2.0, 1.0, 1.2, p);
  const auto s = run(s0, PlantInput{}, 0.005, 0.5, p, TrackWidthProfile(1.2));
  CHECK(s.chassis.x == doctest::Approx(1.0));
  CHECK(s.chassis.y == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("stepping is deterministic") {
  const RobotParams p;
  PlantInput in;
  in.command.u = {0.4, 0.3, 0.2, 0.1};
  in.steer = {0.1, -0.1, 0.08, -0.08};
  const TrackWidthProfile w({{0.0, 1.2}, {1.0, 1.6}});
  const auto s0 = rolling_state(0.0, 0.0, 0.2, 1.5, 1.2, p);
  const auto a = run(s0, in, 0.005, 1.0, p, w);
  const auto b = run(s0, in, 0.005, 1.0, p, w);
  CHECK(a == b);
  CHECK(a.chassis.track == doctest::Approx(1.6));
}

TEST_CASE("heading stays wrapped") {
  RobotParams p;
  PlantState s = rolling_state(0.0, 0.0, 3.1, 1.0, 1.2, p);
  s.chassis.yaw_rate = 1.0;
  for (int i = 0; i < 200; ++i) {
    s = plant_step(s, PlantInput{}, grid_time(i, 0.005), 0.005, p, TrackWidthProfile(1.2));
    CHECK(s.chassis.theta > -3.14159265358979324);
    CHECK(s.chassis.theta <= 3.14159265358979324);
  }
}

TEST_CASE("non-finite results raise an integration error") {
  RobotParams p;
  PlantState s = rolling_state(0.0, 0.0, 0.0, 1.0, 1.2, p);
  s.chassis.v_x = std::nan("");
  CHECK_THROWS_AS(plant_step(s, PlantInput{}, 0.0, 0.005, p, TrackWidthProfile(1.2)),
                  IntegrationError);
}

TEST_CASE("halving the step shrinks the error sixteenfold") {
  const RobotParams p;
  PlantInput in;
  in.command.u = {2.0, 1.5, 1.0, 0.8};
  in.steer = {0.15, -0.15, 0.12, -0.12};
  const TrackWidthProfile w({{0.0, 1.2}, {1.0, 1.5}});
  const auto s0 = rolling_state(0.0, 0.0, 0.3, 1.5, 1.2, p);
  const auto ref = run(s0, in, 0.001 / 16.0, 1.0, p, w);
  const double e1 = max_state_error(run(s0, in, 0.004, 1.0, p, w), ref);
  const double e2 = max_state_error(run(s0, in, 0.002, 1.0, p, w), ref);
  CHECK(std::log2(e1 / e2) > 3.7);
}
