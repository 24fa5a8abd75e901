#include <cmath>
#include <random>

#include "doctest.h"
#include "wheelleg/dynamics.hpp"
#include "wheelleg/geometry.hpp"

using namespace wheelleg;

namespace {

TireState forces(const WheelArray& fx, const WheelArray& fy) {
  TireState t;
  t.force_x = fx;
  t.force_y = fy;
  return t;
}

ChassisState chassis(double vx, double vy, double w) {
  ChassisState s;
  s.v_x = vx;
  s.v_y = vy;
  s.yaw_rate = w;
  s.track = 1.2;
  return s;
}

}  // namespace

TEST_CASE("no forces and no rotation leave the body at rest") {
  const RobotParams p;
  for (auto mode : {ChassisMode::physical, ChassisMode::literal}) {
    const auto r = chassis_derivative(chassis(0, 0, 0), forces({}, {}), {}, p, mode);
    CHECK(r.v_x == 0.0);
    CHECK(r.v_y == 0.0);
    CHECK(r.yaw_rate == 0.0);
  }
}

TEST_CASE("only the rotating-frame terms survive without forces") {
  const RobotParams p;
  for (auto mode : {ChassisMode::physical, ChassisMode::literal}) {
    const auto r = chassis_derivative(chassis(1.0, 0.0, 0.5), forces({}, {}), {}, p, mode);
    CHECK(r.v_x == 0.0);
    CHECK(r.v_y == -0.5);
    CHECK(r.yaw_rate == 0.0);
  }
}

TEST_CASE("equal straight pushes accelerate without yaw") {
  const RobotParams p;
  const auto r = chassis_derivative(chassis(1.0, 0.0, 0.0),
                                    forces({69.5, 69.5, 69.5, 69.5}, {}), {}, p);
  CHECK(r.v_x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.v_y == 0.0);
  CHECK(r.yaw_rate == 0.0);
}

TEST_CASE("literal rows put a yaw moment on symmetric straight driving") {
  const RobotParams p;
  const auto r = chassis_derivative(chassis(1.0, 0.0, 0.0), forces({69.5, 69.5, 69.5, 69.5}, {}),
                                    {}, p, ChassisMode::literal);
  CHECK(r.v_x == doctest::Approx(1.0));
  const double lever = std::sqrt(1.44 + 1.44) / 2.0;
  CHECK(r.yaw_rate == doctest::Approx(lever * 4.0 * 69.5 * std::cos(kPi / 4.0) / p.yaw_inertia));
}

TEST_CASE("differential drive yaws toward the slower side") {
  const RobotParams p;
  const auto r = chassis_derivative(chassis(1.0, 0.0, 0.0), forces({0, 0, 50, 50}, {}), {}, p);
  CHECK(r.yaw_rate == doctest::Approx(2.0 * 50.0 * 0.6 / p.yaw_inertia));
}

TEST_CASE("lateral forces project through the steering angle") {
  const RobotParams p;
  const WheelArray steer{0.3, 0.3, 0.3, 0.3};
  const auto r = chassis_derivative(chassis(0, 0, 0), forces({}, {10, 10, 10, 10}), steer, p);
  CHECK(r.v_x == doctest::Approx(-40.0 * std::sin(0.3) / p.mass));
  CHECK(r.v_y == doctest::Approx(40.0 * std::cos(0.3) / p.mass));
}

TEST_CASE("mirroring the body about its axis mirrors the rates") {
  const RobotParams p;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto s = chassis(2.0 + u(rng), 0.2 * u(rng), 0.5 * u(rng));
    const WheelArray fx{100 * u(rng), 100 * u(rng), 100 * u(rng), 100 * u(rng)};
    const WheelArray fy{100 * u(rng), 100 * u(rng), 100 * u(rng), 100 * u(rng)};
    const WheelArray d{0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng)};
    // left and right wheels trade places under the mirror
    const WheelArray mfx{fx[2], fx[3], fx[0], fx[1]};
    const WheelArray mfy{-fy[2], -fy[3], -fy[0], -fy[1]};
    const WheelArray md{-d[2], -d[3], -d[0], -d[1]};
    const auto a = chassis_derivative(s, forces(fx, fy), d, p);
    const auto b = chassis_derivative(chassis(s.v_x, -s.v_y, -s.yaw_rate), forces(mfx, mfy), md, p);
    CHECK(b.v_x == doctest::Approx(a.v_x).epsilon(1e-12));
    CHECK(b.v_y == doctest::Approx(-a.v_y).epsilon(1e-12));
    CHECK(b.yaw_rate == doctest::Approx(-a.yaw_rate).epsilon(1e-12));
  }
}

TEST_CASE("resistance torque") {
  RobotParams p;
  CHECK(resistance_torque(0.0, p) == 0.0);
  CHECK(resistance_torque(10.0, p) == doctest::Approx(0.01 * 10.0 + 0.2));
  CHECK(resistance_torque(-10.0, p) == doctest::Approx(-0.3));
}

TEST_CASE("wheel spin acceleration") {
  RobotParams p;
  // torque balance at rest
  CHECK(wheel_derivative(0, 0.5, 0.0, 20.0 * 0.5 / 0.1, p) == doctest::Approx(0.0));
  p.viscous_coeff = 0.0;
  p.coulomb_torque = 0.0;
  CHECK(wheel_derivative(1, 0.0, 7.0, 0.0, p) == 0.0);

  p.motor_gain = {15.0, 15.0, 15.0, 15.0};
  p.coulomb_torque = 1.0;
  p.wheel_radius = 0.1;
  p.wheel_inertia = 0.5;
  CHECK(wheel_derivative(2, 2.0, 3.0, 50.0, p) == doctest::Approx(48.0).epsilon(1e-15));
}

TEST_CASE("evaluated tires carry the static load and consistent slips") {
  const RobotParams p;
  ChassisState c = chassis(2.0, 0.0, 0.0);
  WheelState w;
  w.spin = {21.0, 20.0, 20.0, 19.0};
  const auto t = evaluate_tires(c, w, {}, p, TireMode::standard);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.load[i] == doctest::Approx(p.wheel_load()));
    CHECK(t.combined[i] == doctest::Approx(std::abs(t.slip[i])));
  }
  CHECK(t.slip[0] > 0.0);
  CHECK(t.force_x[0] > 0.0);
  CHECK(t.slip[1] == 0.0);
  CHECK(t.force_x[1] == 0.0);
  CHECK(t.force_x[3] < 0.0);
}
