#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "wheelleg/errors.hpp"
#include "wheelleg/scenario_io.hpp"

using namespace wheelleg;

namespace {

const std::filesystem::path kScenarios = std::filesystem::path(WHEELLEG_TEST_DATA_DIR) / "scenarios";

}  // namespace

TEST_CASE("shipped presets") {
  const auto t1 = parse_scenario(kScenarios / "test1.scn");
  CHECK(t1.name == "test1");
  CHECK(t1.path.kind == PathKind::lane_change);
  CHECK(t1.path.lateral_offset == 3.5);
  CHECK(t1.controller.prediction_horizon == 60);
  CHECK(t1.controller.control_horizon == 30);
  CHECK(t1.controller.q == std::array<double, 3>{1.0, 10.0, 5.0});
  CHECK(t1.obstacles.empty());
  CHECK(t1.robot == RobotParams{});

  const auto t2 = parse_scenario(kScenarios / "test2.scn");
  CHECK(t2.controller.prediction_horizon == 20);
  CHECK(t2.controller.control_horizon == 5);
  CHECK(t2.path == t1.path);

  const auto t4 = parse_scenario(kScenarios / "test4.scn");
  REQUIRE(t4.obstacles.size() == 2);
  CHECK(t4.obstacles[0].s_position == 15.0);
  CHECK(t4.obstacles[0].width == 1.6);
  CHECK(t4.obstacles[1].height == 1.45);
  CHECK(t4.path.kind == PathKind::straight);
}

TEST_CASE("control horizon beyond the prediction horizon is rejected with its location") {
  const std::string text =
      "[path]\npreset = line1\n[controller]\nprediction_horizon = 10\ncontrol_horizon = 12\n";
  try {
    parse_scenario_text(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.key() == "controller.control_horizon");
    CHECK(e.line() == 5);
  }
}

TEST_CASE("malformed files") {
  CHECK_THROWS_AS(parse_scenario_text(""), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("[path]\npreset = line7\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("[path]\npreset = line1\n[wings]\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("[path]\nspeeed = 2\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("[path]\nspeed = fast\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text("[path]\npreset = line1\n[controller]\nq = 1, 2\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario_text("[path]\npreset = line1\n[model]\nchassis = rigid\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(kScenarios / "missing.scn"), ParseError);
  try {
    parse_scenario_text("[path]\npreset = line1\n[sim]\ndt_plant = -1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.key() == "sim.dt_plant");
    CHECK(e.line() == 4);
  }
}

TEST_CASE("format and parse round-trip") {
  auto c = parse_scenario(kScenarios / "test4.scn");
  c.model.chassis = ChassisMode::literal;
  c.perception.width_noise = 0.02;
  c.perception.seed = 7;
  c.timing = TimingMode::wall;
  c.duration = 12.5;
  c.robot.c1 = 1.1;
  c.schedule.lookahead = 8.0;
  CHECK(parse_scenario_text(format_scenario(c)) == c);

  PathSpec spline;
  spline.kind = PathKind::waypoint_spline;
  spline.name = "wp";
  spline.waypoints = {{0, 0, 0}, {1, 1, 0.5}, {2, 2, 0.25}};
  c.path = spline;
  c.obstacles.clear();
  c.duration = 0.0;
  CHECK(parse_scenario_text(format_scenario(c)) == c);
}

TEST_CASE("overrides") {
  auto c = parse_scenario(kScenarios / "test4.scn");
  apply_override(c, "controller.prediction_horizon=40");
  CHECK(c.controller.prediction_horizon == 40);
  apply_override(c, "sim.duration = 3");
  CHECK(c.duration == 3.0);
  apply_override(c, "obstacle.1.height=1.2");
  CHECK(c.obstacles[1].height == 1.2);
  apply_override(c, "name=other");
  CHECK(c.name == "other");
  CHECK_THROWS_AS(apply_override(c, "controller.control_horizon=50"), ParseError);
  CHECK_THROWS_AS(apply_override(c, "obstacle.5.height=1"), ParseError);
  CHECK_THROWS_AS(apply_override(c, "controller.nope=1"), ParseError);
  CHECK_THROWS_AS(apply_override(c, "controller.dt"), ParseError);

  const std::vector<std::string> together{"controller.prediction_horizon=8",
                                          "controller.control_horizon=4"};
  apply_overrides(c, together);
  CHECK(c.controller.prediction_horizon == 8);
  CHECK(c.controller.control_horizon == 4);
  const std::vector<std::string> broken{"controller.control_horizon=9"};
  CHECK_THROWS_AS(apply_overrides(c, broken), ParseError);
}
