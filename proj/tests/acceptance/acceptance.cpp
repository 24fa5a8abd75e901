// Checks the nine acceptance criteria and prints one PASS/FAIL line each.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "wheelleg/behavior.hpp"
#include "wheelleg/csv_log.hpp"
#include "wheelleg/geometry.hpp"
#include "wheelleg/metrics.hpp"
#include "wheelleg/mpc/shooting.hpp"
#include "wheelleg/plant.hpp"
#include "wheelleg/reference.hpp"
#include "wheelleg/scenario_io.hpp"
#include "wheelleg/sim.hpp"
#include "wheelleg/tire.hpp"

using namespace wheelleg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("criterion %d %-28s %s  %s\n", id, title, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

ScenarioConfig preset(const std::string& name) {
  return parse_scenario(std::filesystem::path(WHEELLEG_TEST_DATA_DIR) / "scenarios" / (name + ".scn"));
}

// ---------------------------------------------------------------- 1

class RelCheck {
 public:
  void operator()(double got, const oracle::Real& want) {
    const double w = want.convert_to<double>();
    ++count_;
    const double err = w == 0.0 ? std::abs(got) : std::abs(got - w) / std::abs(w);
    if (w == 0.0 && got != 0.0) ++bad_;
    else if (err > 1e-9) ++bad_;
    worst_ = std::max(worst_, w == 0.0 ? 0.0 : err);
  }
  void exact(bool ok) {
    ++count_;
    if (!ok) ++bad_;
  }
  int count() const { return count_; }
  int bad() const { return bad_; }
  double worst() const { return worst_; }

 private:
  int count_ = 0, bad_ = 0;
  double worst_ = 0.0;
};

Outcome formula_oracle() {
  const auto t0 = Clock::now();
  const RobotParams p;
  std::mt19937_64 rng(2024);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  constexpr int kSamples = 1000;
  std::ostringstream detail;
  bool ok = true;
  auto record = [&](const char* name, const RelCheck& c, int inputs) {
    detail << name << " " << inputs << "/" << c.bad() << " ";
    ok = ok && c.bad() == 0 && inputs >= kSamples;
  };

  RelCheck tire, tire_lit;
  for (int i = 0; i < kSamples; ++i) {
    const double fz = uni(0.0, 2000.0), l = uni(-1.0, 1.0), a = uni(-1.4, 1.4);
    const auto f = tire_forces(fz, l, a, p, TireMode::standard);
    const auto o = oracle::tire_standard(fz, l, a, p.c1, p.c2, p.c3);
    tire(f.total, o.total);
    tire(f.x, o.x);
    tire(f.y, o.y);
    const auto g = tire_forces(fz, l, a, p, TireMode::literal);
    const auto q = oracle::tire_literal(fz, l, a, p.c1, p.c2, p.c3);
    tire_lit(g.total, q.total);
    tire_lit(g.x, q.x);
    tire_lit(g.y, q.y);
  }
  record("tire_forces", tire, kSamples);
  record("tire_forces(literal)", tire_lit, kSamples);

  RelCheck comb;
  for (int i = 0; i < kSamples; ++i) {
    const double l = uni(-1.0, 1.0), a = uni(-1.5, 1.5);
    comb(combined_slip(l, a), oracle::combined(l, a));
  }
  record("combined_slip", comb, kSamples);

  RelCheck slip;
  for (int i = 0; i < kSamples; ++i) {
    const double w = uni(-40.0, 40.0), v = uni(-3.0, 3.0), r = uni(0.05, 0.5);
    slip(slip_ratio(w, v, r), oracle::slip(w, v, r));
  }
  record("slip_ratio", slip, kSamples);

  RelCheck side;
  for (int i = 0; i < kSamples; ++i) {
    RobotParams q = p;
    q.wheelbase = uni(0.5, 2.0);
    ChassisState s;
    s.v_x = uni(0.5, 3.0);
    s.v_y = uni(-0.4, 0.4);
    s.yaw_rate = uni(-1.0, 1.0);
    s.track = uni(1.0, 1.8);
    const WheelArray steer{uni(-0.4, 0.4), uni(-0.4, 0.4), uni(-0.4, 0.4), uni(-0.4, 0.4)};
    const auto got = sideslip_angles(s, steer, q);
    const auto want = oracle::sideslip(s.v_x, s.v_y, s.yaw_rate, q.wheelbase, s.track,
                                       {steer[0], steer[1], steer[2], steer[3]});
    for (std::size_t k = 0; k < 4; ++k) side(got[k], want[k]);
  }
  record("sideslip_angles", side, kSamples);

  RelCheck ack;
  for (int i = 0; i < kSamples; ++i) {
    RobotParams q = p;
    q.wheelbase = uni(0.5, 2.0);
    const double d = uni(1.0, 1.8);
    const double k = uni(0.0, 1.9 / d);
    const int cd = static_cast<int>(rng() % 3) - 1;
    const auto got = ackermann_angles(k, cd, q, d);
    const auto want = oracle::ackermann(k, cd, q.wheelbase, d);
    for (std::size_t w = 0; w < 4; ++w) ack(got[w], want[w]);
  }
  record("ackermann_angles", ack, kSamples);

  RelCheck curv;
  for (int i = 0; i < kSamples; ++i) {
    const double dx = uni(-3.0, 3.0), dy = uni(-3.0, 3.0), ddx = uni(-2.0, 2.0), ddy = uni(-2.0, 2.0);
    const auto got = curvature_direction(dx, dy, ddx, ddy);
    const auto want = oracle::curvature(dx, dy, ddx, ddy);
    curv(got.curvature, want.k);
    curv.exact(got.direction == want.cd);
  }
  record("curvature_direction", curv, kSamples);

  const double elapsed = seconds_since(t0);
  detail << "(inputs/failures), " << elapsed << " s";
  return {ok && elapsed < 10.0, detail.str()};
}

// ---------------------------------------------------------------- 2

Outcome trigger_table() {
  // widths and track widths on a 1/64 grid so every comparison is exact
  constexpr int kStretch = 32;  // 0.5 m
  int mismatches = 0, lower_edges = 0, upper_edges = 0;
  for (int j = 0; j < 100; ++j) {
    const int d0 = 40 + j;
    for (int i = 0; i < 100; ++i) {
      const int ds = 60 + i;
      const int expected = (ds > d0 && ds < d0 + kStretch) ? 1 : 0;
      if (trigger(ds / 64.0, d0 / 64.0, kStretch / 64.0) != expected) ++mismatches;
      lower_edges += ds == d0;
      upper_edges += ds == d0 + kStretch;
    }
  }
  std::ostringstream d;
  d << "10000 pairs, " << mismatches << " mismatches, boundary pairs " << lower_edges << " at d0 and "
    << upper_edges << " at d0+dmax";
  return {mismatches == 0 && lower_edges > 0 && upper_edges > 0, d.str()};
}

// ---------------------------------------------------------------- 3, 4, 8

struct TimedRun {
  SimResult result;
  Metrics metrics;
  double seconds = 0.0;
  double mean_wall = 0.0;
  double mean_steps = 0.0;
};

TimedRun timed_run(const ScenarioConfig& s) {
  TimedRun r;
  const auto t0 = Clock::now();
  r.result = run_closed_loop(s);
  r.seconds = seconds_since(t0);
  r.metrics = compute_metrics(r.result.log, s.reconverge_band);
  for (const auto& c : r.result.cycles) {
    r.mean_wall += c.wall_time;
    r.mean_steps += static_cast<double>(c.model_steps);
  }
  if (!r.result.cycles.empty()) {
    r.mean_wall /= static_cast<double>(r.result.cycles.size());
    r.mean_steps /= static_cast<double>(r.result.cycles.size());
  }
  return r;
}

Outcome lane_change(const TimedRun& t1) {
  const auto& m = t1.metrics;
  std::ostringstream d;
  d << "max|Xe| " << m.max_x_error << " m, max|Ye| " << m.max_y_error << " m, max yaw "
    << m.max_yaw_error_deg << " deg, " << t1.seconds << " s";
  const bool ok = !t1.result.diverged && m.max_x_error <= 0.15 && m.max_y_error <= 0.15 &&
                  t1.seconds < 120.0;
  return {ok, d.str()};
}

Outcome horizon_tradeoff(const TimedRun& t1, const TimedRun& t2) {
  const auto a = axis_errors(t1.metrics);
  const auto b = axis_errors(t2.metrics);
  std::ostringstream d;
  d << "errors 60/30 (" << a[0] << ", " << a[1] << ", " << a[2] << ") vs 20/5 (" << b[0] << ", "
    << b[1] << ", " << b[2] << "); mean solve " << t1.mean_wall * 1e3 << " ms vs "
    << t2.mean_wall * 1e3 << " ms";
  const bool ok = a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2] && t1.mean_wall > t2.mean_wall;
  return {ok, d.str()};
}

// Single integrator toward x = 1 with the normal-equation minimizer.
Outcome quadratic_toy() {
  using namespace wheelleg::mpc;
  const std::size_t n = 8, m = 3;
  ShootingProblem p;
  p.state_dim = p.input_dim = p.error_dim = 1;
  p.horizon = n;
  p.control_horizon = m;
  p.dt = 0.1;
  p.step = [](std::size_t, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    Eigen::VectorXd next = x + 0.1 * u;
    return next;
  };
  p.error = [](std::size_t, const Eigen::VectorXd& x) {
    Eigen::VectorXd e = x.array() - 1.0;
    return e;
  };
  p.stage_weight = Eigen::VectorXd::Constant(1, 1.0);
  p.terminal_weight = Eigen::VectorXd::Constant(1, 3.0);
  p.input_weight = Eigen::VectorXd::Constant(1, 0.25);
  p.lower = Eigen::VectorXd::Constant(1, -100.0);
  p.upper = Eigen::VectorXd::Constant(1, 100.0);
  p.segment_ends = {n};
  const double x0 = -0.3;

  const auto N = static_cast<Eigen::Index>(n), M = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, M);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(M);
  for (Eigen::Index k = 0; k < N; ++k) {
    counts(std::min(k, M - 1)) += 1.0;
    for (Eigen::Index j = 0; j <= k; ++j) L(k, std::min(j, M - 1)) += p.dt;
  }
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(N, x0 - 1.0);
  Eigen::MatrixXd H = p.dt * L.transpose() * L;
  H.diagonal() += p.dt * 0.25 * counts;
  H += 3.0 * L.row(N - 1).transpose() * L.row(N - 1);
  const Eigen::VectorXd g = p.dt * L.transpose() * c + 3.0 * L.row(N - 1).transpose() * c(N - 1);
  const Eigen::VectorXd exact = H.ldlt().solve(-g);

  const auto r = solve_shooting(p, Eigen::VectorXd::Constant(1, x0), Eigen::MatrixXd::Zero(1, M), {});
  const double gap = (r.inputs.row(0).transpose() - exact).cwiseAbs().maxCoeff();
  std::ostringstream d;
  d << "toy gap " << gap;
  return {gap <= 1e-6, d.str()};
}

Outcome optimizer_properties(const TimedRun& t1, const ScenarioConfig& s) {
  std::size_t solves = 0, non_monotone = 0;
  for (const auto& c : t1.result.cycles) {
    ++solves;
    for (std::size_t i = 1; i < c.cost_history.size(); ++i) {
      if (c.cost_history[i] > c.cost_history[i - 1]) {
        ++non_monotone;
        break;
      }
    }
  }
  std::size_t inputs = 0, outside = 0;
  for (const auto& row : t1.result.log.rows) {
    for (double u : row.u) {
      ++inputs;
      outside += (u < s.controller.bounds.lower || u > s.controller.bounds.upper);
    }
  }
  const auto toy = quadratic_toy();
  std::ostringstream d;
  d << solves << " solves, " << non_monotone << " non-monotone; " << inputs << " inputs, " << outside
    << " outside U; " << toy.detail;
  return {solves > 0 && non_monotone == 0 && outside == 0 && toy.pass, d.str()};
}

// ---------------------------------------------------------------- 5, 6

Outcome obstacle_run(const TimedRun& t4, const ScenarioConfig& s) {
  const auto& m = t4.metrics;
  const ReferencePath path(s.path);
  const auto& first = s.obstacles.at(0);
  const auto& second = s.obstacles.at(1);
  // the first obstacle's window: from perception until its restore completes
  const double window_start = path.time_at_arc(first.s_position - first.length / 2.0 - s.schedule.lookahead);
  const double second_contact = path.time_at_arc(second.s_position - second.length / 2.0 - s.robot.wheelbase / 2.0);

  bool in_window = m.episodes.size() == 2;
  double peak = 0.0, slowest = 0.0;
  bool settled = true;
  for (const auto& e : m.episodes) {
    in_window = in_window && e.t_start >= window_start && e.t_end <= second_contact;
    peak = std::max(peak, e.peak_lateral_error);
    if (e.reconvergence) slowest = std::max(slowest, *e.reconvergence);
    else settled = false;
  }

  int raise = 0;
  bool raise_no_gamma = true;
  bool raise_covers_second = false;
  const double t_second = path.time_at_arc(second.s_position);
  for (const auto& b : t4.result.schedule.segments()) {
    if (b.kind != BehaviorKind::raise_body) continue;
    ++raise;
    raise_no_gamma = raise_no_gamma && b.gamma == 0;
    raise_covers_second = raise_covers_second || (b.t_start <= t_second && t_second < b.t_end);
    for (const auto& row : t4.result.log.rows) {
      if (row.t >= b.t_start && row.t < b.t_end && row.gamma != 0) raise_no_gamma = false;
    }
  }

  std::ostringstream d;
  d << m.episodes.size() << " gamma episodes";
  for (const auto& e : m.episodes) d << " [" << e.t_start << ", " << e.t_end << "]";
  d << ", raise-body segments " << raise << ", peak |Ye| " << peak << " m, reconvergence ";
  if (settled) d << slowest << " s";
  else d << "never";
  const bool ok = !t4.result.diverged && in_window && raise == 1 && raise_no_gamma &&
                  raise_covers_second && peak <= 0.15 && settled && slowest <= 5.0;
  return {ok, d.str()};
}

Outcome replay(const TimedRun& t4, const ScenarioConfig& s) {
  const auto states = replay_open_loop(s, t4.result.log);
  double worst = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& c = states[k].chassis;
    const auto& row = t4.result.log.rows[k];
    for (double e : {c.x - row.x, c.y - row.y, c.theta - row.theta, c.v_x - row.v_x,
                     c.v_y - row.v_y, c.yaw_rate - row.omega_r, c.track - row.d}) {
      worst = std::max(worst, std::abs(e));
    }
  }
  std::ostringstream d;
  d << states.size() << " rows, max component gap " << worst;
  return {states.size() == t4.result.log.rows.size() && worst <= 1e-9, d.str()};
}

// ---------------------------------------------------------------- 7

Outcome determinism(const TimedRun& t2, const ScenarioConfig& s2, const TimedRun& t4,
                    const ScenarioConfig& s4) {
  const bool a = to_csv(t2.result.log) == to_csv(run_closed_loop(s2).log);
  const bool b = to_csv(t4.result.log) == to_csv(run_closed_loop(s4).log);
  std::ostringstream d;
  d << "test2 " << (a ? "identical" : "differs") << ", test4 " << (b ? "identical" : "differs");
  return {a && b, d.str()};
}

// ---------------------------------------------------------------- 9

PlantState integrate(PlantState s, const PlantInput& in, double dt, const RobotParams& p,
                     const TrackWidthProfile& w) {
  const auto n = std::llround(1.0 / dt);
  for (long long i = 0; i < n; ++i) s = plant_step(s, in, grid_time(i, dt), dt, p, w);
  return s;
}

double state_gap(const PlantState& a, const PlantState& b) {
  double e = 0.0;
  const auto& x = a.chassis;
  const auto& y = b.chassis;
  for (double d : {x.x - y.x, x.y - y.y, x.theta - y.theta, x.v_x - y.v_x, x.v_y - y.v_y,
                   x.yaw_rate - y.yaw_rate}) {
    e = std::max(e, std::abs(d));
  }
  for (std::size_t i = 0; i < kWheelCount; ++i) {
    e = std::max(e, std::abs(a.wheels.spin[i] - b.wheels.spin[i]));
  }
  return e;
}

Outcome integrator_order() {
  const RobotParams p;
  PlantInput in;
  in.command.u = {2.0, 1.5, 1.0, 0.8};
  in.steer = {0.15, -0.15, 0.12, -0.12};
  const TrackWidthProfile w({{0.0, 1.2}, {1.0, 1.5}});
  const auto s0 = rolling_state(0.0, 0.0, 0.3, 1.5, 1.2, p);
  const auto ref = integrate(s0, in, 0.001 / 16.0, p, w);
  const std::vector<double> steps{0.004, 0.002, 0.001};
  std::vector<double> errors;
  for (double dt : steps) errors.push_back(state_gap(integrate(s0, in, dt, p, w), ref));
  double slope = 1e9;
  std::ostringstream d;
  d << "errors";
  for (double e : errors) d << " " << e;
  d << ", slopes";
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double s = std::log(errors[i - 1] / errors[i]) / std::log(steps[i - 1] / steps[i]);
    slope = std::min(slope, s);
    d << " " << s;
  }
  return {slope >= 3.7, d.str()};
}

}  // namespace

int main() {
  try {
    report(1, "formula oracle", formula_oracle());
    report(2, "trigger truth table", trigger_table());

    const auto s1 = preset("test1");
    const auto s2 = preset("test2");
    const auto s4 = preset("test4");
    const auto t1 = timed_run(s1);
    const auto t2 = timed_run(s2);
    report(3, "lane-change tracking", lane_change(t1));
    report(4, "horizon trade-off", horizon_tradeoff(t1, t2));

    const auto t4 = timed_run(s4);
    report(5, "obstacle straddling", obstacle_run(t4, s4));
    report(6, "rollout consistency", replay(t4, s4));
    report(7, "determinism", determinism(t2, s2, t4, s4));
    report(8, "optimizer properties", optimizer_properties(t1, s1));
    report(9, "integrator order", integrator_order());
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
