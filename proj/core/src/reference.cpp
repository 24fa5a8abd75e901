#include "wheelleg/reference.hpp"

#include <algorithm>
#include <cmath>

#include "wheelleg/errors.hpp"
#include "wheelleg/geometry.hpp"
#include "wheelleg/text_format.hpp"
#include "wheelleg/tire.hpp"

namespace wheelleg {
namespace {

constexpr std::size_t kLaneTableIntervals = 2000;
constexpr int kSplineSubintervals = 8;

// 5-point Gauss-Legendre on [a, b].
template <typename F>
double gauss_legendre(F&& f, double a, double b) {
  static constexpr double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                      -0.9061798459386640, 0.9061798459386640};
  static constexpr double weights[5] = {0.5688888888888889, 0.4786286704993665,
                                        0.4786286704993665, 0.2369268850561891,
                                        0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += weights[i] * f(mid + half * nodes[i]);
  return sum * half;
}

// Quintic smoothstep and its derivatives: zero slope and curvature at both ends.
struct Blend {
  double value, d1, d2;
};
Blend smoothstep(double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0};
  if (u >= 1.0) return {1.0, 0.0, 0.0};
  const double u2 = u * u;
  const double u3 = u2 * u;
  return {u3 * (10.0 - 15.0 * u + 6.0 * u2), 30.0 * u2 * (1.0 - 2.0 * u + u2),
          60.0 * u * (1.0 - 3.0 * u + 2.0 * u2)};
}

struct LaneProfile {
  double y, dy, ddy;  // derivatives with respect to X
};
LaneProfile lane_profile(const PathSpec& p, double x) {
  const double L = p.transition_length;
  const auto b = smoothstep((x - p.lead_length) / L);
  return {p.lateral_offset * b.value, p.lateral_offset * b.d1 / L,
          p.lateral_offset * b.d2 / (L * L)};
}

// Natural cubic spline second derivatives.
std::vector<double> spline_moments(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
  }
  // Thomas algorithm on rows 1..n-2; lower diagonal of row i is h_{i-1}/6.
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double lower = (t[i] - t[i - 1]) / 6.0;
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    if (i == 1) break;
  }
  return m;
}

struct SplineEval {
  double v, d1, d2;
};
SplineEval spline_eval(const std::vector<Waypoint>& w, const std::vector<double>& m, bool use_x,
                       double t) {
  const std::size_t n = w.size();
  std::size_t i = 0;
  if (t >= w[n - 1].t) {
    i = n - 2;
  } else if (t > w[0].t) {
    const auto it = std::upper_bound(w.begin(), w.end(), t,
                                     [](double v, const Waypoint& p) { return v < p.t; });
    i = static_cast<std::size_t>(it - w.begin()) - 1;
  }
  const double y0 = use_x ? w[i].x : w[i].y;
  const double y1 = use_x ? w[i + 1].x : w[i + 1].y;
  const double h = w[i + 1].t - w[i].t;
  const double a = (w[i + 1].t - t) / h;
  const double b = (t - w[i].t) / h;
  const double value = a * y0 + b * y1 + ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0;
  const double d1 = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m[i] +
                    (3.0 * b * b - 1.0) / 6.0 * h * m[i + 1];
  const double d2 = a * m[i] + b * m[i + 1];
  return {value, d1, d2};
}

void validate(const PathSpec& p) {
  if (!(p.speed > 0.0) && p.kind != PathKind::waypoint_spline) {
    throw DomainError("path speed must be positive");
  }
  switch (p.kind) {
    case PathKind::straight:
      if (!(p.length > 0.0)) throw DomainError("straight path length must be positive");
      break;
    case PathKind::circle:
      if (!(p.radius > 0.0) || !(p.length > 0.0)) {
        throw DomainError("circle path needs positive radius and length");
      }
      if (p.turn != 1 && p.turn != -1) throw DomainError("circle turn must be +1 or -1");
      break;
    case PathKind::lane_change:
      if (!(p.transition_length > 0.0) || p.lead_length < 0.0 || p.tail_length < 0.0) {
        throw DomainError("lane change needs positive transition and non-negative straights");
      }
      break;
    case PathKind::waypoint_spline:
      if (p.waypoints.size() < 2) throw DomainError("waypoint path needs at least two waypoints");
      if (p.waypoints.front().t != 0.0) throw DomainError("first waypoint must be at t = 0");
      for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
        if (!(p.waypoints[i].t > p.waypoints[i - 1].t)) {
          throw DomainError("waypoint times must be strictly increasing");
        }
      }
      break;
  }
}

}  // namespace

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::straight: return "straight";
    case PathKind::circle: return "circle";
    case PathKind::lane_change: return "lane-change";
    case PathKind::waypoint_spline: return "waypoint-spline";
  }
  return "straight";
}

PathKind path_kind_from_string(std::string_view name) {
  if (name == "straight") return PathKind::straight;
  if (name == "circle") return PathKind::circle;
  if (name == "lane-change") return PathKind::lane_change;
  if (name == "waypoint-spline") return PathKind::waypoint_spline;
  throw ParseError("unknown path kind '" + std::string(name) + "'", "kind");
}

CurvatureDirection curvature_direction(double dx, double dy, double ddx, double ddy) {
  const double speed_sq = dx * dx + dy * dy;
  const double speed = std::sqrt(speed_sq);
  if (speed < kStandstill) return {};
  const double cross = dx * ddy - ddx * dy;
  CurvatureDirection out;
  out.curvature = std::abs(cross) / (speed_sq * speed);
  out.direction = (cross > 0.0) - (cross < 0.0);
  return out;
}

ReferencePath::ReferencePath(PathSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  switch (spec_.kind) {
    case PathKind::straight:
    case PathKind::circle:
      total_arc_ = spec_.length;
      duration_ = total_arc_ / spec_.speed;
      break;
    case PathKind::lane_change: {
      lane_dx_ = spec_.transition_length / kLaneTableIntervals;
      lane_arc_.assign(kLaneTableIntervals + 1, 0.0);
      auto integrand = [this](double x) {
        const double s = lane_profile(spec_, x).dy;
        return std::sqrt(1.0 + s * s);
      };
      for (std::size_t k = 0; k < kLaneTableIntervals; ++k) {
        const double a = spec_.lead_length + k * lane_dx_;
        lane_arc_[k + 1] = lane_arc_[k] + gauss_legendre(integrand, a, a + lane_dx_);
      }
      total_arc_ = spec_.lead_length + lane_arc_.back() + spec_.tail_length;
      duration_ = total_arc_ / spec_.speed;
      break;
    }
    case PathKind::waypoint_spline: {
      std::vector<double> t, x, y;
      for (const auto& w : spec_.waypoints) {
        t.push_back(w.t);
        x.push_back(w.x);
        y.push_back(w.y);
      }
      spline_mx_ = spline_moments(t, x);
      spline_my_ = spline_moments(t, y);
      spline_arc_.assign(t.size(), 0.0);
      for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        spline_arc_[i + 1] = spline_arc_[i] + spline_segment_arc(i, t[i + 1]);
      }
      duration_ = t.back();
      total_arc_ = spline_arc_.back();
      break;
    }
  }
}

double ReferencePath::lane_change_arc_at_x(double x) const {
  const double lead = spec_.lead_length;
  if (x <= lead) return x;
  const double end = lead + spec_.transition_length;
  if (x >= end) return lead + lane_arc_.back() + (x - end);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>((x - lead) / lane_dx_),
                                       kLaneTableIntervals - 1);
  const double a = lead + k * lane_dx_;
  auto integrand = [this](double xx) {
    const double s = lane_profile(spec_, xx).dy;
    return std::sqrt(1.0 + s * s);
  };
  return lead + lane_arc_[k] + gauss_legendre(integrand, a, x);
}

double ReferencePath::lane_change_x_at_arc(double arc) const {
  const double lead = spec_.lead_length;
  if (arc <= lead) return arc;
  const double rel = arc - lead;
  if (rel >= lane_arc_.back()) return lead + spec_.transition_length + (rel - lane_arc_.back());
  const auto it = std::upper_bound(lane_arc_.begin(), lane_arc_.end(), rel);
  const std::size_t k = static_cast<std::size_t>(it - lane_arc_.begin()) - 1;
  const double frac = (rel - lane_arc_[k]) / (lane_arc_[k + 1] - lane_arc_[k]);
  double x = lead + (k + frac) * lane_dx_;
  for (int iter = 0; iter < 8; ++iter) {
    const double slope = lane_profile(spec_, x).dy;
    const double step = (lane_change_arc_at_x(x) - arc) / std::sqrt(1.0 + slope * slope);
    x -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return x;
}

ReferencePath::GeometricSample ReferencePath::geometric(double arc) const {
  switch (spec_.kind) {
    case PathKind::circle: {
      const double r = spec_.radius;
      const double phi = arc / r;
      const double turn = spec_.turn;
      return {r * std::sin(phi), turn * r * (1.0 - std::cos(phi)), std::cos(phi),
              turn * std::sin(phi), turn / r};
    }
    case PathKind::lane_change: {
      const double x = lane_change_x_at_arc(arc);
      const auto p = lane_profile(spec_, x);
      const double norm = std::sqrt(1.0 + p.dy * p.dy);
      return {x, p.y, 1.0 / norm, p.dy / norm, p.ddy / (norm * norm * norm)};
    }
    default:
      return {arc, 0.0, 1.0, 0.0, 0.0};
  }
}

double ReferencePath::spline_segment_arc(std::size_t i, double t_end) const {
  auto speed = [this](double tt) {
    const auto k = spline_kinematics(tt);
    return std::hypot(k.vx, k.vy);
  };
  const double t0 = spec_.waypoints[i].t;
  const double h = (t_end - t0) / kSplineSubintervals;
  double sum = 0.0;
  for (int j = 0; j < kSplineSubintervals; ++j) {
    sum += gauss_legendre(speed, t0 + j * h, t0 + (j + 1) * h);
  }
  return sum;
}

double ReferencePath::spline_arc(double t) const {
  const auto& w = spec_.waypoints;
  std::size_t i = 0;
  if (t >= w.back().t) {
    i = w.size() - 2;
  } else if (t > w.front().t) {
    const auto it = std::upper_bound(w.begin(), w.end(), t,
                                     [](double v, const Waypoint& p) { return v < p.t; });
    i = static_cast<std::size_t>(it - w.begin()) - 1;
  }
  return spline_arc_[i] + spline_segment_arc(i, std::min(t, w[i + 1].t));
}

ReferencePath::Kinematics ReferencePath::spline_kinematics(double t) const {
  const auto sx = spline_eval(spec_.waypoints, spline_mx_, true, t);
  const auto sy = spline_eval(spec_.waypoints, spline_my_, false, t);
  return {sx.v, sy.v, sx.d1, sy.d1, sx.d2, sy.d2};
}

ReferencePath::Kinematics ReferencePath::kinematics(double t) const {
  if (!(t >= 0.0)) throw RangeError("reference path queried at negative time");
  if (t > duration_) {
    auto end = kinematics(duration_);
    const double dt = t - duration_;
    end.x += end.vx * dt;
    end.y += end.vy * dt;
    end.ax = 0.0;
    end.ay = 0.0;
    return end;
  }
  if (spec_.kind == PathKind::waypoint_spline) return spline_kinematics(t);

  const double v = spec_.speed;
  const auto g = geometric(v * t);
  const double nx = -g.ty;
  const double ny = g.tx;
  return {g.x, g.y, v * g.tx, v * g.ty, v * v * g.kappa * nx, v * v * g.kappa * ny};
}

double ReferencePath::arc_at(double t) const {
  if (!(t >= 0.0)) throw RangeError("reference path queried at negative time");
  if (t > duration_) {
    const auto end = kinematics(duration_);
    return total_arc_ + std::hypot(end.vx, end.vy) * (t - duration_);
  }
  if (spec_.kind == PathKind::waypoint_spline) return spline_arc(t);
  return spec_.speed * t;
}

double ReferencePath::time_at_arc(double arc) const {
  if (arc <= 0.0) return 0.0;
  if (arc >= total_arc_) {
    const auto end = kinematics(duration_);
    const double v = std::hypot(end.vx, end.vy);
    return v > kStandstill ? duration_ + (arc - total_arc_) / v : duration_;
  }
  if (spec_.kind != PathKind::waypoint_spline) return arc / spec_.speed;
  double lo = 0.0;
  double hi = duration_;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (spline_arc(mid) < arc) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ReferencePath::project(double x, double y, double t_guess) const {
  constexpr int kSamples = 121;
  constexpr double kWindow = 3.0;
  const double lo = std::max(0.0, t_guess - kWindow);
  const double hi = std::max(lo, t_guess + kWindow);
  auto dist2 = [&](double t) {
    const auto k = kinematics(t);
    return (k.x - x) * (k.x - x) + (k.y - y) * (k.y - y);
  };
  const double step = (hi - lo) / (kSamples - 1);
  int best = 0;
  double best_d = dist2(lo);
  for (int i = 1; i < kSamples; ++i) {
    const double d = dist2(lo + i * step);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  double a = std::max(lo, lo + (best - 1) * step);
  double b = std::min(hi, lo + (best + 1) * step);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int iter = 0; iter < 60; ++iter) {
    const double c = b - ratio * (b - a);
    const double d = a + ratio * (b - a);
    if (dist2(c) < dist2(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

ReferencePoint sample_reference_extended(const ReferencePath& path, double t) {
  const auto k = path.kinematics(t);
  const auto cd = curvature_direction(k.vx, k.vy, k.ax, k.ay);
  ReferencePoint p;
  p.t = t;
  p.x = k.x;
  p.y = k.y;
  p.theta = std::atan2(k.vy, k.vx);
  p.speed = std::hypot(k.vx, k.vy);
  p.curvature = cd.curvature;
  p.direction = cd.direction;
  return p;
}

ReferencePoint sample_reference(const ReferencePath& path, double t) {
  if (!(t >= 0.0) || t > path.duration()) {
    throw RangeError("sample_reference: t = " + std::to_string(t) + " outside [0, " +
                     std::to_string(path.duration()) + "]");
  }
  return sample_reference_extended(path, t);
}

void unwrap_headings(std::vector<ReferencePoint>& points) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    points[i].theta = points[i - 1].theta + wrap_angle(points[i].theta - points[i - 1].theta);
  }
}

ScenarioPaths build_scenario_paths() {
  ScenarioPaths out;
  out.line1.name = "line1";
  out.line1.kind = PathKind::lane_change;
  out.line1.speed = 2.0;
  out.line1.lateral_offset = 3.5;
  out.line1.transition_length = 25.0;
  out.line1.lead_length = 5.0;
  out.line1.tail_length = 5.0;

  out.line2.name = "line2";
  out.line2.kind = PathKind::straight;
  out.line2.speed = 2.0;
  out.line2.length = 45.0;
  out.line2_stations = {15.0, 32.0};
  return out;
}

PathSpec preset_path(std::string_view name) {
  const auto paths = build_scenario_paths();
  if (name == "line1") return paths.line1;
  if (name == "line2") return paths.line2;
  throw RangeError("unknown path preset '" + std::string(name) + "'");
}

std::vector<Waypoint> parse_waypoints(std::string_view text_in) {
  std::vector<Waypoint> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text_in.size()) {
    const auto nl = text_in.find('\n', pos);
    auto line = text_in.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text_in.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (text::trim(line).empty()) continue;
    const auto values = text::parse_double_list(line, "waypoint", line_no);
    if (values.size() != 3) throw ParseError("expected 't X Y'", "waypoint", line_no);
    out.push_back({values[0], values[1], values[2]});
  }
  return out;
}

std::vector<Waypoint> load_waypoints(const std::filesystem::path& file) {
  return parse_waypoints(text::read_file(file.string()));
}

}  // namespace wheelleg
