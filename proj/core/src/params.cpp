#include "wheelleg/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wheelleg/errors.hpp"
#include "wheelleg/text_format.hpp"

namespace wheelleg {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string("robot parameter '") + name + "' must be positive and finite");
  }
}

}  // namespace

double box_yaw_inertia(double mass, double wheelbase, double track_width) {
  return mass * (wheelbase * wheelbase + track_width * track_width) / 12.0;
}

void RobotParams::validate() const {
  require_positive(mass, "mass");
  require_positive(yaw_inertia, "yaw_inertia");
  require_positive(wheelbase, "wheelbase");
  require_positive(track_width, "track_width");
  require_positive(wheel_radius, "wheel_radius");
  require_positive(wheel_inertia, "wheel_inertia");
  for (double k : motor_gain) require_positive(k, "motor_gain");
  require_positive(coulomb_torque, "coulomb_torque");
  require_positive(viscous_coeff, "viscous_coeff");
  require_positive(c1, "c1");
  require_positive(c2, "c2");
  require_positive(c3, "c3");
  require_positive(gravity, "gravity");
  if (!(max_stretch >= 0.0) || !std::isfinite(max_stretch)) {
    throw DomainError("robot parameter 'max_stretch' must be non-negative");
  }
}

bool set_param(RobotParams& p, std::string_view key, std::string_view value) {
  auto num = [&] { return text::parse_double(value, key); };
  if (key == "mass") {
    p.mass = num();
  } else if (key == "yaw_inertia") {
    p.yaw_inertia = num();
  } else if (key == "wheelbase") {
    p.wheelbase = num();
  } else if (key == "track_width") {
    p.track_width = num();
  } else if (key == "max_stretch") {
    p.max_stretch = num();
  } else if (key == "wheel_radius") {
    p.wheel_radius = num();
  } else if (key == "wheel_inertia") {
    p.wheel_inertia = num();
  } else if (key == "motor_gain") {
    const auto gains = text::parse_double_list(value, key);
    if (gains.size() == 1) {
      p.motor_gain.fill(gains.front());
    } else if (gains.size() == kWheelCount) {
      std::copy(gains.begin(), gains.end(), p.motor_gain.begin());
    } else {
      throw ParseError("expected 1 or 4 gains", std::string(key));
    }
  } else if (key == "coulomb_torque") {
    p.coulomb_torque = num();
  } else if (key == "viscous_coeff") {
    p.viscous_coeff = num();
  } else if (key == "c1") {
    p.c1 = num();
  } else if (key == "c2") {
    p.c2 = num();
  } else if (key == "c3") {
    p.c3 = num();
  } else if (key == "gravity") {
    p.gravity = num();
  } else {
    return false;
  }
  return true;
}

RobotParams parse_params(std::string_view text_in, const RobotParams& base) {
  RobotParams p = base;
  for (const auto& kv : text::split_key_values(text_in)) {
    if (kv.is_section) throw ParseError("sections are not allowed in a parameter file", kv.key, kv.line);
    try {
      if (!set_param(p, kv.key, kv.value)) throw ParseError("unknown parameter", kv.key, kv.line);
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), {}, kv.line);
    }
  }
  p.validate();
  return p;
}

RobotParams load_params(const std::filesystem::path& file) {
  return parse_params(text::read_file(file.string()));
}

std::string format_params(const RobotParams& p) {
  using text::format_double;
  std::ostringstream out;
  out << "mass = " << format_double(p.mass) << '\n'
      << "yaw_inertia = " << format_double(p.yaw_inertia) << '\n'
      << "wheelbase = " << format_double(p.wheelbase) << '\n'
      << "track_width = " << format_double(p.track_width) << '\n'
      << "max_stretch = " << format_double(p.max_stretch) << '\n'
      << "wheel_radius = " << format_double(p.wheel_radius) << '\n'
      << "wheel_inertia = " << format_double(p.wheel_inertia) << '\n'
      << "motor_gain = ";
  for (std::size_t i = 0; i < kWheelCount; ++i) {
    out << (i ? ", " : "") << format_double(p.motor_gain[i]);
  }
  out << '\n'
      << "coulomb_torque = " << format_double(p.coulomb_torque) << '\n'
      << "viscous_coeff = " << format_double(p.viscous_coeff) << '\n'
      << "c1 = " << format_double(p.c1) << '\n'
      << "c2 = " << format_double(p.c2) << '\n'
      << "c3 = " << format_double(p.c3) << '\n'
      << "gravity = " << format_double(p.gravity) << '\n';
  return out.str();
}

}  // namespace wheelleg
