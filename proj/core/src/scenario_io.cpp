#include "wheelleg/scenario_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include "wheelleg/errors.hpp"
#include "wheelleg/text_format.hpp"

namespace wheelleg {
namespace {

using text::format_double;

std::string_view to_string(ChassisMode m) {
  return m == ChassisMode::physical ? "physical" : "literal";
}
std::string_view to_string(TireMode m) {
  return m == TireMode::standard ? "standard" : "literal";
}

template <std::size_t N>
std::array<double, N> fixed_list(std::string_view value, const std::string& key, int line) {
  const auto v = text::parse_double_list(value, key, line);
  if (v.size() != N) {
    throw ParseError("expected " + std::to_string(N) + " values", key, line);
  }
  std::array<double, N> out;
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view file) {
  std::filesystem::path p{std::string(file)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

struct Context {
  std::filesystem::path base_dir;
};

/// Sets one key inside a section. Returns false for unknown keys.
bool assign(ScenarioConfig& c, const std::string& section, const std::string& key,
            std::string_view value, int line, const Context& ctx, Obstacle* obstacle) {
  const std::string full = section + "." + key;
  auto num = [&] { return text::parse_double(value, full, line); };
  auto integer = [&] { return text::parse_int(value, full, line); };

  if (section.empty()) {
    if (key == "name") {
      c.name = std::string(value);
      return true;
    }
    return false;
  }
  if (section == "path") {
    auto& p = c.path;
    if (key == "preset") {
      try {
        p = preset_path(value);
      } catch (const RangeError& e) {
        throw ParseError(e.what(), full, line);
      }
    } else if (key == "name") {
      p.name = std::string(value);
    } else if (key == "kind") {
      try {
        p.kind = path_kind_from_string(value);
      } catch (const std::exception& e) {
        throw ParseError(e.what(), full, line);
      }
    } else if (key == "speed") {
      p.speed = num();
    } else if (key == "length") {
      p.length = num();
    } else if (key == "radius") {
      p.radius = num();
    } else if (key == "turn") {
      p.turn = integer();
    } else if (key == "lateral_offset") {
      p.lateral_offset = num();
    } else if (key == "transition_length") {
      p.transition_length = num();
    } else if (key == "lead_length") {
      p.lead_length = num();
    } else if (key == "tail_length") {
      p.tail_length = num();
    } else if (key == "waypoint") {
      const auto w = fixed_list<3>(value, full, line);
      p.waypoints.push_back({w[0], w[1], w[2]});
    } else if (key == "waypoint_file") {
      try {
        const auto more = load_waypoints(resolve(ctx.base_dir, value));
        p.waypoints.insert(p.waypoints.end(), more.begin(), more.end());
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseError(e.what(), full, line);
      }
    } else {
      return false;
    }
    return true;
  }
  if (section == "obstacle") {
    if (obstacle == nullptr) throw ParseError("no obstacle to modify", full, line);
    if (key == "s") {
      obstacle->s_position = num();
    } else if (key == "width") {
      obstacle->width = num();
    } else if (key == "height") {
      obstacle->height = num();
    } else if (key == "length") {
      obstacle->length = num();
    } else {
      return false;
    }
    return true;
  }
  if (section == "controller") {
    auto& m = c.controller;
    if (key == "prediction_horizon") {
      m.prediction_horizon = integer();
    } else if (key == "control_horizon") {
      m.control_horizon = integer();
    } else if (key == "dt") {
      m.dt = num();
    } else if (key == "q") {
      m.q = fixed_list<3>(value, full, line);
    } else if (key == "r") {
      m.r = fixed_list<4>(value, full, line);
    } else if (key == "s") {
      m.s = fixed_list<3>(value, full, line);
    } else if (key == "u_min") {
      m.bounds.lower = num();
    } else if (key == "u_max") {
      m.bounds.upper = num();
    } else if (key == "max_iterations") {
      m.max_iterations = integer();
    } else if (key == "tolerance") {
      m.tolerance = num();
    } else if (key == "state_penalty") {
      m.state_penalty = num();
    } else if (key == "max_speed") {
      m.max_speed = num();
    } else {
      return false;
    }
    return true;
  }
  if (section == "robot") {
    if (key == "params_file") {
      try {
        c.robot = parse_params(text::read_file(resolve(ctx.base_dir, value).string()));
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseError(e.what(), full, line);
      }
      return true;
    }
    return set_param(c.robot, key, value);
  }
  if (section == "model") {
    if (key == "chassis") {
      if (value == "physical") {
        c.model.chassis = ChassisMode::physical;
      } else if (value == "literal") {
        c.model.chassis = ChassisMode::literal;
      } else {
        throw ParseError("expected physical or literal", full, line);
      }
    } else if (key == "tire") {
      if (value == "standard") {
        c.model.tire = TireMode::standard;
      } else if (value == "literal") {
        c.model.tire = TireMode::literal;
      } else {
        throw ParseError("expected standard or literal", full, line);
      }
    } else {
      return false;
    }
    return true;
  }
  if (section == "schedule") {
    auto& s = c.schedule;
    if (key == "adjust_time") {
      s.adjust_time = num();
    } else if (key == "lead_distance") {
      s.lead_distance = num();
    } else if (key == "clear_margin") {
      s.clear_margin = num();
    } else if (key == "width_margin") {
      s.width_margin = num();
    } else if (key == "clearance_max") {
      s.clearance_max = num();
    } else if (key == "lookahead") {
      s.lookahead = num();
    } else {
      return false;
    }
    return true;
  }
  if (section == "perception") {
    if (key == "width_noise") {
      c.perception.width_noise = num();
    } else if (key == "seed") {
      const std::string s(value);
      char* end = nullptr;
      const auto v = std::strtoull(s.c_str(), &end, 10);
      if (s.empty() || *end != '\0' || s.front() == '-') {
        throw ParseError("expected a non-negative integer", full, line);
      }
      c.perception.seed = v;
    } else {
      return false;
    }
    return true;
  }
  if (section == "sim") {
    if (key == "duration") {
      c.duration = num();
    } else if (key == "dt_plant") {
      c.dt_plant = num();
    } else if (key == "reconverge_band") {
      c.reconverge_band = num();
    } else if (key == "timing") {
      try {
        c.timing = timing_mode_from_string(value);
      } catch (const DomainError& e) {
        throw ParseError(e.what(), full, line);
      }
    } else {
      return false;
    }
    return true;
  }
  throw ParseError("unknown section", section, line);
}

void check(const ScenarioConfig& c, const std::map<std::string, int>& lines) {
  if (auto v = find_violation(c)) {
    int line = 0;
    if (auto it = lines.find(v->key); it != lines.end()) line = it->second;
    throw ParseError(v->message, v->key, line);
  }
}

}  // namespace

ScenarioConfig parse_scenario_text(std::string_view text, const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  Context ctx{base_dir};
  std::map<std::string, int> lines;
  std::string section;
  bool has_path = false;
  for (const auto& kv : text::split_key_values(text)) {
    if (kv.is_section) {
      static const char* kSections[] = {"path",     "obstacle",   "controller", "robot",
                                        "model",    "schedule",   "perception", "sim"};
      if (std::find(std::begin(kSections), std::end(kSections), kv.key) == std::end(kSections)) {
        throw ParseError("unknown section", kv.key, kv.line);
      }
      section = kv.key;
      if (section == "path") has_path = true;
      if (section == "obstacle") c.obstacles.emplace_back();
      continue;
    }
    Obstacle* obstacle = c.obstacles.empty() ? nullptr : &c.obstacles.back();
    if (!assign(c, section, kv.key, kv.value, kv.line, ctx, obstacle)) {
      throw ParseError("unknown key", section.empty() ? kv.key : section + "." + kv.key, kv.line);
    }
    lines[section + "." + kv.key] = kv.line;
  }
  if (!has_path) throw ParseError("a [path] section is required", "path", 0);
  check(c, lines);
  return c;
}

ScenarioConfig parse_scenario(const std::filesystem::path& file) {
  std::string text;
  try {
    text = text::read_file(file.string());
  } catch (const IoError& e) {
    throw ParseError(e.what(), file.string(), 0);
  }
  return parse_scenario_text(text, file.parent_path());
}

std::string format_scenario(const ScenarioConfig& c) {
  std::ostringstream out;
  auto list = [](const auto& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      s += (i ? ", " : "") + format_double(values[i]);
    }
    return s;
  };
  if (!c.name.empty()) out << "name = " << c.name << "\n";
  const auto& p = c.path;
  out << "\n[path]\n";
  if (!p.name.empty()) out << "name = " << p.name << '\n';
  out << "kind = " << to_string(p.kind) << '\n'
      << "speed = " << format_double(p.speed) << '\n'
      << "length = " << format_double(p.length) << '\n'
      << "radius = " << format_double(p.radius) << '\n'
      << "turn = " << p.turn << '\n'
      << "lateral_offset = " << format_double(p.lateral_offset) << '\n'
      << "transition_length = " << format_double(p.transition_length) << '\n'
      << "lead_length = " << format_double(p.lead_length) << '\n'
      << "tail_length = " << format_double(p.tail_length) << '\n';
  for (const auto& w : p.waypoints) {
    out << "waypoint = " << format_double(w.t) << ", " << format_double(w.x) << ", "
        << format_double(w.y) << '\n';
  }
  for (const auto& o : c.obstacles) {
    out << "\n[obstacle]\n"
        << "s = " << format_double(o.s_position) << '\n'
        << "width = " << format_double(o.width) << '\n'
        << "height = " << format_double(o.height) << '\n'
        << "length = " << format_double(o.length) << '\n';
  }
  const auto& m = c.controller;
  out << "\n[controller]\n"
      << "prediction_horizon = " << m.prediction_horizon << '\n'
      << "control_horizon = " << m.control_horizon << '\n'
      << "dt = " << format_double(m.dt) << '\n'
      << "q = " << list(m.q) << '\n'
      << "r = " << list(m.r) << '\n'
      << "s = " << list(m.s) << '\n'
      << "u_min = " << format_double(m.bounds.lower) << '\n'
      << "u_max = " << format_double(m.bounds.upper) << '\n'
      << "max_iterations = " << m.max_iterations << '\n'
      << "tolerance = " << format_double(m.tolerance) << '\n'
      << "state_penalty = " << format_double(m.state_penalty) << '\n'
      << "max_speed = " << format_double(m.max_speed) << '\n';
  out << "\n[robot]\n" << format_params(c.robot);
  out << "\n[model]\n"
      << "chassis = " << to_string(c.model.chassis) << '\n'
      << "tire = " << to_string(c.model.tire) << '\n';
  const auto& s = c.schedule;
  out << "\n[schedule]\n"
      << "adjust_time = " << format_double(s.adjust_time) << '\n'
      << "lead_distance = " << format_double(s.lead_distance) << '\n'
      << "clear_margin = " << format_double(s.clear_margin) << '\n'
      << "width_margin = " << format_double(s.width_margin) << '\n'
      << "clearance_max = " << format_double(s.clearance_max) << '\n'
      << "lookahead = " << format_double(s.lookahead) << '\n';
  out << "\n[perception]\n"
      << "width_noise = " << format_double(c.perception.width_noise) << '\n'
      << "seed = " << c.perception.seed << '\n';
  out << "\n[sim]\n"
      << "duration = " << format_double(c.duration) << '\n'
      << "dt_plant = " << format_double(c.dt_plant) << '\n'
      << "reconverge_band = " << format_double(c.reconverge_band) << '\n'
      << "timing = " << to_string(c.timing) << '\n';
  return out.str();
}

namespace {

void assign_override(ScenarioConfig& scenario, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ParseError("override must look like section.key=value", std::string(assignment));
  }
  const std::string lhs(text::trim(assignment.substr(0, eq)));
  const std::string_view value = text::trim(assignment.substr(eq + 1));
  const auto dot = lhs.find('.');
  if (dot == std::string::npos) {
    if (!assign(scenario, "", lhs, value, 0, {}, nullptr)) throw ParseError("unknown key", lhs);
    return;
  }
  std::string section = lhs.substr(0, dot);
  std::string key = lhs.substr(dot + 1);
  Obstacle* obstacle = nullptr;
  if (section == "obstacle") {
    const auto dot2 = key.find('.');
    if (dot2 == std::string::npos) {
      throw ParseError("obstacle overrides look like obstacle.<index>.key", lhs);
    }
    const int index = text::parse_int(key.substr(0, dot2), lhs);
    if (index < 0 || static_cast<std::size_t>(index) >= scenario.obstacles.size()) {
      throw ParseError("obstacle index out of range", lhs);
    }
    obstacle = &scenario.obstacles[static_cast<std::size_t>(index)];
    key = key.substr(dot2 + 1);
  }
  if (!assign(scenario, section, key, value, 0, {}, obstacle)) {
    throw ParseError("unknown key", lhs);
  }
}

}  // namespace

void apply_override(ScenarioConfig& scenario, std::string_view assignment) {
  assign_override(scenario, assignment);
  check(scenario, {});
}

void apply_overrides(ScenarioConfig& scenario, std::span<const std::string> assignments) {
  for (const auto& a : assignments) assign_override(scenario, a);
  check(scenario, {});
}

}  // namespace wheelleg
