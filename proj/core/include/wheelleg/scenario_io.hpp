#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "wheelleg/sim.hpp"

namespace wheelleg {

/// Sectioned `key = value` text. Sections: [path], [obstacle] (one per
/// obstacle), [controller], [robot], [model], [schedule], [perception],
/// [sim]. Omitted fields keep their defaults; a [path] section is required.
/// Relative file references resolve against `base_dir`.
ScenarioConfig parse_scenario_text(std::string_view text,
                                   const std::filesystem::path& base_dir = {});
/// Throws ParseError naming the key and line of the problem.
ScenarioConfig parse_scenario(const std::filesystem::path& file);

/// Writes every field; parse_scenario_text(format_scenario(c)) == c.
std::string format_scenario(const ScenarioConfig& scenario);

/// Applies `section.key=value` (obstacles as `obstacle.<index>.key`) and
/// revalidates. Throws ParseError for unknown keys or bad values.
void apply_override(ScenarioConfig& scenario, std::string_view assignment);
/// Applies all assignments in order and validates once at the end, so
/// related fields may be changed together.
void apply_overrides(ScenarioConfig& scenario, std::span<const std::string> assignments);

}  // namespace wheelleg
