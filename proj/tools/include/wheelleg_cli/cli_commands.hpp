#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wheelleg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParseError = 2,
  kSolverFailure = 3,
  kDivergence = 4,
  kIoError = 5,
  kScheduleError = 6,
};

enum class Verb { run, compare, metrics, presets };

struct CliCommand {
  Verb verb = Verb::presets;
  std::vector<std::string> inputs;     // scenario files or preset names; a CSV log for metrics
  std::optional<std::filesystem::path> output_dir;
  std::vector<std::string> overrides;  // section.key=value, applied in order
  double band = 0.05;                  // metrics: reconvergence band (m)
};

/// Directory holding robot_params.txt and scenarios/. WHEELLEG_DATA_DIR
/// wins, then the source tree, then the install prefix.
std::filesystem::path data_dir();

/// Output directory: explicit, else WHEELLEG_OUTPUT_DIR, else ".".
std::filesystem::path output_dir(const CliCommand& cmd);

/// A path that exists is used as is; otherwise a bare name such as
/// "test1" resolves to data_dir()/scenarios/test1.scn.
std::filesystem::path resolve_scenario(const std::string& name_or_path);

int run_command(const CliCommand& cmd, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Usage errors return kUsage.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wheelleg::cli
