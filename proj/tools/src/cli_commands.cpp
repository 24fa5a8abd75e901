#include "wheelleg_cli/cli_commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "wheelleg/csv_log.hpp"
#include "wheelleg/errors.hpp"
#include "wheelleg/metrics.hpp"
#include "wheelleg/scenario_io.hpp"
#include "wheelleg/sim.hpp"
#include "wheelleg/text_format.hpp"

namespace wheelleg::cli {
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + file.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

ScenarioConfig load_scenario(const std::string& input, const std::vector<std::string>& overrides) {
  auto scenario = parse_scenario(resolve_scenario(input));
  apply_overrides(scenario, overrides);
  if (scenario.name.empty()) scenario.name = fs::path(input).stem().string();
  return scenario;
}

void print_summary(std::ostream& out, const std::string& name, const Metrics& m) {
  out << name << ": max |Xe| " << text::format_double(m.max_x_error) << " m, max |Ye| "
      << text::format_double(m.max_y_error) << " m, max |yaw e| "
      << text::format_double(m.max_yaw_error_deg) << " deg, mean cycle "
      << text::format_double(m.mean_solve_time) << " s\n";
}

struct RunOutput {
  SimResult result;
  Metrics metrics;
  int code = kOk;
};

/// Runs one scenario and writes <name>.csv, <name>_metrics.txt and
/// <name>_metrics.csv.
RunOutput run_one(const ScenarioConfig& scenario, const fs::path& dir, std::ostream& out,
                  std::ostream& err) {
  RunOutput r;
  r.result = run_closed_loop(scenario);
  if (r.result.log.rows.empty()) throw IoError("simulation produced no log rows");
  r.metrics = compute_metrics(r.result.log, scenario.reconverge_band);
  save_csv(dir / (scenario.name + ".csv"), r.result.log);
  write_text(dir / (scenario.name + "_metrics.txt"), format_metrics(r.metrics));
  write_text(dir / (scenario.name + "_metrics.csv"), format_metrics_rows(r.metrics));
  print_summary(out, scenario.name, r.metrics);
  if (r.result.diverged) {
    err << scenario.name << ": diverged: " << r.result.message << '\n';
    r.code = kDivergence;
  } else if (r.result.solver_failures > 0) {
    err << scenario.name << ": " << r.result.solver_failures << " solver failures\n";
    r.code = kSolverFailure;
  }
  return r;
}

int guarded(std::ostream& err, const auto& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const ScheduleError& e) {
    err << "error: " << e.what() << '\n';
    return kScheduleError;
  } catch (const IntegrationError& e) {
    err << "error: " << e.what() << '\n';
    return kDivergence;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace

fs::path data_dir() {
  if (const char* env = std::getenv("WHEELLEG_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  if (fs::is_directory(WHEELLEG_SOURCE_DATA_DIR)) return WHEELLEG_SOURCE_DATA_DIR;
  return WHEELLEG_INSTALL_DATA_DIR;
}

fs::path output_dir(const CliCommand& cmd) {
  if (cmd.output_dir) return *cmd.output_dir;
  if (const char* env = std::getenv("WHEELLEG_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

fs::path resolve_scenario(const std::string& name_or_path) {
  const fs::path direct(name_or_path);
  if (fs::exists(direct)) return direct;
  const fs::path preset = data_dir() / "scenarios" / (name_or_path + ".scn");
  if (direct.parent_path().empty() && fs::exists(preset)) return preset;
  throw IoError("scenario '" + name_or_path + "' not found");
}

int run_command(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    switch (cmd.verb) {
      case Verb::presets: {
        const fs::path dir = data_dir() / "scenarios";
        if (!fs::is_directory(dir)) throw IoError("no scenario directory at " + dir.string());
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
          if (entry.path().extension() == ".scn") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
          const auto s = parse_scenario(f);
          out << f.stem().string() << ": path " << s.path.name << ", obstacles "
              << s.obstacles.size() << ", N_p " << s.controller.prediction_horizon << ", N_c "
              << s.controller.control_horizon << '\n';
        }
        return kOk;
      }
      case Verb::run: {
        if (cmd.inputs.size() != 1) {
          err << "run needs exactly one scenario\n";
          return kUsage;
        }
        const auto scenario = load_scenario(cmd.inputs[0], cmd.overrides);
        const auto dir = output_dir(cmd);
        ensure_dir(dir);
        return run_one(scenario, dir, out, err).code;
      }
      case Verb::compare: {
        if (cmd.inputs.size() != 2) {
          err << "compare needs two scenarios\n";
          return kUsage;
        }
        auto a = load_scenario(cmd.inputs[0], cmd.overrides);
        auto b = load_scenario(cmd.inputs[1], cmd.overrides);
        if (a.name == b.name) {
          a.name += "_a";
          b.name += "_b";
        }
        const auto dir = output_dir(cmd);
        ensure_dir(dir);
        const auto ra = run_one(a, dir, out, err);
        const auto rb = run_one(b, dir, out, err);
        if (ra.code != kOk) return ra.code;
        if (rb.code != kOk) return rb.code;
        const auto report =
            format_comparison(compare_runs(ra.result.log, rb.result.log), a.name, b.name);
        write_text(dir / (a.name + "_vs_" + b.name + ".txt"), report);
        out << report;
        return kOk;
      }
      case Verb::metrics: {
        if (cmd.inputs.size() != 1) {
          err << "metrics needs one CSV log\n";
          return kUsage;
        }
        if (!fs::exists(cmd.inputs[0])) throw IoError("log '" + cmd.inputs[0] + "' not found");
        out << format_metrics(compute_metrics(load_csv(cmd.inputs[0]), cmd.band));
        return kOk;
      }
    }
    return kUsage;
  });
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wheel-leg robot closed-loop MPC simulator"};
  app.require_subcommand(1);
  CliCommand cmd;
  std::string output;

  auto* run = app.add_subcommand("run", "Run one scenario and write its log and metrics");
  run->add_option("scenario", cmd.inputs, "Scenario file or preset name")->required()->expected(1);
  run->add_option("-o,--output", output, "Output directory");
  run->add_option("--set", cmd.overrides, "Override section.key=value (repeatable)");

  auto* compare = app.add_subcommand("compare", "Run two scenarios and compare them");
  compare->add_option("scenarios", cmd.inputs, "Two scenario files or preset names")
      ->required()
      ->expected(2);
  compare->add_option("-o,--output", output, "Output directory");
  compare->add_option("--set", cmd.overrides, "Override applied to both scenarios");

  auto* metrics = app.add_subcommand("metrics", "Summarize a CSV log");
  metrics->add_option("log", cmd.inputs, "CSV log")->required()->expected(1);
  metrics->add_option("--band", cmd.band, "Reconvergence band (m)");

  app.add_subcommand("presets", "List shipped scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (run->parsed()) {
    cmd.verb = Verb::run;
  } else if (compare->parsed()) {
    cmd.verb = Verb::compare;
  } else if (metrics->parsed()) {
    cmd.verb = Verb::metrics;
  } else {
    cmd.verb = Verb::presets;
  }
  if (!output.empty()) cmd.output_dir = output;
  return run_command(cmd, out, err);
}

}  // namespace wheelleg::cli
