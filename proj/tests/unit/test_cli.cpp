#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "wheelleg/csv_log.hpp"
#include "wheelleg_cli/cli_commands.hpp"

namespace fs = std::filesystem;
using namespace wheelleg::cli;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "wheelleg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const char* name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("presets are listed") {
  const auto r = invoke({"presets"});
  CHECK(r.code == kOk);
  for (const char* name : {"test1", "test2", "test3", "test4"}) {
    CHECK(r.out.find(name) != std::string::npos);
  }
}

TEST_CASE("run writes the log and metrics") {
  const auto dir = scratch("wheelleg_cli_run");
  const auto r = invoke({"run", "test2", "-o", dir.string(), "--set", "sim.duration=0.5"});
  CHECK(r.code == kOk);
  CHECK(fs::exists(dir / "test2.csv"));
  CHECK(fs::exists(dir / "test2_metrics.txt"));
  CHECK(fs::exists(dir / "test2_metrics.csv"));
  const auto log = wheelleg::load_csv(dir / "test2.csv");
  CHECK(log.rows.size() == 101);

  const auto m = invoke({"metrics", (dir / "test2.csv").string()});
  CHECK(m.code == kOk);
  CHECK(m.out.find("max_y_error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("compare writes a report") {
  const auto dir = scratch("wheelleg_cli_compare");
  const auto r = invoke({"compare", "test1", "test2", "-o", dir.string(), "--set",
                         "sim.duration=0.3", "--set", "controller.prediction_horizon=10",
                         "--set", "controller.control_horizon=5"});
  CHECK(r.code == kOk);
  CHECK(fs::exists(dir / "test1_vs_test2.txt"));
  CHECK(r.out.find("faster:") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("failures map to exit codes") {
  const auto dir = scratch("wheelleg_cli_errors");
  CHECK(invoke({}).code == kUsage);
  CHECK(invoke({"fly"}).code == kUsage);
  CHECK(invoke({"run"}).code == kUsage);
  CHECK(invoke({"run", (dir / "absent.scn").string()}).code == kIoError);
  CHECK(invoke({"metrics", (dir / "absent.csv").string()}).code == kIoError);

  const auto bad = invoke({"run", "test1", "-o", dir.string(), "--set",
                           "controller.control_horizon=70"});
  CHECK(bad.code == kParseError);
  CHECK(bad.err.find("controller.control_horizon") != std::string::npos);

  {
    std::ofstream f(dir / "clash.scn");
    f << "[path]\npreset = line2\n[obstacle]\ns = 15\nwidth = 1.6\nheight = 0.4\n"
         "[obstacle]\ns = 17\nwidth = 1.5\nheight = 0.2\n[controller]\n"
         "prediction_horizon = 10\ncontrol_horizon = 5\n[sim]\nduration = 4\n";
  }
  CHECK(invoke({"run", (dir / "clash.scn").string(), "-o", dir.string()}).code == kScheduleError);
  fs::remove_all(dir);
}
