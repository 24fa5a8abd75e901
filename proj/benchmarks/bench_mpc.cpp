#include <benchmark/benchmark.h>

#include "wheelleg/behavior.hpp"
#include "wheelleg/mpc/controller.hpp"
#include "wheelleg/sim.hpp"

namespace {

using namespace wheelleg;

// One cold solve at the start of the lane change for a given (N_p, N_c).
void BM_MpcSolve(benchmark::State& state) {
  const ReferencePath path(preset_path("line1"));
  const RobotParams params;
  const BehaviorSchedule schedule(
      {Behavior{0, 0.0, path.duration(), params.track_width, params.track_width, BehaviorKind::track}});
  mpc::MpcConfig config;
  config.prediction_horizon = static_cast<int>(state.range(0));
  config.control_horizon = static_cast<int>(state.range(1));
  mpc::PredictionContext ctx;
  ctx.path = &path;
  ctx.schedule = &schedule;
  ctx.params = params;
  ctx.base_step = 1000;  // 5 s in, inside the transition
  const auto ref = sample_reference(path, 5.0);
  const PlantState x0 = rolling_state(ref.x, ref.y + 0.01, ref.theta, ref.speed,
                                      params.track_width, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpc::solve(x0, ctx, config));
  }
}
BENCHMARK(BM_MpcSolve)->Args({60, 30})->Args({20, 5})->Unit(benchmark::kMillisecond);

}  // namespace
