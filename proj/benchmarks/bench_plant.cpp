#include <benchmark/benchmark.h>

#include "wheelleg/plant.hpp"
#include "wheelleg/tire.hpp"

namespace {

using namespace wheelleg;

void BM_PlantStep(benchmark::State& state) {
  const RobotParams params;
  const TrackWidthProfile width(params.track_width);
  PlantState s = rolling_state(0.0, 0.0, 0.0, 2.0, params.track_width, params);
  PlantInput in;
  in.command.u = {0.3, 0.3, 0.25, 0.25};
  in.steer = {0.02, -0.02, 0.019, -0.019};
  double t = 0.0;
  for (auto _ : state) {
    s = plant_step(s, in, t, 0.005, params, width);
    t += 0.005;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PlantStep);

void BM_TireForces(benchmark::State& state) {
  const RobotParams params;
  double slip = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tire_forces(params.wheel_load(), slip, 0.02, params));
    slip = slip < 0.2 ? slip + 1e-4 : 0.01;
  }
}
BENCHMARK(BM_TireForces);

}  // namespace
