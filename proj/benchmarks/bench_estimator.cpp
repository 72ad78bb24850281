#include <optional>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "romheading/heading_estimator.hpp"
#include "romheading/simulator.hpp"

using namespace romheading;

namespace {

constexpr double kTs = 1.0 / 75.0;

const SimResult& recording() {
  static const SimResult sim = [] {
    MotionProfile profile = scenario_preset("E05", 1);
    profile.duration = 60.0;
    return simulate(JointModel::default_test_joint(), profile, {deg2rad(100.0), deg2rad(0.2), 0.0, 0.0},
                    NoiseSpec{}, kTs);
  }();
  return sim;
}

// The 8 s window ending at 40 s.
std::vector<SamplePair> window() {
  const auto& sim = recording();
  std::vector<SamplePair> out;
  for (std::size_t k = 3000 - 600; k < 3000; ++k) out.push_back({sim.orientation[0][k].q, sim.orientation[1][k].q});
  return out;
}

void BM_MinimizeWindowWithPrev(benchmark::State& state) {
  const auto w = window();
  const JointModel model = JointModel::default_test_joint();
  const double prev = recording().truth.samples[2925].delta;
  for (auto _ : state) benchmark::DoNotOptimize(minimize_window(w, prev, model, RomMargin{}));
}
BENCHMARK(BM_MinimizeWindowWithPrev)->Unit(benchmark::kMillisecond);

void BM_MinimizeWindowFirst(benchmark::State& state) {
  const auto w = window();
  const JointModel model = JointModel::default_test_joint();
  for (auto _ : state) benchmark::DoNotOptimize(minimize_window(w, std::nullopt, model, RomMargin{}));
}
BENCHMARK(BM_MinimizeWindowFirst)->Unit(benchmark::kMillisecond);

void BM_RunEstimator60s(benchmark::State& state) {
  const auto& sim = recording();
  const JointModel model = JointModel::default_test_joint();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_estimator(sim.orientation[0], sim.orientation[1], model, WindowConfig{}));
  }
}
BENCHMARK(BM_RunEstimator60s)->Unit(benchmark::kMillisecond);

std::vector<Quaternion> relative_rotations() {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, deg2rad(25.0));
  const JointModel model = JointModel::default_test_joint();
  std::vector<Quaternion> out;
  for (int i = 0; i < 4096; ++i) out.push_back(joint_forward(model, n(rng), n(rng), n(rng)));
  return out;
}

void BM_RomCheckEuler(benchmark::State& state) {
  const auto qs = relative_rotations();
  const JointModel model = JointModel::default_test_joint();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rom_check(model, qs[i++ & 4095], RomMargin{}));
}
BENCHMARK(BM_RomCheckEuler);

void BM_RomCheckerInside(benchmark::State& state) {
  const auto qs = relative_rotations();
  const RomChecker checker(JointModel::default_test_joint(), RomMargin{});
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(checker.inside(qs[i++ & 4095]));
}
BENCHMARK(BM_RomCheckerInside);

}  // namespace

BENCHMARK_MAIN();
