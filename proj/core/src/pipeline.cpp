#include "romheading/pipeline.hpp"

#include <random>

#include <spdlog/spdlog.h>

#include "romheading/csv_io.hpp"
#include "romheading/error.hpp"
#include "romheading/fusion.hpp"
#include "romheading/resample.hpp"

namespace romheading {

namespace fs = std::filesystem;

MotionProfile configured_profile(const RunConfig& config) {
  MotionProfile profile = scenario_preset(config.preset, config.seed);
  if (config.duration) {
    if (!(*config.duration > 0.0)) throw ConfigError("sim.duration_s must be positive");
    profile.duration = *config.duration;
  }
  return profile;
}

DriftSpec configured_drift(const RunConfig& config) {
  DriftSpec drift = config.drift;
  if (config.random_delta0) {
    // Separate stream from the simulator's so the draw does not shift its noise.
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    drift.delta0 = std::uniform_real_distribution<double>(deg2rad(25.0), deg2rad(335.0))(rng);
  }
  return drift;
}

SimResult run_simulation(const RunConfig& config) {
  const MotionProfile profile = configured_profile(config);
  const DriftSpec drift = configured_drift(config);
  spdlog::info("simulating {} for {:.1f} s, delta0 = {:.2f} deg", profile.name, profile.duration,
               rad2deg(drift.delta0));
  return simulate(config.joint_model(), profile, drift, config.noise, config.window.sample_interval);
}

OrientationPair run_fusion(std::span<const ImuSample> imu1, std::span<const ImuSample> imu2, const RunConfig& config) {
  spdlog::info("fusing {} + {} IMU samples (gain {})", imu1.size(), imu2.size(), config.fusion.gain);
  return {fuse_6d(imu1, config.fusion), fuse_6d(imu2, config.fusion)};
}

EstimationResult run_estimation(std::span<const OrientationSample> stream1, std::span<const OrientationSample> stream2,
                                const RunConfig& config) {
  auto aligned = resample_align(stream1, stream2, config.window.sample_interval, 2.0 * config.window.window_length);
  spdlog::debug("aligned {} samples, max deviation {:.4f} s", aligned.first.size(), aligned.max_deviation);
  EstimationResult result;
  result.timeline = run_estimator(aligned.first, aligned.second, config.joint_model(), config.window, config.optimizer,
                                  config.margin());
  result.aligned = {std::move(aligned.first), std::move(aligned.second)};
  spdlog::info("{} heading estimates", result.timeline.size());
  return result;
}

ErrorReport run_evaluation(const DeltaTimeline& timeline, std::span<const OrientationSample> stream1,
                           std::span<const OrientationSample> stream2, std::span<const TruthSample> truth,
                           const RunConfig& config) {
  EvaluationOptions opts;
  opts.start_time = config.evaluate_start;
  opts.sample_interval = config.window.sample_interval;
  if (config.source == Source::imu) {
    const auto effective = with_effective_heading_offset(stream1, stream2, truth, config.window.sample_interval);
    return evaluate(timeline, stream1, stream2, effective, opts);
  }
  return evaluate(timeline, stream1, stream2, truth, opts);
}

PipelineResult run_pipeline(const RunConfig& config) {
  PipelineResult out;
  out.sim = run_simulation(config);
  const OrientationPair* streams = &out.sim.orientation;
  if (config.source == Source::imu) {
    out.fused = run_fusion(out.sim.imu[0], out.sim.imu[1], config);
    streams = &*out.fused;
  }
  out.estimation = run_estimation((*streams)[0], (*streams)[1], config);
  out.report = run_evaluation(out.estimation.timeline, out.estimation.aligned[0], out.estimation.aligned[1],
                              out.sim.truth.samples, config);
  return out;
}

namespace {

void write_simulation(const SimResult& sim, const fs::path& dir) {
  fs::create_directories(dir);
  write_imu_csv(dir / "imu_1.csv", sim.imu[0]);
  write_imu_csv(dir / "imu_2.csv", sim.imu[1]);
  write_orientation_csv(dir / "orientation_1.csv", sim.orientation[0]);
  write_orientation_csv(dir / "orientation_2.csv", sim.orientation[1]);
  write_truth_csv(dir / "truth.csv", sim.truth.samples);
}

void write_fused(const OrientationPair& fused, const fs::path& dir) {
  fs::create_directories(dir);
  write_orientation_csv(dir / "fused_1.csv", fused[0]);
  write_orientation_csv(dir / "fused_2.csv", fused[1]);
}

}  // namespace

void execute(const RunConfig& config) {
  config.validate();
  const fs::path& dir = config.out_dir;
  switch (config.mode) {
    case Mode::simulate:
      write_simulation(run_simulation(config), dir);
      return;
    case Mode::fuse: {
      const auto [imu1, imu2] = load_imu_pair(config.imu1, config.imu2);
      write_fused(run_fusion(imu1, imu2, config), dir);
      return;
    }
    case Mode::estimate: {
      OrientationPair streams;
      if (config.source == Source::imu) {
        const auto [imu1, imu2] = load_imu_pair(config.imu1, config.imu2);
        streams = run_fusion(imu1, imu2, config);
        write_fused(streams, dir);
      } else {
        streams = {load_orientation_csv(config.orientation1), load_orientation_csv(config.orientation2)};
      }
      const auto result = run_estimation(streams[0], streams[1], config);
      emit_results(result.timeline, nullptr, dir);
      return;
    }
    case Mode::evaluate: {
      const DeltaTimeline timeline = load_timeline_csv(config.timeline);
      const auto s1 = load_orientation_csv(config.orientation1);
      const auto s2 = load_orientation_csv(config.orientation2);
      const auto truth = load_truth_csv(config.truth);
      auto aligned = resample_align(std::span<const OrientationSample>(s1), s2, config.window.sample_interval, 0.0);
      const ErrorReport report = run_evaluation(timeline, aligned.first, aligned.second, truth, config);
      emit_results(timeline, &report, dir);
      spdlog::info("\n{}", format_summary(report));
      return;
    }
    case Mode::pipeline: {
      const PipelineResult result = run_pipeline(config);
      write_simulation(result.sim, dir);
      if (result.fused) write_fused(*result.fused, dir);
      emit_results(result.estimation.timeline, &result.report, dir);
      spdlog::info("\n{}", format_summary(result.report));
      return;
    }
  }
}

}  // namespace romheading
