#pragma once

#include <array>
#include <optional>
#include <vector>

#include "romheading/config.hpp"
#include "romheading/metrics.hpp"
#include "romheading/simulator.hpp"

namespace romheading {

using OrientationPair = std::array<std::vector<OrientationSample>, 2>;

/// Motion profile and drift for the configured preset, with the duration
/// override applied and a random initial offset drawn from the seed.
MotionProfile configured_profile(const RunConfig& config);
DriftSpec configured_drift(const RunConfig& config);

SimResult run_simulation(const RunConfig& config);
OrientationPair run_fusion(std::span<const ImuSample> imu1, std::span<const ImuSample> imu2, const RunConfig& config);

struct EstimationResult {
  OrientationPair aligned;  ///< the streams the estimator saw, on a common grid
  DeltaTimeline timeline;
};

/// Aligns the two streams (requiring 2 T_w of overlap) and runs the estimator.
EstimationResult run_estimation(std::span<const OrientationSample> stream1, std::span<const OrientationSample> stream2,
                                const RunConfig& config);

/// For the imu source, the truth offset is replaced by the one actually
/// present between the fused streams.
ErrorReport run_evaluation(const DeltaTimeline& timeline, std::span<const OrientationSample> stream1,
                           std::span<const OrientationSample> stream2, std::span<const TruthSample> truth,
                           const RunConfig& config);

struct PipelineResult {
  SimResult sim;
  std::optional<OrientationPair> fused;
  EstimationResult estimation;
  ErrorReport report;
};

/// simulate -> (fuse) -> estimate -> evaluate entirely in memory.
PipelineResult run_pipeline(const RunConfig& config);

/// Runs config.mode, reading inputs and writing outputs under config.out_dir.
void execute(const RunConfig& config);

}  // namespace romheading
