#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "romheading/fusion.hpp"
#include "romheading/heading_estimator.hpp"
#include "romheading/simulator.hpp"

namespace romheading {

/// Angle of q_true^-1 * q_est, in [0, pi].
double orientation_error(const Quaternion& q_true, const Quaternion& q_est);

/// Wrapped |delta_true - delta_est|, in [0, pi].
double delta_error(double delta_true, double delta_est) noexcept;

struct EvaluationOptions {
  double start_time = 0.0;                    ///< samples with t < start_time are excluded
  double convergence_threshold = deg2rad(5.0);
  double convergence_hold = 2.0;              ///< s
  double sample_interval = 1.0 / 75.0;        ///< alignment tolerance is half of this
};

/// Per-sample and aggregate errors; all angles in radians.
struct ErrorReport {
  std::vector<double> t;
  std::vector<double> epsilon;
  std::vector<double> epsilon_delta;

  double epsilon_rms = 0.0;
  double epsilon_delta_rms = 0.0;
  double epsilon_max = 0.0;
  double epsilon_delta_max = 0.0;
  /// First time after which epsilon stays below the threshold for the hold time.
  std::optional<double> convergence_time;

  std::size_t sample_count() const noexcept { return t.size(); }
};

/// Compares the estimate against ground truth on the stream's sample grid.
/// Samples without an estimate yet, before start_time, or without a truth
/// sample within T_s / 2 are skipped. Throws InvalidInput when nothing is left.
ErrorReport evaluate(const DeltaTimeline& timeline, std::span<const OrientationSample> stream1,
                     std::span<const OrientationSample> stream2, std::span<const TruthSample> truth,
                     const EvaluationOptions& options = {});

/// Heading offset actually present between two fused streams: with fused
/// q_i ~ Qz(h_i) * q_i,true, the offset is h1 - h2. Returns one truth sample
/// per stream sample (nearest truth within T_s / 2, retimed to the stream)
/// with delta replaced. Throws InvalidInput when a stream sample has no truth.
std::vector<TruthSample> with_effective_heading_offset(std::span<const OrientationSample> stream1,
                                                       std::span<const OrientationSample> stream2,
                                                       std::span<const TruthSample> truth,
                                                       double sample_interval);

}  // namespace romheading
