#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "romheading/fusion.hpp"
#include "romheading/joint_model.hpp"
#include "romheading/quaternion.hpp"

namespace romheading {

/// Window timing. Estimates are made at t_w = w * estimation_interval from the
/// last window_samples() samples at or before t_w.
struct WindowConfig {
  double window_length = 8.0;            ///< T_w, s
  double estimation_interval = 1.0;      ///< T_est, s
  double sample_interval = 1.0 / 75.0;   ///< T_s, s

  std::size_t window_samples() const;    ///< N_w = round(T_w / T_s)
  /// Minimum number of samples for a warm-up window: max(2, N_w / 8).
  std::size_t min_samples() const;
  /// Throws ConfigError unless T_s <= T_est <= T_w and N_w >= 2.
  void validate() const;
};

struct OptimizerConfig {
  double grid_step = deg2rad(1.0);     ///< coarse grid spacing over [0, 2pi)
  double refine_tol = deg2rad(0.01);   ///< local scan spacing around the best grid node
  std::size_t stride = 1;              ///< evaluate the constraint on every stride-th sample

  void validate() const;
};

struct HeadingEstimate {
  double t_w = 0.0;
  double delta_hat = 0.0;          ///< rad, [0, 2pi)
  double cost = 0.0;
  std::size_t violation_count = 0;  ///< among evaluated samples
  std::size_t samples_used = 0;     ///< evaluated samples
};

/// Estimates in increasing t_w. A lookup at time t returns the most recent
/// estimate with t_w <= t, or nothing before the first completed window.
class DeltaTimeline {
public:
  void append(const HeadingEstimate& estimate);

  const std::vector<HeadingEstimate>& estimates() const noexcept { return estimates_; }
  bool empty() const noexcept { return estimates_.empty(); }
  std::size_t size() const noexcept { return estimates_.size(); }

  std::optional<double> lookup(double t) const;
  const HeadingEstimate* lookup_estimate(double t) const;

private:
  std::vector<HeadingEstimate> estimates_;
};

/// Time-aligned pair of orientations from the two bodies.
struct SamplePair {
  Quaternion q1;
  Quaternion q2;
};

/// Rotation about the vertical axis: [cos(d/2), 0, 0, sin(d/2)].
Quaternion heading_quat(double delta) noexcept;

/// q1^-1 * heading_quat(delta_hat) * q2.
Quaternion relative_orientation(const Quaternion& q1, const Quaternion& q2, double delta_hat);

/// 0 when the corrected relative orientation lies in the model set, else 1.
int constraint_violation(const Quaternion& q1, const Quaternion& q2, double delta_hat, const JointModel& model,
                         RomMargin margin);

/// (n / pi) * dist(delta_hat, prev) + stride * sum of violations over every
/// stride-th sample, n = window.size(). dist is the wrapped angular distance
/// in [0, pi]; the first term is dropped when prev is absent. Throws
/// InvalidInput for an empty window.
double window_cost(std::span<const SamplePair> window, double delta_hat, std::optional<double> prev,
                   const JointModel& model, RomMargin margin, std::size_t stride = 1);

/// argmin of window_cost. With prev: coarse grid over [0, 2pi) plus prev, a
/// refine_tol-spaced scan of +-1 grid step around the best node, then
/// golden-section on the last cell toward prev. Exact ties go to the candidate
/// closest to prev, then to the smaller angle. Without prev: a grid_step / 10
/// scan of the whole circle; with several minimal nodes, the midpoint of the
/// largest contiguous run of them.
HeadingEstimate minimize_window(std::span<const SamplePair> window, std::optional<double> prev,
                                const JointModel& model, RomMargin margin, const OptimizerConfig& opt = {});

/// Streaming estimation over two aligned orientation streams. Throws
/// InvalidInput when the streams differ in length or a timestamp pair differs
/// by more than T_s / 2.
DeltaTimeline run_estimator(std::span<const OrientationSample> stream1, std::span<const OrientationSample> stream2,
                            const JointModel& model, const WindowConfig& window, const OptimizerConfig& opt = {},
                            RomMargin margin = {});

}  // namespace romheading
