#pragma once

#include <span>
#include <vector>

#include "romheading/quaternion.hpp"

namespace romheading {

inline constexpr double kGravity = 9.81;

struct ImuSample {
  double t = 0.0;   ///< s
  Vec3 gyro{0, 0, 0};   ///< rad/s, body frame
  Vec3 accel{0, 0, 0};  ///< m/s^2, body frame (specific force; +g up when at rest)
};

struct OrientationSample {
  double t = 0.0;
  Quaternion q;  ///< body -> reference frame of this stream
};

/// One strapdown step: q * Q(|w| dt, w / |w|). Identity update for |w| < 1e-12.
Quaternion integrate_gyro_step(const Quaternion& q, const Vec3& gyro, double dt);

struct FusionConfig {
  double gain = 0.01;            ///< inclination correction fraction per sample, [0, 1]
  double accel_gate = 2.0;       ///< m/s^2; skip correction when | |a| - g | exceeds this
  double gravity = kGravity;
  double max_interval_jitter = 0.2;  ///< allowed relative deviation of dt from nominal
};

/// Gyro strapdown integration with a complementary pull of the inclination
/// toward the accelerometer's gravity direction. The correction axis is always
/// horizontal, so heading is never observed: it starts at zero and drifts
/// with the vertical component of the gyro bias.
class ComplementaryFilter {
public:
  explicit ComplementaryFilter(FusionConfig config = {});

  /// Initial orientation from a single accelerometer reading, zero heading.
  void initialize(const Vec3& accel);
  Quaternion update(const Vec3& gyro, const Vec3& accel, double dt);

  bool initialized() const noexcept { return initialized_; }
  const Quaternion& orientation() const noexcept { return q_; }

private:
  void correct(const Vec3& accel);

  FusionConfig config_;
  Quaternion q_;
  bool initialized_ = false;
};

/// Runs one filter over a stream. Throws InvalidInput for fewer than two
/// samples, non-increasing timestamps, or intervals deviating more than 20%
/// from the median interval.
std::vector<OrientationSample> fuse_6d(std::span<const ImuSample> stream, double gain = 0.01);
std::vector<OrientationSample> fuse_6d(std::span<const ImuSample> stream, const FusionConfig& config);

}  // namespace romheading
