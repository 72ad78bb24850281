#include "romheading/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "romheading/error.hpp"

namespace romheading {

Quaternion integrate_gyro_step(const Quaternion& q, const Vec3& gyro, double dt) {
  const double rate = gyro.norm();
  if (rate < 1e-12) return q;
  return (q * from_axis_angle(gyro / rate, rate * dt)).normalized();
}

ComplementaryFilter::ComplementaryFilter(FusionConfig config) : config_(config) {
  if (!(config_.gain >= 0.0 && config_.gain <= 1.0)) {
    throw InvalidInput("fusion gain must lie in [0, 1]");
  }
}

void ComplementaryFilter::initialize(const Vec3& accel) {
  q_ = accel.norm() > 1e-9 ? rotation_between(accel, Vec3::UnitZ()) : Quaternion::identity();
  initialized_ = true;
}

void ComplementaryFilter::correct(const Vec3& accel) {
  const double magnitude = accel.norm();
  if (std::abs(magnitude - config_.gravity) > config_.accel_gate || magnitude < 1e-9) return;

  // Measured "up" in the reference frame; rotate it a fraction of the way onto +z.
  const Vec3 up = rotate(q_, accel / magnitude);
  const Vec3 axis = up.cross(Vec3::UnitZ());
  const double s = axis.norm();
  if (s < 1e-12) return;
  const double angle = std::atan2(s, up.z());
  q_ = (from_axis_angle(axis / s, config_.gain * angle) * q_).normalized();
}

Quaternion ComplementaryFilter::update(const Vec3& gyro, const Vec3& accel, double dt) {
  if (!initialized_) {
    initialize(accel);
    return q_;
  }
  q_ = integrate_gyro_step(q_, gyro, dt);
  correct(accel);
  return q_;
}

std::vector<OrientationSample> fuse_6d(std::span<const ImuSample> stream, double gain) {
  FusionConfig config;
  config.gain = gain;
  return fuse_6d(stream, config);
}

std::vector<OrientationSample> fuse_6d(std::span<const ImuSample> stream, const FusionConfig& config) {
  if (stream.size() < 2) throw InvalidInput("fusion needs at least two IMU samples");

  std::vector<double> intervals;
  intervals.reserve(stream.size() - 1);
  for (std::size_t k = 1; k < stream.size(); ++k) {
    const double dt = stream[k].t - stream[k - 1].t;
    if (!(dt > 0.0)) {
      throw InvalidInput("IMU timestamps must strictly increase (sample " + std::to_string(k) + ")");
    }
    intervals.push_back(dt);
  }
  std::vector<double> sorted = intervals;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double nominal = sorted[sorted.size() / 2];
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    if (std::abs(intervals[k] - nominal) > config.max_interval_jitter * nominal) {
      throw InvalidInput("IMU sample interval at sample " + std::to_string(k + 1) +
                         " deviates more than 20% from nominal");
    }
  }

  ComplementaryFilter filter(config);
  std::vector<OrientationSample> out;
  out.reserve(stream.size());
  filter.initialize(stream.front().accel);
  out.push_back({stream.front().t, filter.orientation()});
  for (std::size_t k = 1; k < stream.size(); ++k) {
    out.push_back({stream[k].t, filter.update(stream[k].gyro, stream[k].accel, intervals[k - 1])});
  }
  return out;
}

}  // namespace romheading
