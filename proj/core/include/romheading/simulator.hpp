#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "romheading/fusion.hpp"
#include "romheading/joint_model.hpp"
#include "romheading/quaternion.hpp"

namespace romheading {

struct SinusoidTerm {
  double amplitude = 0.0;  ///< joint terms: fraction of the half range; base terms: rad
  double frequency = 0.0;  ///< Hz
  double phase = 0.0;      ///< rad
};

/// Motion stops completely on [start, end]; speed ramps down over the
/// `rest_ramp` seconds before start and back up over those after end.
struct RestInterval {
  double start = 0.0;
  double end = 0.0;
};

/// Ground-truth motion of the two-body system.
///
/// Joint angle p follows centre_p + half_p * S(u), u = sum(a sin(2 pi f tau + phi))
/// with tau the motion time (stalled during rests). Without stops S(u) = u and
/// the amplitudes must sum to less than 1 per angle. With `stop_sharpness` k > 0,
/// S(u) = u / (1 + |u|^k)^(1/k): a smooth mechanical stop that the angle presses
/// against whenever |u| > 1 but never passes.
/// Body 1 follows yaw-pitch-roll sinusoids around `base_offset`.
struct MotionProfile {
  std::string name;
  std::array<std::vector<SinusoidTerm>, 3> joint;
  std::array<std::vector<SinusoidTerm>, 3> base;  ///< yaw (z), pitch (y'), roll (x'')
  Vec3 base_offset{0.0, 0.0, 0.0};                 ///< yaw, pitch, roll at tau = 0, rad
  std::vector<RestInterval> rests;
  double rest_ramp = 0.5;                ///< s
  double stop_sharpness = 0.0;           ///< 0 = no stops; otherwise k above, >= 2
  double translation_amplitude = 0.0;    ///< m, shared by both bodies
  double translation_frequency = 0.0;    ///< Hz
  double duration = 60.0;                ///< s
  std::uint64_t seed = 0;                ///< noise realization
};

/// delta(t) = delta0 + rate * t + modulation_amplitude * sin(2 pi t / modulation_period).
struct DriftSpec {
  static constexpr double kMaxRate = deg2rad(0.5);

  double delta0 = 0.0;                ///< rad
  double rate = 0.0;                  ///< rad/s, |rate| <= 0.5 deg/s
  double modulation_amplitude = 0.0;  ///< rad
  double modulation_period = 0.0;     ///< s, ignored when amplitude is 0

  double at(double t) const noexcept;
  void validate() const;
};

struct NoiseSpec {
  double gyro_sigma = 0.01;                   ///< rad/s, white, per axis
  double gyro_bias_max = deg2rad(0.3);        ///< rad/s, per-axis bias ~ U(-max, max)
  double accel_sigma = 0.05;                  ///< m/s^2, white, per axis
  double orientation_sigma = deg2rad(0.5);    ///< rad, per axis, on the orientation streams

  static NoiseSpec none() { return {0.0, 0.0, 0.0, 0.0}; }
};

struct TruthSample {
  double t = 0.0;
  Quaternion q1;   ///< body 1 in the common frame
  Quaternion q2;   ///< body 2 in the common frame
  double delta = 0.0;
  std::array<double, 3> angles{};  ///< joint angles, rad
};

struct SimGroundTruth {
  std::vector<TruthSample> samples;
  Vec3 gyro_bias1{0, 0, 0};
  Vec3 gyro_bias2{0, 0, 0};
};

struct SimResult {
  SimGroundTruth truth;
  std::array<std::vector<ImuSample>, 2> imu;
  std::array<std::vector<OrientationSample>, 2> orientation;
};

/// Continuous-time, noise-free evaluation of a motion profile.
class TrajectoryModel {
public:
  struct State {
    Quaternion q1, q2;
    Vec3 omega1{0, 0, 0}, omega2{0, 0, 0};  ///< body-frame angular rates, rad/s
    Vec3 force1{0, 0, 0}, force2{0, 0, 0};  ///< body-frame specific force, m/s^2
    std::array<double, 3> angles{};
    double delta = 0.0;
  };

  /// Throws InvalidInput for amplitudes that would leave the ranges or for
  /// overlapping rests.
  TrajectoryModel(const JointModel& model, const MotionProfile& profile, const DriftSpec& drift);

  State at(double t) const;
  double motion_time(double t) const noexcept;
  double motion_speed(double t) const noexcept;

private:
  double motion_accel(double t) const noexcept;

  JointModel model_;
  MotionProfile profile_;
  DriftSpec drift_;
};

/// Samples the profile every T_s from t = 0 to duration. Orientation stream 1
/// is in the common frame, stream 2 in a frame rotated by heading_quat(delta(t))
/// so that q1^-1 * heading_quat(delta) * q2 is the true relative orientation.
/// Both carry independent orientation noise. IMU streams carry exact body
/// rates plus bias and white noise, and gravity plus noise.
SimResult simulate(const JointModel& model, const MotionProfile& profile, const DriftSpec& drift,
                   const NoiseSpec& noise, double sample_interval);

/// Named presets modelled on the experiment table: E01 (60 s, random start),
/// E04 (300 s, fast), E05 (210 s, slow), E06 (300 s, mixed with a rest on
/// [164, 184] s). Phases and the starting orientation are drawn from `seed`.
std::vector<MotionProfile> scenario_presets(std::uint64_t seed = 0);
MotionProfile scenario_preset(std::string_view name, std::uint64_t seed = 0);

}  // namespace romheading
