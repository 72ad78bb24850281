#include "romheading/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "romheading/error.hpp"
#include "romheading/heading_estimator.hpp"

namespace romheading {

double DriftSpec::at(double t) const noexcept {
  double d = delta0 + rate * t;
  if (modulation_amplitude != 0.0 && modulation_period > 0.0) {
    d += modulation_amplitude * std::sin(kTwoPi * t / modulation_period);
  }
  return d;
}

void DriftSpec::validate() const {
  if (!std::isfinite(delta0) || !std::isfinite(rate)) throw InvalidInput("drift: values must be finite");
  if (std::abs(rate) > kMaxRate + 1e-15) throw InvalidInput("drift: |rate| must not exceed 0.5 deg/s");
  if (modulation_amplitude != 0.0 && !(modulation_period > 0.0)) {
    throw InvalidInput("drift: modulation needs a positive period");
  }
}

namespace {

struct SeriesValue {
  double value = 0.0;
  double rate = 0.0;  // d/dtau
};

SeriesValue eval_series(const std::vector<SinusoidTerm>& terms, double tau) {
  SeriesValue out;
  for (const auto& term : terms) {
    const double w = kTwoPi * term.frequency;
    out.value += term.amplitude * std::sin(w * tau + term.phase);
    out.rate += term.amplitude * w * std::cos(w * tau + term.phase);
  }
  return out;
}

// Smooth saturation u / (1 + |u|^k)^(1/k) applied in place; rate follows the chain rule.
void apply_stop(SeriesValue& v, double sharpness) {
  if (sharpness <= 0.0) return;
  const double base = 1.0 + std::pow(std::abs(v.value), sharpness);
  const double scale = std::pow(base, -1.0 / sharpness);
  v.rate *= scale / base;
  v.value *= scale;
}

// Appends one rotation factor to a chain: omega_body(A * B) = R_B^T omega_A + omega_B.
void chain_rate(Vec3& omega, const Quaternion& factor, const Vec3& axis, double rate) {
  omega = rotate(factor.conjugate(), omega) + rate * axis;
}

}  // namespace

TrajectoryModel::TrajectoryModel(const JointModel& model, const MotionProfile& profile, const DriftSpec& drift)
    : model_(model), profile_(profile), drift_(drift) {
  drift_.validate();
  if (!(profile_.duration > 0.0)) throw InvalidInput("profile '" + profile_.name + "': duration must be positive");
  const bool stops = profile_.stop_sharpness > 0.0;
  if (profile_.stop_sharpness != 0.0 && !(profile_.stop_sharpness >= 2.0)) {
    throw InvalidInput("profile '" + profile_.name + "': stop_sharpness must be 0 or >= 2");
  }
  for (std::size_t p = 0; p < 3; ++p) {
    double sum = 0.0;
    for (const auto& term : profile_.joint[p]) {
      if (term.amplitude < 0.0 || (!stops && term.amplitude > 1.0)) {
        throw InvalidInput("profile '" + profile_.name + "': joint amplitude fractions must lie in [0, 1]");
      }
      sum += term.amplitude;
    }
    if (!stops && sum >= 1.0 && model_.ranges()[p].width() > 0.0) {
      throw InvalidInput("profile '" + profile_.name + "': joint angle " + std::to_string(p + 1) +
                         " amplitudes sum to >= 1 and would reach or exceed its range");
    }
  }
  auto& rests = profile_.rests;
  std::sort(rests.begin(), rests.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  if (!rests.empty() && !(profile_.rest_ramp > 0.0)) throw InvalidInput("profile: rest_ramp must be positive");
  for (std::size_t i = 0; i < rests.size(); ++i) {
    if (!(rests[i].end >= rests[i].start)) throw InvalidInput("profile: rest interval ends before it starts");
    if (i > 0 && rests[i].start - profile_.rest_ramp < rests[i - 1].end + profile_.rest_ramp) {
      throw InvalidInput("profile: rest intervals (with ramps) overlap");
    }
  }
}

double TrajectoryModel::motion_speed(double t) const noexcept {
  const double r = profile_.rest_ramp;
  for (const auto& rest : profile_.rests) {
    if (t < rest.start - r) break;
    if (t < rest.start) return 0.5 * (1.0 + std::cos(kPi * (t - (rest.start - r)) / r));
    if (t <= rest.end) return 0.0;
    if (t < rest.end + r) return 0.5 * (1.0 - std::cos(kPi * (t - rest.end) / r));
  }
  return 1.0;
}

double TrajectoryModel::motion_accel(double t) const noexcept {
  const double r = profile_.rest_ramp;
  for (const auto& rest : profile_.rests) {
    if (t < rest.start - r) break;
    if (t < rest.start) return -0.5 * kPi / r * std::sin(kPi * (t - (rest.start - r)) / r);
    if (t <= rest.end) return 0.0;
    if (t < rest.end + r) return 0.5 * kPi / r * std::sin(kPi * (t - rest.end) / r);
  }
  return 0.0;
}

double TrajectoryModel::motion_time(double t) const noexcept {
  const double r = profile_.rest_ramp;
  double lost = 0.0;
  for (const auto& rest : profile_.rests) {
    const double a = rest.start - r;
    if (t <= a) break;
    // Time lost while slowing down: integral of (1 - speed).
    const double u = std::min(t, rest.start) - a;
    lost += 0.5 * u - r / kTwoPi * std::sin(kPi * u / r);
    if (t <= rest.start) break;
    lost += std::min(t, rest.end) - rest.start;
    if (t <= rest.end) break;
    const double v = std::min(t, rest.end + r) - rest.end;
    lost += 0.5 * v + r / kTwoPi * std::sin(kPi * v / r);
  }
  return t - lost;
}

TrajectoryModel::State TrajectoryModel::at(double t) const {
  const double tau = motion_time(t);
  const double speed = motion_speed(t);
  State s;

  // Body 1: yaw-pitch-roll about z, y', x''.
  const std::array<Vec3, 3> base_axes{Vec3::UnitZ(), Vec3::UnitY(), Vec3::UnitX()};
  Quaternion q1 = Quaternion::identity();
  Vec3 omega = Vec3::Zero();
  for (std::size_t p = 0; p < 3; ++p) {
    const SeriesValue v = eval_series(profile_.base[p], tau);
    const Quaternion factor = from_axis_angle(base_axes[p], profile_.base_offset[static_cast<int>(p)] + v.value);
    q1 = q1 * factor;
    chain_rate(omega, factor, base_axes[p], v.rate * speed);
  }
  s.q1 = q1;
  s.omega1 = omega;

  // Body 2 = body 1 * joint rotation.
  Quaternion joint = Quaternion::identity();
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& range = model_.ranges()[p];
    const double half = 0.5 * range.width();
    SeriesValue v = eval_series(profile_.joint[p], tau);
    apply_stop(v, profile_.stop_sharpness);
    s.angles[p] = range.center() + half * v.value;
    const Quaternion factor = from_axis_angle(model_.axes()[p], s.angles[p]);
    joint = joint * factor;
    chain_rate(omega, factor, model_.axes()[p], half * v.rate * speed);
  }
  s.q2 = (q1 * joint).normalized();
  s.omega2 = omega;

  Vec3 accel_world(0.0, 0.0, kGravity);
  if (profile_.translation_amplitude != 0.0) {
    const double w = kTwoPi * profile_.translation_frequency;
    const double a = profile_.translation_amplitude;
    const Vec3 phase(0.0, 1.0, 2.0);
    const Vec3 scale(1.0, 1.0, 0.5);
    const double ds = motion_accel(t);
    for (int i = 0; i < 3; ++i) {
      const double d1 = a * scale[i] * w * std::cos(w * tau + phase[i]);
      const double d2 = -a * scale[i] * w * w * std::sin(w * tau + phase[i]);
      accel_world[i] += speed * speed * d2 + ds * d1;
    }
  }
  s.force1 = rotate(s.q1.conjugate(), accel_world);
  s.force2 = rotate(s.q2.conjugate(), accel_world);
  s.delta = drift_.at(t);
  return s;
}

SimResult simulate(const JointModel& model, const MotionProfile& profile, const DriftSpec& drift,
                   const NoiseSpec& noise, double sample_interval) {
  if (!(sample_interval > 0.0)) throw InvalidInput("simulate: T_s must be positive");
  const double max_frequency = 1.0 / (8.0 * sample_interval);  // Nyquist / 4
  auto check_terms = [&](const auto& groups) {
    for (const auto& terms : groups) {
      for (const auto& term : terms) {
        if (!(term.frequency >= 0.0 && term.frequency < max_frequency)) {
          throw InvalidInput("profile '" + profile.name + "': frequencies must lie below Nyquist/4");
        }
      }
    }
  };
  check_terms(profile.joint);
  check_terms(profile.base);
  if (profile.translation_frequency >= max_frequency) {
    throw InvalidInput("profile '" + profile.name + "': translation frequency must lie below Nyquist/4");
  }

  const TrajectoryModel trajectory(model, profile, drift);
  std::mt19937_64 rng(profile.seed);
  std::uniform_real_distribution<double> bias_dist(-1.0, 1.0);
  std::normal_distribution<double> unit_normal(0.0, 1.0);

  SimResult out;
  for (int i = 0; i < 3; ++i) out.truth.gyro_bias1[i] = noise.gyro_bias_max * bias_dist(rng);
  for (int i = 0; i < 3; ++i) out.truth.gyro_bias2[i] = noise.gyro_bias_max * bias_dist(rng);
  auto normal3 = [&](double sigma) -> Vec3 {
    const double a = unit_normal(rng), b = unit_normal(rng), c = unit_normal(rng);
    return Vec3(a, b, c) * sigma;
  };

  const auto n = static_cast<std::size_t>(std::floor(profile.duration / sample_interval + 1e-9)) + 1;
  out.truth.samples.reserve(n);
  for (auto& s : out.imu) s.reserve(n);
  for (auto& s : out.orientation) s.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * sample_interval;
    const TrajectoryModel::State st = trajectory.at(t);
    out.truth.samples.push_back({t, st.q1, st.q2, st.delta, st.angles});

    const Vec3 g1 = st.omega1 + out.truth.gyro_bias1 + normal3(noise.gyro_sigma);
    const Vec3 a1 = st.force1 + normal3(noise.accel_sigma);
    const Vec3 g2 = st.omega2 + out.truth.gyro_bias2 + normal3(noise.gyro_sigma);
    const Vec3 a2 = st.force2 + normal3(noise.accel_sigma);
    out.imu[0].push_back({t, g1, a1});
    out.imu[1].push_back({t, g2, a2});

    const Quaternion n1 = from_rotation_vector(normal3(noise.orientation_sigma));
    const Quaternion n2 = from_rotation_vector(normal3(noise.orientation_sigma));
    out.orientation[0].push_back({t, (st.q1 * n1).normalized()});
    out.orientation[1].push_back({t, (heading_quat(st.delta).conjugate() * st.q2 * n2).normalized()});
  }
  return out;
}

namespace {

MotionProfile make_preset(std::string name, double duration, double frequency, double sharpness, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_real_distribution<double> tilt(deg2rad(-10.0), deg2rad(10.0));
  std::uniform_real_distribution<double> yaw(-kPi, kPi);

  MotionProfile p;
  p.name = std::move(name);
  p.duration = duration;
  p.seed = seed;
  // Two incommensurate terms per angle, driven past the soft stops so the
  // joint is pushed against its limits once or twice per cycle. Faster
  // presets get softer stops to keep the rates smooth at 75 Hz.
  const std::array<double, 3> joint_scale{1.0, 1.21, 0.87};
  p.stop_sharpness = sharpness;
  for (std::size_t i = 0; i < 3; ++i) {
    const double f = frequency * joint_scale[i];
    p.joint[i] = {SinusoidTerm{0.95, f, phase(rng)}, SinusoidTerm{0.55, 1.618 * f, phase(rng)}};
  }
  p.base[0] = {SinusoidTerm{deg2rad(40.0), 0.5 * frequency, phase(rng)}};
  p.base[1] = {SinusoidTerm{deg2rad(25.0), 0.7 * frequency, phase(rng)}};
  p.base[2] = {SinusoidTerm{deg2rad(25.0), 0.9 * frequency, phase(rng)}};
  p.base_offset = Vec3(yaw(rng), tilt(rng), tilt(rng));
  return p;
}

}  // namespace

std::vector<MotionProfile> scenario_presets(std::uint64_t seed) {
  std::vector<MotionProfile> presets;
  presets.push_back(make_preset("E01", 60.0, 0.25, 6.0, seed));
  presets.push_back(make_preset("E04", 300.0, 0.3, 4.0, seed));
  presets.push_back(make_preset("E05", 210.0, 0.15, 12.0, seed));
  MotionProfile mixed = make_preset("E06", 300.0, 0.25, 6.0, seed);
  mixed.rests.push_back({164.0, 184.0});
  presets.push_back(std::move(mixed));
  return presets;
}

MotionProfile scenario_preset(std::string_view name, std::uint64_t seed) {
  for (auto& p : scenario_presets(seed)) {
    if (p.name == name) return p;
  }
  throw InvalidInput("unknown scenario preset '" + std::string(name) + "'");
}

}  // namespace romheading
