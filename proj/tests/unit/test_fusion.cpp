#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "romheading/error.hpp"
#include "romheading/fusion.hpp"
#include "romheading/simulator.hpp"

using namespace romheading;

namespace {

constexpr double kTs = 1.0 / 75.0;

std::vector<ImuSample> constant_imu(std::size_t n, const Vec3& gyro, const Vec3& accel) {
  std::vector<ImuSample> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back({static_cast<double>(k) * kTs, gyro, accel});
  return out;
}

// Heading of q: angle of its rotated x axis in the horizontal plane.
double heading(const Quaternion& q) {
  const Vec3 x = rotate(q, Vec3::UnitX());
  return std::atan2(x.y(), x.x());
}

double inclination_error(const Quaternion& est, const Quaternion& truth) {
  const Vec3 a = rotate(est.conjugate(), Vec3::UnitZ());
  const Vec3 b = rotate(truth.conjugate(), Vec3::UnitZ());
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

}  // namespace

TEST(Fusion, StaticLevelStaysLevel) {
  const auto out = fuse_6d(constant_imu(750, Vec3::Zero(), Vec3(0, 0, kGravity)));
  ASSERT_EQ(out.size(), 750u);
  for (const auto& s : out) EXPECT_LT(rotation_distance(s.q, Quaternion::identity()), 1e-12);
}

TEST(Fusion, InitialisesFromTilt) {
  const Quaternion truth = from_axis_angle(Vec3(1, 1, 0).normalized(), deg2rad(30.0));
  const Vec3 accel = rotate(truth.conjugate(), Vec3(0, 0, kGravity));
  const auto out = fuse_6d(constant_imu(10, Vec3::Zero(), accel));
  for (const auto& s : out) EXPECT_LT(inclination_error(s.q, truth), 1e-9);
}

TEST(Fusion, IntegratesYawRate) {
  // 10 deg/s about z for 1 s: the level accelerometer agrees throughout.
  const auto out = fuse_6d(constant_imu(76, Vec3(0, 0, deg2rad(10.0)), Vec3(0, 0, kGravity)));
  EXPECT_NEAR(rad2deg(heading(out.back().q)), 10.0, 0.1);
}

TEST(Fusion, VerticalBiasBecomesHeadingDrift) {
  const double bias = deg2rad(0.3);
  const auto out = fuse_6d(constant_imu(7501, Vec3(0, 0, bias), Vec3(0, 0, kGravity)));
  const double drift = std::remainder(heading(out.back().q) - heading(out.front().q), kTwoPi);
  EXPECT_NEAR(rad2deg(drift), 30.0, 30.0 * 0.05);
}

TEST(Fusion, StepRefinementConverges) {
  // q(t) = Qz(a t) Qx(b t); body rate = Qx(b t)^T [0 0 a] + [b 0 0].
  const double a = 1.3, b = 0.7;
  auto rate = [&](double t) {
    return Vec3(rotate(from_axis_angle(Vec3::UnitX(), b * t).conjugate(), Vec3(0, 0, a)) + Vec3(b, 0, 0));
  };
  const Quaternion exact = from_axis_angle(Vec3::UnitZ(), a) * from_axis_angle(Vec3::UnitX(), b);
  double previous = 1.0;
  for (int steps : {10, 100, 1000}) {
    Quaternion q = Quaternion::identity();
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) q = integrate_gyro_step(q, rate((i + 0.5) * dt), dt);
    const double err = rotation_angle(inverse(exact) * q);
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 1e-5);
}

TEST(Fusion, TinyRatesLeaveOrientationUnchanged) {
  const Quaternion q = from_axis_angle(Vec3::UnitY(), 0.3);
  EXPECT_EQ(integrate_gyro_step(q, Vec3(1e-13, 0, 0), kTs), q);
}

TEST(Fusion, InclinationErrorDecaysAtTheGain) {
  ComplementaryFilter filter(FusionConfig{0.01});
  const Vec3 level(0, 0, kGravity);
  filter.initialize(rotate(from_axis_angle(Vec3::UnitX(), deg2rad(-10.0)), level));
  const double e0 = inclination_error(filter.orientation(), Quaternion::identity());
  ASSERT_NEAR(rad2deg(e0), 10.0, 1e-9);
  for (int k = 0; k < 100; ++k) filter.update(Vec3::Zero(), level, kTs);
  const double e100 = inclination_error(filter.orientation(), Quaternion::identity());
  EXPECT_NEAR(e100 / e0, std::pow(0.99, 100), 0.01);
}

TEST(Fusion, AccelGateSkipsCorrection) {
  ComplementaryFilter filter(FusionConfig{0.5});
  filter.initialize(Vec3(0, 0, kGravity));
  const Vec3 pushed = Vec3(0, 5.0, 1.0).normalized() * (kGravity + 5.0);
  for (int k = 0; k < 50; ++k) filter.update(Vec3::Zero(), pushed, kTs);
  EXPECT_LT(rotation_distance(filter.orientation(), Quaternion::identity()), 1e-12);
}

TEST(Fusion, TracksNoiseFreeSimulation) {
  const JointModel model = JointModel::default_test_joint();
  MotionProfile profile = scenario_preset("E04", 1);
  profile.duration = 60.0;
  const auto sim = simulate(model, profile, {}, NoiseSpec::none(), kTs);
  const auto fused = fuse_6d(sim.imu[0]);
  double worst = 0.0;
  for (std::size_t k = 0; k < fused.size(); ++k) {
    if (fused[k].t > 5.0) worst = std::max(worst, inclination_error(fused[k].q, sim.truth.samples[k].q1));
  }
  EXPECT_LT(rad2deg(worst), 1.0);
}

TEST(Fusion, RejectsBadStreams) {
  EXPECT_THROW(fuse_6d(constant_imu(1, Vec3::Zero(), Vec3(0, 0, kGravity))), InvalidInput);
  auto backwards = constant_imu(10, Vec3::Zero(), Vec3(0, 0, kGravity));
  backwards[5].t = backwards[4].t;
  EXPECT_THROW(fuse_6d(backwards), InvalidInput);
  auto jitter = constant_imu(10, Vec3::Zero(), Vec3(0, 0, kGravity));
  jitter[5].t += 0.5 * kTs;
  EXPECT_THROW(fuse_6d(jitter), InvalidInput);
}
