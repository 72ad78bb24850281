#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "romheading/error.hpp"
#include "romheading/heading_estimator.hpp"
#include "romheading/simulator.hpp"
#include "support/scenarios.hpp"

using namespace romheading;

namespace {

const JointModel kModel = JointModel::default_test_joint();

// q1 = identity and q2 = joint(alpha_k, 0, 0): with the correction Qz(d) the
// relative orientation is joint(alpha_k + d, 0, 0), so sample k violates iff
// alpha_k + d leaves [-20, 20] deg (plus slack). That is the counting oracle.
std::vector<SamplePair> alpha_window(const std::vector<double>& alphas_deg) {
  std::vector<SamplePair> out;
  for (double a : alphas_deg) out.push_back({Quaternion::identity(), joint_forward(kModel, deg2rad(a), 0.0, 0.0)});
  return out;
}

int oracle_violations(const std::vector<double>& alphas_deg, double d_deg, double slack_deg) {
  int count = 0;
  for (double a : alphas_deg) {
    const double v = rad2deg(wrap_pi(deg2rad(a + d_deg)));
    if (v < -20.0 - slack_deg - 1e-9 || v > 20.0 + slack_deg + 1e-9) ++count;
  }
  return count;
}

std::vector<OrientationSample> stamp(const std::vector<Quaternion>& qs, double ts) {
  std::vector<OrientationSample> out;
  for (std::size_t k = 0; k < qs.size(); ++k) out.push_back({static_cast<double>(k) * ts, qs[k]});
  return out;
}

}  // namespace

TEST(HeadingQuat, IsARotationAboutVertical) {
  const Quaternion q = heading_quat(kPi / 2.0);
  EXPECT_NEAR(q.w, std::sqrt(0.5), 1e-15);
  EXPECT_DOUBLE_EQ(q.x, 0.0);
  EXPECT_DOUBLE_EQ(q.y, 0.0);
  EXPECT_NEAR(q.z, std::sqrt(0.5), 1e-15);
  EXPECT_LT((rotate(q, Vec3::UnitX()) - Vec3::UnitY()).norm(), 1e-15);
  EXPECT_EQ(heading_quat(0.0), Quaternion::identity());
}

TEST(RelativeOrientation, UndoesTheSimulatedFrameOffset) {
  const Quaternion q1 = from_axis_angle(Vec3(1, 2, 3).normalized(), 0.7);
  const Quaternion joint = joint_forward(kModel, 0.1, -0.05, 0.3);
  const double delta = deg2rad(123.0);
  const Quaternion q2_frame2 = heading_quat(delta).conjugate() * (q1 * joint);
  EXPECT_LT(rotation_distance(relative_orientation(q1, q2_frame2, delta), joint), 1e-14);
}

TEST(WindowCost, MatchesCountingOracle) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> alpha(-25.0, 25.0);
  std::vector<double> alphas(600);
  for (auto& a : alphas) a = alpha(rng);
  const auto window = alpha_window(alphas);
  std::uniform_real_distribution<double> d(-30.0, 30.0);
  for (int i = 0; i < 600; ++i) {
    const double delta = d(rng);
    const double prev = d(rng);
    const double slack = i % 2 ? 2.0 : 0.0;
    const double expected =
        600.0 / kPi * angular_distance(deg2rad(delta), deg2rad(prev)) + oracle_violations(alphas, delta, slack);
    EXPECT_NEAR(window_cost(window, deg2rad(delta), deg2rad(prev), kModel, RomMargin(deg2rad(slack))), expected, 1e-9);
  }
  // Without prev the distance term disappears.
  EXPECT_DOUBLE_EQ(window_cost(window, deg2rad(10.0), std::nullopt, kModel, RomMargin::none()),
                   oracle_violations(alphas, 10.0, 0.0));
}

TEST(WindowCost, StrideCountsEveryStrideThSample) {
  const std::vector<double> alphas{25, 0, 25, 0, 25, 0};  // violations at even indices
  const auto window = alpha_window(alphas);
  EXPECT_DOUBLE_EQ(window_cost(window, 0.0, std::nullopt, kModel, RomMargin::none(), 1), 3.0);
  EXPECT_DOUBLE_EQ(window_cost(window, 0.0, std::nullopt, kModel, RomMargin::none(), 2), 6.0);
  EXPECT_THROW(window_cost({}, 0.0, std::nullopt, kModel, RomMargin::none()), InvalidInput);
}

TEST(MinimizeWindow, FirstWindowTakesThePlateauMidpoint) {
  std::vector<double> alphas;
  for (int i = 0; i <= 100; ++i) alphas.push_back(-10.0 + 0.2 * i);  // feasible d in [-10, 10]
  auto est = minimize_window(alpha_window(alphas), std::nullopt, kModel, RomMargin::none());
  EXPECT_LT(rad2deg(angular_distance(est.delta_hat, 0.0)), 0.1);
  EXPECT_EQ(est.violation_count, 0u);

  alphas.clear();
  for (int i = 0; i <= 100; ++i) alphas.push_back(0.15 * i);  // feasible d in [-20, 5]
  est = minimize_window(alpha_window(alphas), std::nullopt, kModel, RomMargin::none());
  EXPECT_LT(rad2deg(angular_distance(est.delta_hat, deg2rad(-7.5))), 0.1);
}

TEST(MinimizeWindow, StaysAtFeasiblePrev) {
  // A static pose inside the ROM is satisfied by a wide arc of offsets: the
  // distance term pins the estimate to prev.
  const std::vector<double> alphas(600, 5.0);
  const auto est = minimize_window(alpha_window(alphas), deg2rad(8.0), kModel, RomMargin::none());
  EXPECT_DOUBLE_EQ(est.delta_hat, deg2rad(8.0));
  EXPECT_DOUBLE_EQ(est.cost, 0.0);
}

TEST(MinimizeWindow, MovesToTheNearestFeasibleEdge) {
  // Feasible d in [-20 - 5, 20 - 15] = [-25, 5]; from prev = 12 the optimum is the edge at 5.
  const std::vector<double> alphas{5.0, 15.0, 10.0};
  std::vector<double> many;
  for (int i = 0; i < 200; ++i) many.insert(many.end(), alphas.begin(), alphas.end());
  const auto est = minimize_window(alpha_window(many), deg2rad(12.0), kModel, RomMargin::none());
  EXPECT_NEAR(rad2deg(est.delta_hat), 5.0, 0.01);
  EXPECT_EQ(est.violation_count, 0u);
}

TEST(MinimizeWindow, RecoversTrueOffsetFromRichMotion) {
  const WindowConfig wc;
  const auto profile = scenario_preset("E04", 2);
  const auto sim = simulate(kModel, profile, {deg2rad(73.0), 0.0, 0.0, 0.0}, NoiseSpec::none(), wc.sample_interval);
  const auto window = scenarios::window_pairs(sim.orientation[0], sim.orientation[1], 1500, wc.window_samples());
  const auto est = minimize_window(window, std::nullopt, kModel, RomMargin::none());
  EXPECT_LT(rad2deg(angular_distance(est.delta_hat, deg2rad(73.0))), 2.0);
  EXPECT_EQ(est.violation_count, 0u);
}

TEST(MinimizeWindow, NeverWorseThanBruteForce) {
  const WindowConfig wc{2.0, 1.0, 1.0 / 75.0};
  const auto profile = scenario_preset("E04", 3);
  const auto sim = simulate(kModel, profile, {deg2rad(200.0), deg2rad(0.2), 0.0, 0.0}, NoiseSpec{}, wc.sample_interval);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0), off(-5.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    const auto end = 150 + static_cast<std::size_t>(u(rng) * (sim.truth.samples.size() - 150));
    const auto window = scenarios::window_pairs(sim.orientation[0], sim.orientation[1], end, wc.window_samples());
    const double prev = sim.truth.samples[end - 1].delta + deg2rad(off(rng));
    const RomMargin margin;
    const auto est = minimize_window(window, prev, kModel, margin);
    double brute = 1e300;
    for (int k = 0; k < 36000; ++k) brute = std::min(brute, window_cost(window, prev + deg2rad(0.01 * k), prev, kModel, margin));
    EXPECT_LE(est.cost, brute + 0.05) << i;
  }
}

TEST(Timeline, LookupReturnsLatestEstimateAtOrBefore) {
  DeltaTimeline tl;
  tl.append({1.0, 0.1, 0, 0, 1});
  tl.append({2.0, 0.2, 0, 0, 1});
  EXPECT_FALSE(tl.lookup(0.99).has_value());
  EXPECT_DOUBLE_EQ(*tl.lookup(1.0), 0.1);
  EXPECT_DOUBLE_EQ(*tl.lookup(1.99), 0.1);
  EXPECT_DOUBLE_EQ(*tl.lookup(50.0), 0.2);
  EXPECT_THROW(tl.append({2.0, 0.3, 0, 0, 1}), InvalidInput);
}

TEST(WindowConfig, SampleCountsAndValidation) {
  const WindowConfig wc;
  EXPECT_EQ(wc.window_samples(), 600u);
  EXPECT_EQ(wc.min_samples(), 75u);
  EXPECT_THROW((WindowConfig{8.0, 0.0, 1.0 / 75.0}.validate()), ConfigError);
  EXPECT_THROW((WindowConfig{8.0, 10.0, 1.0 / 75.0}.validate()), ConfigError);
  EXPECT_THROW((WindowConfig{0.01, 1.0, 1.0 / 75.0}.validate()), ConfigError);
  EXPECT_THROW((OptimizerConfig{0.0, deg2rad(0.01), 1}.validate()), ConfigError);
}

TEST(RunEstimator, WindowSpansTheLastTwSeconds) {
  const WindowConfig wc;
  const std::vector<Quaternion> qs(1000, Quaternion::identity());
  const auto s = stamp(qs, wc.sample_interval);
  const auto tl = run_estimator(s, s, kModel, wc);
  const auto* at10 = tl.lookup_estimate(10.0);
  ASSERT_NE(at10, nullptr);
  EXPECT_DOUBLE_EQ(at10->t_w, 10.0);
  EXPECT_EQ(at10->samples_used, 600u);  // t in (2, 10]
  EXPECT_EQ(tl.estimates().front().samples_used, 76u);  // warm-up window at t_w = 1: t in [0, 1]
  EXPECT_DOUBLE_EQ(tl.estimates().front().t_w, 1.0);
}

TEST(RunEstimator, RejectsMisalignedStreams) {
  const WindowConfig wc;
  const std::vector<Quaternion> qs(200, Quaternion::identity());
  const auto s = stamp(qs, wc.sample_interval);
  auto shorter = s;
  shorter.pop_back();
  EXPECT_THROW(run_estimator(s, shorter, kModel, wc), InvalidInput);
  auto shifted = s;
  shifted[10].t += wc.sample_interval;
  EXPECT_THROW(run_estimator(s, shifted, kModel, wc), InvalidInput);
  EXPECT_TRUE(run_estimator({}, {}, kModel, wc).empty());
}

TEST(RunEstimator, IdenticalStreamsStayNearPrev) {
  // q1 = q2: the cost is multimodal, but after the first window the distance
  // term keeps every estimate within a grid step of the one before.
  const WindowConfig wc;
  const auto sim = simulate(kModel, scenario_preset("E01", 4), {}, NoiseSpec::none(), wc.sample_interval);
  const JointModel wide(EulerConvention(), {AngleRange{deg2rad(-40.0), deg2rad(40.0)},
                                            AngleRange{deg2rad(-40.0), deg2rad(40.0)},
                                            AngleRange{deg2rad(-40.0), deg2rad(40.0)}});
  const auto tl = run_estimator(sim.orientation[0], sim.orientation[0], wide, wc, {}, RomMargin(deg2rad(5.0)));
  const auto& e = tl.estimates();
  for (std::size_t i = 1; i < e.size(); ++i) {
    EXPECT_LE(angular_distance(e[i].delta_hat, e[i - 1].delta_hat), OptimizerConfig{}.grid_step + 1e-12);
  }
}

TEST(RunEstimator, HeadingEquivariance) {
  const WindowConfig wc;
  const auto sim = simulate(kModel, scenario_preset("E01", 5), {deg2rad(300.0), deg2rad(0.1), 0.0, 0.0}, NoiseSpec{},
                            wc.sample_interval);
  const auto base = run_estimator(sim.orientation[0], sim.orientation[1], kModel, wc);
  for (double c_deg : {37.0, -120.0}) {
    const double c = deg2rad(c_deg);
    auto turned = sim.orientation[1];
    for (auto& s : turned) s.q = heading_quat(c).conjugate() * s.q;
    const auto shifted = run_estimator(sim.orientation[0], turned, kModel, wc);
    ASSERT_EQ(shifted.size(), base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_LE(angular_distance(shifted.estimates()[i].delta_hat, base.estimates()[i].delta_hat + c),
                OptimizerConfig{}.grid_step);
    }
  }
}

TEST(RunEstimator, Deterministic) {
  const WindowConfig wc;
  const auto sim = simulate(kModel, scenario_preset("E01", 6), {deg2rad(50.0), deg2rad(0.2), 0.0, 0.0}, NoiseSpec{},
                            wc.sample_interval);
  const auto a = run_estimator(sim.orientation[0], sim.orientation[1], kModel, wc);
  const auto b = run_estimator(sim.orientation[0], sim.orientation[1], kModel, wc);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.estimates()[i].delta_hat, b.estimates()[i].delta_hat);
    EXPECT_EQ(a.estimates()[i].cost, b.estimates()[i].cost);
  }
}
