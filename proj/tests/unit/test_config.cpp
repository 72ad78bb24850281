#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "romheading/config.hpp"
#include "romheading/csv_io.hpp"
#include "romheading/error.hpp"
#include "romheading/pipeline.hpp"

using namespace romheading;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "run.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return {};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("romheading_cfg_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, DefaultsMatchTheTestJoint) {
  const RunConfig cfg = parse_config("");
  EXPECT_EQ(cfg.mode, Mode::pipeline);
  EXPECT_EQ(cfg.convention.to_string(), "zxy");
  EXPECT_NEAR(rad2deg(cfg.ranges[2].max), 40.0, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.window.window_length, 8.0);
  EXPECT_DOUBLE_EQ(cfg.window.estimation_interval, 1.0);
  EXPECT_NEAR(cfg.window.sample_interval, 1.0 / 75.0, 1e-15);
  EXPECT_EQ(cfg.source, Source::orientation);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, ParsesEveryKey) {
  const RunConfig cfg = parse_config(R"(
# full example
mode = estimate
seed = 42
joint.convention = x-y'-z''
joint.alpha_deg = -10 30      # flexion
joint.beta_deg = -5 5
joint.gamma_deg = -60 45
joint.slack_deg = 0.5
window.T_w = 6
window.T_est = 0.5
window.T_s = 0.01
optimizer.grid_step_deg = 2
optimizer.refine_tol_deg = 0.05
optimizer.stride = 3
fusion.gain = 0.02
fusion.accel_gate = 1.5
sim.preset = E06
sim.duration_s = 120
drift.delta0_deg = 90
drift.rate_deg_s = -0.1
drift.modulation_deg = 4
drift.modulation_period_s = 25
noise.gyro_sigma_rad_s = 0.004
noise.gyro_bias_deg_s = 0.2
noise.accel_sigma = 0.03
noise.orientation_sigma_deg = 1
pipeline.source = imu
input.orientation1 = /data/o1.csv
output.dir = /tmp/results
evaluate.start_s = 12
)");
  EXPECT_EQ(cfg.mode, Mode::estimate);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.convention.to_string(), "xyz");
  EXPECT_NEAR(rad2deg(cfg.ranges[0].min), -10.0, 1e-12);
  EXPECT_NEAR(rad2deg(cfg.ranges[2].max), 45.0, 1e-12);
  EXPECT_NEAR(rad2deg(cfg.slack), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.window.window_length, 6.0);
  EXPECT_DOUBLE_EQ(cfg.window.sample_interval, 0.01);
  EXPECT_NEAR(rad2deg(cfg.optimizer.grid_step), 2.0, 1e-12);
  EXPECT_EQ(cfg.optimizer.stride, 3u);
  EXPECT_DOUBLE_EQ(cfg.fusion.accel_gate, 1.5);
  EXPECT_EQ(cfg.preset, "E06");
  ASSERT_TRUE(cfg.duration.has_value());
  EXPECT_DOUBLE_EQ(*cfg.duration, 120.0);
  EXPECT_FALSE(cfg.random_delta0);
  EXPECT_NEAR(rad2deg(cfg.drift.delta0), 90.0, 1e-12);
  EXPECT_NEAR(rad2deg(cfg.drift.rate), -0.1, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.drift.modulation_period, 25.0);
  EXPECT_DOUBLE_EQ(cfg.noise.gyro_sigma, 0.004);
  EXPECT_NEAR(rad2deg(cfg.noise.orientation_sigma), 1.0, 1e-12);
  EXPECT_EQ(cfg.source, Source::imu);
  EXPECT_EQ(cfg.orientation1, fs::path("/data/o1.csv"));
  EXPECT_EQ(cfg.out_dir, fs::path("/tmp/results"));
  EXPECT_DOUBLE_EQ(cfg.evaluate_start, 12.0);
}

TEST(Config, RandomInitialOffsetComesFromTheSeed) {
  const RunConfig a = parse_config("drift.delta0_deg = random\nseed = 3\n");
  const RunConfig b = parse_config("drift.delta0_deg = random\nseed = 4\n");
  EXPECT_TRUE(a.random_delta0);
  const double d3 = configured_drift(a).delta0;
  EXPECT_DOUBLE_EQ(d3, configured_drift(a).delta0);
  EXPECT_NE(d3, configured_drift(b).delta0);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    RunConfig c = a;
    c.seed = seed;
    const double d = rad2deg(configured_drift(c).delta0);
    EXPECT_GT(d, 25.0);
    EXPECT_LT(d, 335.0);
  }
}

TEST(Config, ErrorsNameFileLineAndKey) {
  EXPECT_EQ(config_error("seed = 1\n\nbogus.key = 3\n"), "run.cfg:3: bogus.key: unknown key");
  EXPECT_EQ(config_error("window.T_w = eight\n").rfind("run.cfg:1: window.T_w: invalid number", 0), 0u);
  EXPECT_EQ(config_error("joint.alpha_deg = 20\n").rfind("run.cfg:1: joint.alpha_deg: expected 2", 0), 0u);
  EXPECT_EQ(config_error("joint.alpha_deg = 20 -20\n").rfind("run.cfg:1: joint.alpha_deg: range min", 0), 0u);
  EXPECT_EQ(config_error("# c\nmode = sideways\n").rfind("run.cfg:2: mode:", 0), 0u);
  EXPECT_EQ(config_error("joint.convention = zzx\n").rfind("run.cfg:1: joint.convention:", 0), 0u);
  EXPECT_EQ(config_error("pipeline.source = gps\n").rfind("run.cfg:1: pipeline.source:", 0), 0u);
  EXPECT_EQ(config_error("just words\n"), "run.cfg:1: expected 'key = value'");
}

TEST(Config, ValidateChecksInvariantsAndInputs) {
  RunConfig cfg = parse_config("window.T_est = 20\n");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = parse_config("fusion.gain = 1.5\n");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = parse_config("joint.slack_deg = 20\n");
  EXPECT_THROW(cfg.validate(), ConfigError);

  cfg = parse_config("mode = evaluate\n");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = parse_config("mode = fuse\ninput.imu1 = /nonexistent/a.csv\ninput.imu2 = /nonexistent/b.csv\n");
  try {
    cfg.validate();
    FAIL() << "missing input accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("input.imu1: file not found"), std::string::npos) << e.what();
  }
}

TEST(Config, LoadResolvesPathsAgainstTheConfigDirectory) {
  const fs::path dir = scratch_dir("load");
  std::ofstream(dir / "a.csv") << "x";
  std::ofstream(dir / "b.csv") << "x";
  std::ofstream(dir / "run.cfg") << "mode = fuse\ninput.imu1 = a.csv\ninput.imu2 = b.csv\noutput.dir = results\n";
  const RunConfig cfg = load_config(dir / "run.cfg");
  EXPECT_EQ(cfg.imu1, dir / "a.csv");
  EXPECT_EQ(cfg.out_dir, dir / "results");
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_THROW(load_config(dir / "missing.cfg"), ConfigError);
  fs::remove_all(dir);
}

TEST(Execute, SimulateThenEstimateFromFiles) {
  const fs::path dir = scratch_dir("execute");
  RunConfig sim = parse_config("mode = simulate\nsim.preset = E05\nsim.duration_s = 30\n");
  sim.out_dir = dir / "sim";
  execute(sim);
  for (const char* f : {"imu_1.csv", "imu_2.csv", "orientation_1.csv", "orientation_2.csv", "truth.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "sim" / f)) << f;
  }
  EXPECT_EQ(load_orientation_csv(dir / "sim" / "orientation_1.csv").size(), 30u * 75u + 1u);

  RunConfig est = parse_config("mode = estimate\n");
  est.orientation1 = dir / "sim" / "orientation_1.csv";
  est.orientation2 = dir / "sim" / "orientation_2.csv";
  est.out_dir = dir / "est";
  est.validate();
  execute(est);
  // One estimate per T_est from 1 s to 30 s; the first windows are shorter.
  EXPECT_EQ(load_timeline_csv(dir / "est" / "timeline.csv").size(), 30u);

  RunConfig ev = parse_config("mode = evaluate\n");
  ev.orientation1 = est.orientation1;
  ev.orientation2 = est.orientation2;
  ev.truth = dir / "sim" / "truth.csv";
  ev.timeline = dir / "est" / "timeline.csv";
  ev.out_dir = dir / "eval";
  ev.validate();
  execute(ev);
  EXPECT_TRUE(fs::exists(dir / "eval" / "summary.txt"));
  EXPECT_TRUE(fs::exists(dir / "eval" / "report.csv"));
  fs::remove_all(dir);
}
