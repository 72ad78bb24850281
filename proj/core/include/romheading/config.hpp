#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "romheading/fusion.hpp"
#include "romheading/heading_estimator.hpp"
#include "romheading/joint_model.hpp"
#include "romheading/simulator.hpp"

namespace romheading {

enum class Mode { simulate, fuse, estimate, evaluate, pipeline };
/// Which streams feed the estimator: simulated/loaded orientations, or IMU data run through fusion.
enum class Source { orientation, imu };

Mode parse_mode(std::string_view text);
std::string_view to_string(Mode mode);

/// Everything a run needs. Angles are radians here; the file uses degrees.
///
/// File format: one `key = value` per line, `#` starts a comment, dotted
/// section keys. Example:
///
///     mode = pipeline
///     joint.convention = zxy
///     joint.alpha_deg = -20 20
///     window.T_w = 8
///     drift.delta0_deg = random
struct RunConfig {
  Mode mode = Mode::pipeline;
  std::uint64_t seed = 1;

  EulerConvention convention{Axis::Z, Axis::X, Axis::Y};
  std::array<AngleRange, 3> ranges{AngleRange{deg2rad(-20.0), deg2rad(20.0)},
                                   AngleRange{deg2rad(-15.0), deg2rad(15.0)},
                                   AngleRange{deg2rad(-40.0), deg2rad(40.0)}};
  double slack = RomMargin::kDefaultSlack;

  WindowConfig window;
  OptimizerConfig optimizer;
  FusionConfig fusion;

  std::string preset = "E05";
  std::optional<double> duration;
  DriftSpec drift{deg2rad(30.0), deg2rad(0.2), 0.0, 0.0};
  bool random_delta0 = false;
  NoiseSpec noise;
  Source source = Source::orientation;

  std::filesystem::path imu1, imu2, orientation1, orientation2, truth, timeline;
  std::filesystem::path out_dir = "out";
  double evaluate_start = 10.0;

  JointModel joint_model() const { return JointModel(convention, ranges); }
  RomMargin margin() const { return RomMargin(slack); }

  /// Re-checks cross-field invariants and, for read modes, that input files
  /// exist. Throws ConfigError.
  void validate() const;
};

/// Throws ConfigError naming the source and line. Relative input paths are
/// resolved against `base_dir`.
RunConfig parse_config(std::string_view text, const std::string& source_name = "<config>",
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace romheading
