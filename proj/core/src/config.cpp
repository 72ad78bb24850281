#include "romheading/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "romheading/error.hpp"

namespace romheading {

namespace fs = std::filesystem;

Mode parse_mode(std::string_view text) {
  if (text == "simulate") return Mode::simulate;
  if (text == "fuse") return Mode::fuse;
  if (text == "estimate") return Mode::estimate;
  if (text == "evaluate") return Mode::evaluate;
  if (text == "pipeline") return Mode::pipeline;
  throw ConfigError("unknown mode '" + std::string(text) + "' (simulate|fuse|estimate|evaluate|pipeline)");
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::simulate: return "simulate";
    case Mode::fuse: return "fuse";
    case Mode::estimate: return "estimate";
    case Mode::evaluate: return "evaluate";
    case Mode::pipeline: break;
  }
  return "pipeline";
}

namespace {

// A ConfigError that already names its file, line and key.
class LocatedConfigError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

class LineContext {
public:
  LineContext(const std::string& source, std::size_t line, std::string_view key)
      : source_(source), line_(line), key_(key) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw LocatedConfigError(source_ + ":" + std::to_string(line_) + ": " + std::string(key_) + ": " + what);
  }

  std::vector<double> numbers(std::string_view value, std::size_t count) const {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < value.size()) {
      while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
      if (pos >= value.size()) break;
      std::size_t end = pos;
      while (end < value.size() && !std::isspace(static_cast<unsigned char>(value[end]))) ++end;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(value.data() + pos, value.data() + end, v);
      if (ec != std::errc() || ptr != value.data() + end) fail("invalid number '" + std::string(value.substr(pos, end - pos)) + "'");
      out.push_back(v);
      pos = end;
    }
    if (out.size() != count) fail("expected " + std::to_string(count) + " number(s)");
    return out;
  }

  double number(std::string_view value) const { return numbers(value, 1)[0]; }

  AngleRange range_deg(std::string_view value) const {
    const auto v = numbers(value, 2);
    if (v[0] > v[1]) fail("range min must not exceed max");
    if (v[0] < -180.0 || v[1] > 180.0) fail("range must lie within [-180, 180] deg");
    return {deg2rad(v[0]), deg2rad(v[1])};
  }

private:
  const std::string& source_;
  std::size_t line_;
  std::string_view key_;
};

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& source_name, const fs::path& base_dir) {
  RunConfig cfg;
  auto resolve = [&](std::string_view value) {
    fs::path p{std::string(value)};
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const LineContext ctx(source_name, line_no, key);

    try {
      if (key == "mode") cfg.mode = parse_mode(value);
      else if (key == "seed") {
        const double v = ctx.number(value);
        if (v < 0 || v != std::floor(v)) ctx.fail("seed must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(v);
      }
      else if (key == "joint.convention") {
        cfg.convention = EulerConvention::parse(value);
        if (!cfg.convention.is_tait_bryan()) ctx.fail("joint convention must use three distinct axes");
      }
      else if (key == "joint.alpha_deg") cfg.ranges[0] = ctx.range_deg(value);
      else if (key == "joint.beta_deg") cfg.ranges[1] = ctx.range_deg(value);
      else if (key == "joint.gamma_deg") cfg.ranges[2] = ctx.range_deg(value);
      else if (key == "joint.slack_deg") cfg.slack = deg2rad(ctx.number(value));
      else if (key == "window.T_w") cfg.window.window_length = ctx.number(value);
      else if (key == "window.T_est") cfg.window.estimation_interval = ctx.number(value);
      else if (key == "window.T_s") cfg.window.sample_interval = ctx.number(value);
      else if (key == "optimizer.grid_step_deg") cfg.optimizer.grid_step = deg2rad(ctx.number(value));
      else if (key == "optimizer.refine_tol_deg") cfg.optimizer.refine_tol = deg2rad(ctx.number(value));
      else if (key == "optimizer.stride") {
        const double v = ctx.number(value);
        if (v < 1 || v != std::floor(v)) ctx.fail("stride must be an integer >= 1");
        cfg.optimizer.stride = static_cast<std::size_t>(v);
      }
      else if (key == "fusion.gain") cfg.fusion.gain = ctx.number(value);
      else if (key == "fusion.accel_gate") cfg.fusion.accel_gate = ctx.number(value);
      else if (key == "sim.preset") cfg.preset = std::string(value);
      else if (key == "sim.duration_s") cfg.duration = ctx.number(value);
      else if (key == "drift.delta0_deg") {
        if (value == "random") cfg.random_delta0 = true;
        else {
          cfg.random_delta0 = false;
          cfg.drift.delta0 = deg2rad(ctx.number(value));
        }
      }
      else if (key == "drift.rate_deg_s") cfg.drift.rate = deg2rad(ctx.number(value));
      else if (key == "drift.modulation_deg") cfg.drift.modulation_amplitude = deg2rad(ctx.number(value));
      else if (key == "drift.modulation_period_s") cfg.drift.modulation_period = ctx.number(value);
      else if (key == "noise.gyro_sigma_rad_s") cfg.noise.gyro_sigma = ctx.number(value);
      else if (key == "noise.gyro_bias_deg_s") cfg.noise.gyro_bias_max = deg2rad(ctx.number(value));
      else if (key == "noise.accel_sigma") cfg.noise.accel_sigma = ctx.number(value);
      else if (key == "noise.orientation_sigma_deg") cfg.noise.orientation_sigma = deg2rad(ctx.number(value));
      else if (key == "pipeline.source") {
        if (value == "orientation") cfg.source = Source::orientation;
        else if (value == "imu") cfg.source = Source::imu;
        else ctx.fail("expected 'orientation' or 'imu'");
      }
      else if (key == "input.imu1") cfg.imu1 = resolve(value);
      else if (key == "input.imu2") cfg.imu2 = resolve(value);
      else if (key == "input.orientation1") cfg.orientation1 = resolve(value);
      else if (key == "input.orientation2") cfg.orientation2 = resolve(value);
      else if (key == "input.truth") cfg.truth = resolve(value);
      else if (key == "input.timeline") cfg.timeline = resolve(value);
      else if (key == "output.dir") cfg.out_dir = resolve(value);
      else if (key == "evaluate.start_s") cfg.evaluate_start = ctx.number(value);
      else ctx.fail("unknown key");
    } catch (const LocatedConfigError&) {
      throw;
    } catch (const Error& e) {
      ctx.fail(e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig cfg = parse_config(buffer.str(), path.string(), path.parent_path());
  return cfg;
}

void RunConfig::validate() const {
  try {
    window.validate();
    optimizer.validate();
    (void)joint_model();
    (void)margin();
    drift.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!(fusion.gain >= 0.0 && fusion.gain <= 1.0)) throw ConfigError("fusion.gain must lie in [0, 1]");

  auto require = [](const fs::path& p, const char* key) {
    if (p.empty()) throw ConfigError(std::string(key) + " is required in this mode");
    if (!fs::exists(p)) throw ConfigError(std::string(key) + ": file not found: " + p.string());
  };
  switch (mode) {
    case Mode::fuse:
      require(imu1, "input.imu1");
      require(imu2, "input.imu2");
      break;
    case Mode::estimate:
      if (source == Source::imu) {
        require(imu1, "input.imu1");
        require(imu2, "input.imu2");
      } else {
        require(orientation1, "input.orientation1");
        require(orientation2, "input.orientation2");
      }
      break;
    case Mode::evaluate:
      require(orientation1, "input.orientation1");
      require(orientation2, "input.orientation2");
      require(truth, "input.truth");
      require(timeline, "input.timeline");
      break;
    case Mode::simulate:
    case Mode::pipeline:
      break;
  }
}

}  // namespace romheading
