// Command-line front end: simulate, fuse, estimate, evaluate, or run the whole
// pipeline from a key = value config file.
//
// Exit codes: 0 success, 1 usage, 2 configuration error, 3 bad input data,
// 4 any other runtime failure.

#include <cstdlib>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "romheading/config.hpp"
#include "romheading/error.hpp"
#include "romheading/pipeline.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kData = 3, kRuntime = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetometer-free relative heading estimation from joint range-of-motion constraints"};
  std::string config_path;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool verbose = false;
  app.add_option("-c,--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("-m,--mode", mode, "simulate | fuse | estimate | evaluate | pipeline (overrides the config)");
  app.add_option("-s,--seed", seed, "RNG seed (overrides the config)");
  app.add_option("-o,--out", out_dir, "output directory (overrides the config)");
  app.add_flag("-v,--verbose", verbose, "debug logging");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  if (const char* level = std::getenv("ROMHEADING_LOG")) spdlog::set_level(spdlog::level::from_str(level));

  try {
    romheading::RunConfig config = config_path.empty() ? romheading::RunConfig{} : romheading::load_config(config_path);
    if (!mode.empty()) config.mode = romheading::parse_mode(mode);
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    romheading::execute(config);
    spdlog::info("wrote {} output to {}", romheading::to_string(config.mode), config.out_dir.string());
    return kOk;
  } catch (const romheading::ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kConfig;
  } catch (const romheading::ParseError& e) {
    spdlog::error("{}", e.what());
    return kData;
  } catch (const romheading::InvalidInput& e) {
    spdlog::error("invalid input: {}", e.what());
    return kData;
  } catch (const romheading::InsufficientData& e) {
    spdlog::error("insufficient data: {}", e.what());
    return kData;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  }
}
