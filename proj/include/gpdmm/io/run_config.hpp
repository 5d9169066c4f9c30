#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace gpdmm {

// One experiment run. Defaults < problem-file "run" section < CLI/env flags.
struct RunConfig {
  std::string problem_path;
  std::string preset;
  std::uint64_t preset_seed = 1;

  double c = 1.0;
  double alpha = 1.0;
  int iters = 1000;
  std::optional<double> tol;
  std::string scheduler = "sync";  // "sync" | "stochastic"
  double p = 0.5;
  std::uint64_t seed = 0;
  int threads = 1;
  int metrics_every = 1;
  // Wallclock column in the metrics CSV is opt-in: with it off, identical
  // configs reproduce byte-identical files.
  bool timing = false;
  std::optional<std::uint64_t> randomize_z;

  std::string output;
  std::string solution;
  std::string snapshot;
  std::string resume;

  std::string rounding = "both";  // maxcut extraction: rank1 | randomized | both | none
  int samples = 500;
  std::uint64_t rounding_seed = 0;
};

// Layered construction with strict keys and range validation; throws
// ConfigError on unknown keys or out-of-range values.
RunConfig make_run_config(const nlohmann::json& file_run, const nlohmann::json& overrides);
void validate_run_config(const RunConfig& cfg);

}  // namespace gpdmm
