#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "gpdmm/apps/consensus.hpp"
#include "gpdmm/apps/maxcut.hpp"
#include "gpdmm/solver.hpp"

namespace gpdmm {

struct LoadedProblem {
  Problem problem;
  std::string type;  // "consensus" | "maxcut"
  std::optional<ConsensusSpec> consensus;
  std::optional<MaxCutSpec> maxcut;
  nlohmann::json run_defaults = nlohmann::json::object();
  std::string name;
};

// Problem files are versioned JSON with strict keys; matrices are stored
// dense, row-major. Throws ConfigError on malformed input.
LoadedProblem load_problem_file(const std::string& path);
LoadedProblem load_problem_json(const nlohmann::json& j);

// Built-in generators mirroring the standard experiments:
//   consensus-orthant  25-node geometric graph, 5x10 Gaussian data
//   consensus-psd      25-node geometric graph, symmetric 10x10 data
//   maxcut             25-node geometric graph, weights uniform on {0..9}
LoadedProblem make_preset(const std::string& name, std::uint64_t seed);

ConeSpec parse_cone(const nlohmann::json& j);
Graph parse_graph(const nlohmann::json& j);

}  // namespace gpdmm
