#include "gpdmm/io/problem_file.hpp"

#include <fstream>
#include <map>
#include <set>

#include "gpdmm/errors.hpp"
#include "gpdmm/random.hpp"

namespace gpdmm {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(ctx + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& ctx) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(ctx + ": missing key '" + key + "'");
  return *it;
}

Eigen::MatrixXd parse_matrix(const json& j, int rows, int cols, const std::string& ctx) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    throw ConfigError(ctx + ": expected a flat row-major array of " + std::to_string(rows * cols) +
                      " numbers");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const json& v = j[r * cols + c];
      if (!v.is_number()) throw ConfigError(ctx + ": matrix entries must be numbers");
      m(r, c) = v.get<double>();
    }
  return m;
}

}  // namespace

ConeSpec parse_cone(const json& j) {
  require_keys(j, {"cone", "shape"}, "cone");
  const std::string kind = require(j, "cone", "cone").get<std::string>();
  const json& shape = require(j, "shape", "cone");
  if (!shape.is_array() || shape.empty() || shape.size() > 2)
    throw ConfigError("cone: shape must have one or two entries");
  const int a = shape[0].get<int>();
  const int b = shape.size() == 2 ? shape[1].get<int>() : 1;
  if (kind == "zero") return ConeSpec::zero(a * b);
  if (kind == "orthant") return ConeSpec::orthant(a, b);
  if (kind == "psd") {
    if (shape.size() == 2 && a != b) throw ConfigError("cone: psd shape must be square");
    return ConeSpec::psd(a);
  }
  if (kind == "soc") {
    if (shape.size() != 1) throw ConfigError("cone: soc shape must be one-dimensional");
    return ConeSpec::soc(a);
  }
  throw ConfigError("cone: unknown variant '" + kind + "'");
}

Graph parse_graph(const json& j) {
  const std::string type = require(j, "type", "graph").get<std::string>();
  if (type == "geometric") {
    require_keys(j, {"type", "n", "radius", "seed"}, "graph");
    const int n = require(j, "n", "graph").get<int>();
    const double radius =
        j.contains("radius") ? j["radius"].get<double>() : geometric_radius(n);
    const std::uint64_t seed = require(j, "seed", "graph").get<std::uint64_t>();
    return random_geometric_graph(n, radius, seed);
  }
  if (type == "explicit") {
    require_keys(j, {"type", "n", "edges"}, "graph");
    const json& edges_json = require(j, "edges", "graph");
    if (!edges_json.is_array()) throw ConfigError("graph: edges must be an array");
    // Endpoints may be integers or string labels; labels are mapped to dense
    // ids in sorted order.
    std::map<std::string, int> labels;
    const bool labelled = !edges_json.empty() && edges_json[0].is_array() &&
                          !edges_json[0].empty() && edges_json[0][0].is_string();
    if (labelled) {
      std::set<std::string> names;
      for (const json& e : edges_json) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
          throw ConfigError("graph: labelled edges must be [\"a\",\"b\"] pairs");
        names.insert(e[0].get<std::string>());
        names.insert(e[1].get<std::string>());
      }
      int next = 0;
      for (const std::string& name : names) labels[name] = next++;
    }
    std::vector<std::pair<int, int>> edges;
    for (const json& e : edges_json) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("graph: edges must be pairs");
      if (labelled)
        edges.emplace_back(labels.at(e[0].get<std::string>()), labels.at(e[1].get<std::string>()));
      else
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    int n = labelled ? static_cast<int>(labels.size()) : 0;
    if (j.contains("n")) n = j["n"].get<int>();
    else if (!labelled)
      throw ConfigError("graph: explicit graphs with integer ids need 'n'");
    try {
      return Graph(n, std::move(edges));
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("graph: ") + err.what());
    }
  }
  throw ConfigError("graph: unknown type '" + type + "'");
}

namespace {

ConsensusSpec parse_consensus(const json& j, Graph graph) {
  require_keys(j, {"shape", "cone", "data"}, "consensus");
  const json& shape = require(j, "shape", "consensus");
  if (!shape.is_array() || shape.size() != 2) throw ConfigError("consensus: shape must be [rows, cols]");
  ConsensusSpec spec;
  spec.graph = std::move(graph);
  spec.rows = shape[0].get<int>();
  spec.cols = shape[1].get<int>();
  if (j.contains("cone") && !j["cone"].is_null()) spec.node_cone = parse_cone(j["cone"]);

  const json& data = require(j, "data", "consensus");
  const std::string dtype = require(data, "type", "consensus.data").get<std::string>();
  const int n = spec.graph.node_count();
  if (dtype == "gaussian") {
    require_keys(data, {"type", "seed"}, "consensus.data");
    auto rng = seeded_rng(require(data, "seed", "consensus.data").get<std::uint64_t>(), 1);
    const bool symmetrize =
        spec.node_cone && spec.node_cone->kind() == ConeSpec::Kind::Psd;
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd g = gaussian_matrix(spec.rows, spec.cols, rng);
      if (symmetrize) g = 0.5 * (g + g.transpose()).eval();
      spec.data.push_back(std::move(g));
    }
  } else if (dtype == "explicit") {
    require_keys(data, {"type", "matrices"}, "consensus.data");
    const json& ms = require(data, "matrices", "consensus.data");
    if (!ms.is_array() || static_cast<int>(ms.size()) != n)
      throw ConfigError("consensus.data: need one matrix per node");
    for (const json& m : ms) spec.data.push_back(parse_matrix(m, spec.rows, spec.cols, "consensus.data"));
  } else {
    throw ConfigError("consensus.data: unknown type '" + dtype + "'");
  }
  return spec;
}

MaxCutSpec parse_maxcut(const json& j, Graph graph) {
  require_keys(j, {"weights"}, "maxcut");
  const json& weights = require(j, "weights", "maxcut");
  const std::string wtype = require(weights, "type", "maxcut.weights").get<std::string>();
  if (wtype == "uniform-int") {
    require_keys(weights, {"type", "max", "seed"}, "maxcut.weights");
    const int max = weights.contains("max") ? weights["max"].get<int>() : 9;
    if (max < 0) throw ConfigError("maxcut.weights: max must be nonnegative");
    const std::uint64_t seed = require(weights, "seed", "maxcut.weights").get<std::uint64_t>();
    MaxCutSpec spec;
    spec.graph = std::move(graph);
    auto rng = seeded_rng(seed, 1);
    spec.weights.resize(spec.graph.edge_count());
    for (double& w : spec.weights)
      w = static_cast<double>(rng() % static_cast<std::uint64_t>(max + 1));
    return spec;
  }
  if (wtype == "explicit") {
    require_keys(weights, {"type", "entries"}, "maxcut.weights");
    const json& entries = require(weights, "entries", "maxcut.weights");
    MaxCutSpec spec;
    spec.graph = std::move(graph);
    spec.weights.assign(spec.graph.edge_count(), 0.0);
    const auto& edges = spec.graph.edges();
    for (const json& entry : entries) {
      if (!entry.is_array() || entry.size() != 3)
        throw ConfigError("maxcut.weights: entries must be [i, j, w]");
      int i = entry[0].get<int>(), jj = entry[1].get<int>();
      if (i > jj) std::swap(i, jj);
      const auto it = std::lower_bound(edges.begin(), edges.end(), std::pair<int, int>(i, jj));
      if (it == edges.end() || *it != std::pair<int, int>(i, jj))
        throw ConfigError("maxcut.weights: {" + std::to_string(i) + "," + std::to_string(jj) +
                          "} is not a graph edge");
      spec.weights[it - edges.begin()] = entry[2].get<double>();
    }
    return spec;
  }
  throw ConfigError("maxcut.weights: unknown type '" + wtype + "'");
}

}  // namespace

LoadedProblem load_problem_json(const json& j) {
  require_keys(j, {"version", "name", "type", "graph", "consensus", "maxcut", "run"}, "problem");
  if (require(j, "version", "problem").get<int>() != 1)
    throw ConfigError("problem: unsupported version");
  LoadedProblem lp;
  lp.type = require(j, "type", "problem").get<std::string>();
  lp.name = j.contains("name") ? j["name"].get<std::string>() : lp.type;
  if (j.contains("run")) lp.run_defaults = j["run"];

  if (lp.type == "consensus" && j.contains("maxcut"))
    throw ConfigError("problem: 'maxcut' section not allowed for type consensus");
  if (lp.type == "maxcut" && j.contains("consensus"))
    throw ConfigError("problem: 'consensus' section not allowed for type maxcut");

  Graph graph = parse_graph(require(j, "graph", "problem"));
  try {
    if (lp.type == "consensus") {
      lp.consensus = parse_consensus(require(j, "consensus", "problem"), std::move(graph));
      lp.problem = build_consensus(*lp.consensus);
    } else if (lp.type == "maxcut") {
      lp.maxcut = parse_maxcut(require(j, "maxcut", "problem"), std::move(graph));
      lp.problem = build_maxcut_sdp(*lp.maxcut);
    } else {
      throw ConfigError("problem: unknown type '" + lp.type + "'");
    }
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("problem: ") + err.what());
  }
  lp.problem.name = lp.name;
  return lp;
}

LoadedProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& err) {
    throw ConfigError("problem file " + path + ": " + err.what());
  }
  return load_problem_json(j);
}

LoadedProblem make_preset(const std::string& name, std::uint64_t seed) {
  LoadedProblem lp;
  lp.name = name + "-" + std::to_string(seed);
  if (name == "consensus-orthant") {
    lp.type = "consensus";
    lp.consensus = consensus_orthant_spec(25, 5, 10, seed);
    lp.problem = build_consensus(*lp.consensus);
    lp.run_defaults = {{"iters", 5000}};
  } else if (name == "consensus-psd") {
    lp.type = "consensus";
    lp.consensus = consensus_psd_spec(25, 10, seed);
    lp.problem = build_consensus(*lp.consensus);
    lp.run_defaults = {{"iters", 5000}};
  } else if (name == "maxcut") {
    lp.type = "maxcut";
    lp.maxcut = maxcut_preset(25, seed);
    lp.problem = build_maxcut_sdp(*lp.maxcut);
    lp.run_defaults = {{"alpha", 0.5}, {"iters", 6000}, {"tol", 1e-10}};
  } else {
    throw ConfigError("unknown preset '" + name +
                      "' (available: consensus-orthant, consensus-psd, maxcut)");
  }
  lp.problem.name = lp.name;
  return lp;
}

}  // namespace gpdmm
