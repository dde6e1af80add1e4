#include "icx/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "icx/errors.hpp"

namespace icx {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key))
      throw ConfigError("unknown field '" + key + "' in " + where);
}

PiecewiseDistribution parse_dist(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty())
    throw ConfigError(name + " must be a non-empty list of [lo, hi, weight]");
  std::vector<UniformPiece> pieces;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 3)
      throw ConfigError(name + ": each piece must be [lo, hi, weight]");
    pieces.push_back({item[0].get<double>(), item[1].get<double>(),
                      item[2].get<double>()});
  }
  try {
    return PiecewiseDistribution(std::move(pieces));
  } catch (const std::exception& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

VisibilityGraph parse_graph(const json& j, int n_agents, uint64_t seed,
                            double alpha, double beta) {
  if (!j.is_object()) throw ConfigError("graph must be a section");
  if (j.contains("edge_list")) {
    check_keys(j, "graph", {"edge_list"});
    return VisibilityGraph::from_edge_list(j["edge_list"].get<std::string>(),
                                           n_agents);
  }
  if (j.contains("edges")) {
    check_keys(j, "graph", {"edges"});
    VisibilityGraph g(n_agents);
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2)
        throw ConfigError("graph.edges entries must be [i, j]");
      g.add_edge(e[0].get<int>(), e[1].get<int>());
    }
    return g;
  }
  check_keys(j, "graph", {"kind", "avg_degree"});
  if (!j.contains("kind"))
    throw ConfigError("graph needs 'kind', 'edges' or 'edge_list'");
  GraphParams params;
  params.n_agents = n_agents;
  params.alpha = alpha;
  params.beta = beta;
  params.avg_degree = j.value("avg_degree", 4.0);
  // Graph randomness is drawn from a fixed fan-out slot of the master seed so
  // the graph is one sample shared by every replication.
  RandomStream stream(child_seed(seed, 0xC0FFEE));
  return generate(graph_kind_from_string(j["kind"].get<std::string>()), params,
                  stream);
}

LoadedConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a section");
  check_keys(j, "config root",
             {"dist_a", "dist_b", "mechanism", "n_agents", "graph", "alpha",
              "beta", "replica_mode", "replica_count", "arrival", "policies",
              "replications", "seed", "audit", "sweep"});
  for (const char* field : {"dist_a", "dist_b", "mechanism", "n_agents", "graph"})
    if (!j.contains(field))
      throw ConfigError(std::string("missing required field '") + field + "'");

  LoadedConfig cfg;
  cfg.seed = j.value("seed", 1ULL);
  cfg.replications = j.value("replications", 100L);
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");

  Scenario& sc = cfg.scenario;
  sc.dist_a = parse_dist(j["dist_a"], "dist_a");
  sc.dist_b = parse_dist(j["dist_b"], "dist_b");
  try {
    sc.mechanism = mechanism_kind_from_string(j["mechanism"].get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  sc.alpha = j.value("alpha", 0.3);
  sc.beta = j.value("beta", 0.2);
  const int n_agents = j["n_agents"].get<int>();
  if (n_agents < 1) throw ConfigError("n_agents must be >= 1");
  sc.graph = parse_graph(j["graph"], n_agents, cfg.seed, sc.alpha, sc.beta);

  if (j.contains("replica_mode")) {
    const std::string mode = j["replica_mode"].get<std::string>();
    if (mode == "random-tag") {
      sc.replica_mode = ReplicaMode::RandomTag;
    } else if (mode == "comb") {
      sc.replica_mode = ReplicaMode::Comb;
    } else {
      throw ConfigError("replica_mode must be 'random-tag' or 'comb'");
    }
  }
  if (j.contains("replica_count")) sc.replica_count = j["replica_count"].get<int>();

  if (j.contains("arrival")) {
    const json& a = j["arrival"];
    check_keys(a, "arrival", {"kind", "order"});
    const std::string kind = a.value("kind", "identity");
    if (kind == "identity") {
      sc.arrival.kind = ArrivalOrderKind::Identity;
    } else if (kind == "seeded-shuffle") {
      sc.arrival.kind = ArrivalOrderKind::SeededShuffle;
    } else if (kind == "given") {
      sc.arrival.kind = ArrivalOrderKind::Given;
      if (!a.contains("order")) throw ConfigError("arrival kind 'given' needs 'order'");
      sc.arrival.order = a["order"].get<std::vector<int>>();
    } else {
      throw ConfigError("arrival.kind must be identity, given or seeded-shuffle");
    }
  }

  if (j.contains("policies")) {
    for (const auto& [key, value] : j["policies"].items()) {
      int agent = 0;
      try {
        agent = std::stoi(key);
      } catch (const std::exception&) {
        throw ConfigError("policies keys must be agent ids, got '" + key + "'");
      }
      const std::string policy = value.get<std::string>();
      if (policy == "compliant") {
        sc.policies[agent] = PolicyKind::Compliant;
      } else if (policy == "best-response") {
        sc.policies[agent] = PolicyKind::BestResponse;
      } else {
        throw ConfigError("policy must be 'compliant' or 'best-response'");
      }
    }
  }

  if (j.contains("audit")) {
    const json& a = j["audit"];
    check_keys(a, "audit", {"agents", "n_outer", "min_matched"});
    if (a.contains("agents")) cfg.audit.agents = a["agents"].get<std::vector<int>>();
    cfg.audit.n_outer = a.value("n_outer", 20000L);
    cfg.audit.min_matched = a.value("min_matched", 200L);
    if (cfg.audit.n_outer < 1) throw ConfigError("audit.n_outer must be >= 1");
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, "sweep",
               {"n_grid", "alpha_grid", "beta_grid", "graph_kind",
                "avg_degree", "replications"});
    cfg.has_sweep = true;
    cfg.sweep.n_grid = s.value("n_grid", std::vector<int>{100, 1000, 10000});
    cfg.sweep.alpha_grid = s.value("alpha_grid", std::vector<double>{0.3});
    cfg.sweep.beta_grid = s.value("beta_grid", std::vector<double>{0.2});
    cfg.sweep.graph_kind = s.value("graph_kind", std::string("two-tier"));
    cfg.sweep.avg_degree = s.value("avg_degree", 4.0);
    cfg.sweep.replications = s.value("replications", 20L);
    if (cfg.sweep.n_grid.empty()) throw ConfigError("sweep.n_grid is empty");
  }

  try {
    sc.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace

LoadedConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

}  // namespace icx
