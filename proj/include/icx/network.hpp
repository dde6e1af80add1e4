#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "icx/distribution.hpp"

namespace icx {

/// Undirected, irreflexive visibility graph: an edge means the two agents see
/// each other's chosen actions.
class VisibilityGraph {
 public:
  VisibilityGraph() : n_(0) {}
  explicit VisibilityGraph(int n_agents);

  int n_agents() const { return n_; }
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;
  int degree(int n) const;

  const std::set<int>& neighbors(int n) const;
  /// B^t(n): friends among the first `prefix` arrivals of `order`.
  std::set<int> neighbors_before(int n, const std::vector<int>& order,
                                 int prefix) const;

  /// B_X(seed) u B_X(B_X(seed)) where every neighborhood is intersected with
  /// `restrict` (pass nullptr for no restriction). Seed members are not
  /// implicitly included.
  std::set<int> second_neighborhood(const std::set<int>& seed,
                                    const std::set<int>* restrict_to) const;

  static VisibilityGraph from_edge_list(const std::string& path, int n_agents);

 private:
  int n_;
  std::vector<std::set<int>> adj_;
};

struct RegimeSpec {
  double alpha = 0.0;
  double beta = 0.0;
};

struct Classification {
  std::set<int> low_degree;   // T: degree <= floor(N^alpha)
  std::set<int> high_degree;  // S: the rest
  int threshold = 0;
};

Classification classify(const VisibilityGraph& g, double alpha);

struct RegimeReport {
  bool feasible = false;
  int high_degree_count = 0;  // |S|
  int degree_threshold = 0;   // floor(N^alpha)
  int hub_budget = 0;         // floor(N^beta)
  bool exponent_ok = false;   // 2*alpha + beta < 1
};

RegimeReport check_regime(const VisibilityGraph& g, const RegimeSpec& spec);

enum class GraphKind { Empty, Complete, Star, BoundedDegreeRandom, TwoTier };

struct GraphParams {
  int n_agents = 0;
  double alpha = 0.0;           // degree cap exponent where applicable
  double beta = 0.0;            // hub-count exponent (two-tier)
  double avg_degree = 4.0;      // target average degree for random kinds
};

VisibilityGraph generate(GraphKind kind, const GraphParams& params,
                         RandomStream& stream);

GraphKind graph_kind_from_string(const std::string& s);

}  // namespace icx
