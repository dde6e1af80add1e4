#include "icx/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "icx/errors.hpp"

namespace icx {

namespace {

int power_floor(int n, double exponent) {
  return static_cast<int>(std::floor(std::pow(n, exponent) + 1e-9));
}

}  // namespace

VisibilityGraph::VisibilityGraph(int n_agents) : n_(n_agents), adj_(n_agents) {
  if (n_agents < 1) throw InfeasibleParams("graph needs at least one agent");
}

void VisibilityGraph::add_edge(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw UnknownAgent("edge endpoint out of range");
  if (i == j) throw InfeasibleParams("self-loops are not allowed");
  adj_[i].insert(j);
  adj_[j].insert(i);
}

bool VisibilityGraph::has_edge(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) return false;
  return adj_[i].contains(j);
}

int VisibilityGraph::degree(int n) const {
  return static_cast<int>(neighbors(n).size());
}

const std::set<int>& VisibilityGraph::neighbors(int n) const {
  if (n < 0 || n >= n_) throw UnknownAgent("agent id out of range");
  return adj_[n];
}

std::set<int> VisibilityGraph::neighbors_before(int n,
                                                const std::vector<int>& order,
                                                int prefix) const {
  std::set<int> arrived(order.begin(), order.begin() + prefix);
  std::set<int> out;
  for (int f : neighbors(n))
    if (arrived.contains(f)) out.insert(f);
  return out;
}

std::set<int> VisibilityGraph::second_neighborhood(
    const std::set<int>& seed, const std::set<int>* restrict_to) const {
  auto restricted = [&](int n, std::set<int>& into) {
    for (int f : neighbors(n))
      if (!restrict_to || restrict_to->contains(f)) into.insert(f);
  };
  std::set<int> first;
  for (int n : seed) restricted(n, first);
  std::set<int> out = first;
  for (int n : first) restricted(n, out);
  return out;
}

VisibilityGraph VisibilityGraph::from_edge_list(const std::string& path,
                                                int n_agents) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list: " + path);
  VisibilityGraph g(n_agents);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream is(line);
    int i, j;
    if (line.empty() || line[0] == '#') continue;
    if (!(is >> i >> j))
      throw ConfigError("bad edge at " + path + ":" + std::to_string(lineno));
    g.add_edge(i, j);
  }
  return g;
}

Classification classify(const VisibilityGraph& g, double alpha) {
  Classification c;
  c.threshold = power_floor(g.n_agents(), alpha);
  for (int n = 0; n < g.n_agents(); ++n) {
    if (g.degree(n) <= c.threshold) {
      c.low_degree.insert(n);
    } else {
      c.high_degree.insert(n);
    }
  }
  return c;
}

RegimeReport check_regime(const VisibilityGraph& g, const RegimeSpec& spec) {
  RegimeReport r;
  const Classification c = classify(g, spec.alpha);
  r.high_degree_count = static_cast<int>(c.high_degree.size());
  r.degree_threshold = c.threshold;
  r.hub_budget = power_floor(g.n_agents(), spec.beta);
  r.exponent_ok = 2.0 * spec.alpha + spec.beta < 1.0;
  r.feasible = r.exponent_ok && r.high_degree_count <= r.hub_budget;
  return r;
}

namespace {

VisibilityGraph generate_bounded_random(const GraphParams& p,
                                        RandomStream& stream) {
  const int n = p.n_agents;
  const int cap = power_floor(n, p.alpha);
  if (cap < 1) throw InfeasibleParams("degree cap below 1");
  VisibilityGraph g(n);
  const long target =
      std::min<long>(static_cast<long>(n) * cap / 2,
                     static_cast<long>(n * p.avg_degree / 2.0));
  std::uniform_int_distribution<int> pick(0, n - 1);
  long added = 0;
  for (long attempt = 0; attempt < 40 * target && added < target; ++attempt) {
    const int i = pick(stream);
    const int j = pick(stream);
    if (i == j || g.has_edge(i, j)) continue;
    if (g.degree(i) >= cap || g.degree(j) >= cap) continue;
    g.add_edge(i, j);
    ++added;
  }
  return g;
}

VisibilityGraph generate_two_tier(const GraphParams& p, RandomStream& stream) {
  const int n = p.n_agents;
  const int cap = power_floor(n, p.alpha);
  const int hubs = power_floor(n, p.beta);
  if (cap < 1) throw InfeasibleParams("degree cap below 1");
  if (hubs >= n) throw InfeasibleParams("hub count must be below N");
  VisibilityGraph g(n);

  // Hubs are a random id sample so they land anywhere in the arrival order.
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), stream);
  std::set<int> hub_set(ids.begin(), ids.begin() + hubs);

  std::uniform_int_distribution<int> pick(0, n - 1);
  const int hub_target = std::min(n - 1, std::max(cap + 1, 2 * cap));
  for (int h : hub_set) {
    int guard = 0;
    while (g.degree(h) < hub_target && guard++ < 200 * n) {
      const int j = pick(stream);
      if (j == h || g.has_edge(h, j)) continue;
      if (!hub_set.contains(j) && g.degree(j) >= cap - 1) continue;
      g.add_edge(h, j);
    }
    if (g.degree(h) <= cap)
      throw InfeasibleParams("could not reach hub degree target");
  }

  // Sparse peer edges among the low-degree tier.
  const long target = static_cast<long>(n * p.avg_degree / 2.0);
  long added = 0;
  for (long attempt = 0; attempt < 40 * target && added < target; ++attempt) {
    const int i = pick(stream);
    const int j = pick(stream);
    if (i == j || g.has_edge(i, j)) continue;
    if (hub_set.contains(i) || hub_set.contains(j)) continue;
    if (g.degree(i) >= cap || g.degree(j) >= cap) continue;
    g.add_edge(i, j);
    ++added;
  }
  return g;
}

}  // namespace

VisibilityGraph generate(GraphKind kind, const GraphParams& params,
                         RandomStream& stream) {
  const int n = params.n_agents;
  switch (kind) {
    case GraphKind::Empty:
      return VisibilityGraph(n);
    case GraphKind::Complete: {
      VisibilityGraph g(n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
      return g;
    }
    case GraphKind::Star: {
      VisibilityGraph g(n);
      for (int i = 1; i < n; ++i) g.add_edge(0, i);
      return g;
    }
    case GraphKind::BoundedDegreeRandom:
      return generate_bounded_random(params, stream);
    case GraphKind::TwoTier:
      return generate_two_tier(params, stream);
  }
  throw InfeasibleParams("unknown graph kind");
}

GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "empty") return GraphKind::Empty;
  if (s == "complete") return GraphKind::Complete;
  if (s == "star") return GraphKind::Star;
  if (s == "bounded-degree-random") return GraphKind::BoundedDegreeRandom;
  if (s == "two-tier") return GraphKind::TwoTier;
  throw ConfigError("unknown graph kind: " + s);
}

}  // namespace icx
