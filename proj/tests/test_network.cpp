#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "icx/errors.hpp"
#include "icx/network.hpp"

using namespace icx;

TEST_CASE("edges are symmetric and irreflexive") {
  VisibilityGraph g(4);
  g.add_edge(0, 2);
  CHECK(g.has_edge(2, 0));
  CHECK(g.degree(0) == 1);
  CHECK_THROWS_AS(g.add_edge(1, 1), InfeasibleParams);
  CHECK_THROWS_AS(g.add_edge(0, 7), UnknownAgent);
  CHECK_THROWS_AS(g.neighbors(-1), UnknownAgent);
}

TEST_CASE("neighbors before a prefix of the arrival order") {
  VisibilityGraph g(5);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(0, 4);
  const std::vector<int> order{3, 1, 0, 2, 4};
  CHECK(g.neighbors_before(0, order, 2) == std::set<int>{1});
  CHECK(g.neighbors_before(0, order, 5) == std::set<int>{1, 2, 4});
}

TEST_CASE("second neighborhood with and without a restriction") {
  // path 0-1-2-3-4 plus a pendant 5 on node 2
  VisibilityGraph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(2, 5);
  CHECK(g.second_neighborhood({2}, nullptr) ==
        std::set<int>{0, 1, 2, 3, 4, 5});
  const std::set<int> no_three{0, 1, 2, 4, 5};
  CHECK(g.second_neighborhood({2}, &no_three) == std::set<int>{0, 1, 2, 5});
}

TEST_CASE("degree classification threshold is floor(N^alpha)") {
  VisibilityGraph g(100);  // floor(100^0.3) = 3
  for (int i = 1; i <= 4; ++i) g.add_edge(0, i);  // degree 4 > 3: high
  for (int i = 2; i <= 3; ++i) g.add_edge(1, i);  // degree 3 = threshold: low
  const Classification c = classify(g, 0.3);
  CHECK(c.threshold == 3);
  CHECK(c.high_degree == std::set<int>{0});
  CHECK(c.low_degree.contains(1));

  const RegimeReport r = check_regime(g, {0.3, 0.2});
  CHECK(r.exponent_ok);
  CHECK(r.hub_budget == 2);
  CHECK(r.feasible);
}

TEST_CASE("bounded-degree generator respects the cap") {
  RandomStream stream(99);
  const VisibilityGraph g =
      generate(GraphKind::BoundedDegreeRandom, {200, 0.4, 0.0, 4.0}, stream);
  int max_degree = 0;
  long edges = 0;
  for (int i = 0; i < 200; ++i) {
    max_degree = std::max(max_degree, g.degree(i));
    edges += g.degree(i);
  }
  CHECK(max_degree <= 8);  // floor(200^0.4) = 8
  CHECK(edges / 2 > 100);  // the sampler actually places edges
}

TEST_CASE("two-tier generator separates hubs from the capped tier") {
  RandomStream stream(7);
  const VisibilityGraph g =
      generate(GraphKind::TwoTier, {500, 0.3, 0.2, 4.0}, stream);
  const Classification c = classify(g, 0.3);
  CHECK(static_cast<int>(c.high_degree.size()) == 3);  // floor(500^0.2)
  CHECK(check_regime(g, {0.3, 0.2}).feasible);
  for (int t : c.low_degree) CHECK(g.degree(t) <= c.threshold);
}

TEST_CASE("star and complete generators") {
  RandomStream stream(1);
  const VisibilityGraph star = generate(GraphKind::Star, {10, 0, 0, 0}, stream);
  CHECK(star.degree(0) == 9);
  CHECK(star.degree(5) == 1);
  const VisibilityGraph full =
      generate(GraphKind::Complete, {6, 0, 0, 0}, stream);
  for (int i = 0; i < 6; ++i) CHECK(full.degree(i) == 5);
}

TEST_CASE("edge list round trip with comments") {
  const std::string path = "test_edges.tmp";
  {
    std::ofstream out(path);
    out << "# comment\n0 1\n1 2\n\n3 0\n";
  }
  const VisibilityGraph g = VisibilityGraph::from_edge_list(path, 5);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(3, 0));
  CHECK(g.degree(4) == 0);
  CHECK_THROWS_AS(VisibilityGraph::from_edge_list("missing.tmp", 3),
                  ConfigError);
  std::remove(path.c_str());
}
