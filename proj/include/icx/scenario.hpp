#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "icx/events.hpp"
#include "icx/mechanism.hpp"
#include "icx/network.hpp"

namespace icx {

enum class PolicyKind {
  Compliant,
  /// Plays the exact-posterior best response to its realized information set
  /// (supported for the no-visibility mechanism only).
  BestResponse,
};

enum class ArrivalOrderKind { Identity, Given, SeededShuffle };

struct ArrivalOrder {
  ArrivalOrderKind kind = ArrivalOrderKind::Identity;
  std::vector<int> order;  // Given mode: permutation of agent ids
};

struct Scenario {
  PiecewiseDistribution dist_a;
  PiecewiseDistribution dist_b;
  VisibilityGraph graph;
  MechanismKind mechanism = MechanismKind::NoVisibility;
  double alpha = 0.0;
  double beta = 0.0;
  ReplicaMode replica_mode = ReplicaMode::RandomTag;
  std::optional<int> replica_count;  // default: |S| + 1
  ArrivalOrder arrival;
  std::map<int, PolicyKind> policies;  // agents default to Compliant

  double mu_b() const { return dist_b.mean(); }
  int n_agents() const { return graph.n_agents(); }
  int effective_replica_count() const;
  /// Throws ConfigError unless mean(dist_a) > mean(dist_b) is satisfiable;
  /// equality is allowed (degenerate partition).
  void validate() const;
};

struct ArrivalRecord {
  int agent = 0;
  Message message;
  Action action = Action::A;
  double reward = 0.0;
  Branch branch = Branch::First;
  int k = 0;
  int z = 0;
  bool experiment = true;
  bool knowledge = false;
};

struct RunTrace {
  double va = 0.0;
  double vb = 0.0;
  int replica_label = 0;
  std::vector<int> order;  // arrival position -> agent id
  std::vector<ArrivalRecord> records;
  std::optional<int> exploration_end;
  int rho_size = 0;
  int shadow_size = 0;
  int z_final = 0;
  int k_final = 0;
};

uint64_t child_seed(uint64_t master, uint64_t index);

/// Context shared by all runs of one scenario (partitions are built once).
class RunContext {
 public:
  explicit RunContext(const Scenario& scenario);

  RunTrace run_once(uint64_t seed) const;

  const Scenario& scenario() const { return *scenario_; }
  bool exploration_needed() const { return exploration_needed_; }
  const ExplorationPartition& partition() const;
  const ReplicatedPartition& replicated() const { return replicated_; }
  int replica_count() const { return replica_count_; }

 private:
  Planner make_planner(RandomStream& stream, int* label_out) const;
  Action decide(const Scenario& sc, int agent, int position, Message msg,
                const std::vector<ObservedAction>& observed) const;

  const Scenario* scenario_;
  bool exploration_needed_ = false;
  ExplorationPartition partition_;
  ReplicatedPartition replicated_;
  int replica_count_ = 1;
};

}  // namespace icx
