#pragma once

#include <optional>
#include <set>

#include "icx/network.hpp"
#include "icx/partition.hpp"

namespace icx {

enum class Action { A, B };
enum class MsgFlag { None, True, False_, Special };

struct Message {
  Action action = Action::A;
  MsgFlag flag = MsgFlag::None;
};

inline const char* to_string(Action a) { return a == Action::A ? "a" : "b"; }
inline const char* to_string(MsgFlag f) {
  switch (f) {
    case MsgFlag::None: return "NONE";
    case MsgFlag::True: return "TRUE";
    case MsgFlag::False_: return "FALSE";
    case MsgFlag::Special: return "SPECIAL";
  }
  return "?";
}

enum class MechanismKind {
  NoVisibility,
  MediumVisibility,
  HighVisibility,
  /// The two-agent scheme for the complete graph: recommend a everywhere when
  /// V_a >= ess sup(V_b); otherwise send the second agent b.
  ThresholdReveal,
};

MechanismKind mechanism_kind_from_string(const std::string& s);

/// Which branch of the mechanism produced a message; used for reporting.
enum class Branch {
  First,      // arrival 1
  AlwaysA,    // the P(V_a < mu_b) = 0 short circuit
  Test,       // selected exploration agent (in rho)
  Blocked,    // within two hops of rho (in the shadow set)
  HighDegree, // S arrival during the experiment phase
  Special,    // the (b, SPECIAL) message
  Exploit,    // post-exploration argmax message
};
const char* to_string(Branch b);

/// Online planner state machine. One instance drives a single run: call
/// step() once per arrival in order, then reveal() with the realized action
/// and reward of that arrival.
class Planner {
 public:
  static Planner no_visibility(const PiecewiseDistribution& va, double mu_b,
                               int n_agents,
                               const ExplorationPartition* prebuilt = nullptr);
  static Planner medium_visibility(const PiecewiseDistribution& va, double mu_b,
                                   const VisibilityGraph& graph,
                                   const ExplorationPartition* prebuilt = nullptr);
  static Planner high_visibility(const PiecewiseDistribution& va, double mu_b,
                                 const VisibilityGraph& graph, double alpha,
                                 const ReplicatedPartition& partition,
                                 int replica_label);
  static Planner threshold_reveal(const PiecewiseDistribution& va,
                                  const PiecewiseDistribution& vb,
                                  int n_agents);

  Message step(int agent);
  void reveal(int agent, Action action, double reward);

  MechanismKind kind() const { return kind_; }
  int k() const { return k_; }
  int z() const { return z_; }
  bool experiment() const { return experiment_; }
  bool knowledge() const { return knowledge_; }
  const std::set<int>& rho() const { return rho_; }
  const std::set<int>& shadow() const { return shadow_; }
  /// Arrival index (1-based) at which the exploit phase began, if it did.
  std::optional<int> exploration_end() const { return exploration_end_; }
  Branch last_branch() const { return last_branch_; }
  bool exploration_needed() const { return exploration_needed_; }
  const ExplorationPartition& partition() const { return partition_; }

 private:
  Planner() = default;

  Message no_visibility_step();
  Message medium_visibility_step(int agent);
  Message high_visibility_step(int agent);
  Message threshold_reveal_step();

  bool va_in(const IntervalSet& s) const;
  bool va_in_current_replica() const;
  Action best_revealed() const;
  void block_around(int agent, const std::set<int>* restrict_to);

  MechanismKind kind_ = MechanismKind::NoVisibility;
  const PiecewiseDistribution* va_ = nullptr;
  double mu_b_ = 0.0;
  double vb_ess_sup_ = 0.0;
  int n_agents_ = 0;
  bool exploration_needed_ = false;

  ExplorationPartition partition_;      // No/Medium visibility
  ReplicatedPartition replicated_;      // High visibility
  int replica_label_ = 0;               // random-tag draw for this run

  const VisibilityGraph* graph_ = nullptr;
  std::set<int> tier_low_;              // T (High visibility)

  int t_ = 0;  // arrivals processed
  Branch last_branch_ = Branch::First;
  int k_ = 0;
  int z_ = 0;
  bool experiment_ = true;
  bool knowledge_ = false;
  std::set<int> rho_;
  std::set<int> shadow_;
  std::set<int> blocked_;
  std::set<int> stepped_;
  std::optional<int> exploration_end_;

  std::optional<double> revealed_a_;
  std::optional<double> revealed_b_;
};

}  // namespace icx
