#include "icx/mechanism.hpp"

#include "icx/errors.hpp"

namespace icx {

MechanismKind mechanism_kind_from_string(const std::string& s) {
  if (s == "no-visibility") return MechanismKind::NoVisibility;
  if (s == "medium-visibility") return MechanismKind::MediumVisibility;
  if (s == "high-visibility") return MechanismKind::HighVisibility;
  if (s == "threshold-reveal") return MechanismKind::ThresholdReveal;
  throw ConfigError("unknown mechanism kind: " + s);
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::First: return "first";
    case Branch::AlwaysA: return "always-a";
    case Branch::Test: return "test";
    case Branch::Blocked: return "blocked";
    case Branch::HighDegree: return "high-degree";
    case Branch::Special: return "special";
    case Branch::Exploit: return "exploit";
  }
  return "?";
}

namespace {

bool needs_exploration(const PiecewiseDistribution& va, double mu_b) {
  return va.prob(IntervalSet::single(va.support_lo(), mu_b)) > 0.0;
}

}  // namespace

Planner Planner::no_visibility(const PiecewiseDistribution& va, double mu_b,
                               int n_agents,
                               const ExplorationPartition* prebuilt) {
  Planner p;
  p.kind_ = MechanismKind::NoVisibility;
  p.va_ = &va;
  p.mu_b_ = mu_b;
  p.n_agents_ = n_agents;
  p.exploration_needed_ = needs_exploration(va, mu_b);
  if (p.exploration_needed_)
    p.partition_ = prebuilt ? *prebuilt : build_partition(va, mu_b);
  return p;
}

Planner Planner::medium_visibility(const PiecewiseDistribution& va,
                                   double mu_b, const VisibilityGraph& graph,
                                   const ExplorationPartition* prebuilt) {
  Planner p;
  p.kind_ = MechanismKind::MediumVisibility;
  p.va_ = &va;
  p.mu_b_ = mu_b;
  p.graph_ = &graph;
  p.n_agents_ = graph.n_agents();
  p.exploration_needed_ = needs_exploration(va, mu_b);
  if (p.exploration_needed_)
    p.partition_ = prebuilt ? *prebuilt : build_partition(va, mu_b);
  return p;
}

Planner Planner::high_visibility(const PiecewiseDistribution& va, double mu_b,
                                 const VisibilityGraph& graph, double alpha,
                                 const ReplicatedPartition& partition,
                                 int replica_label) {
  Planner p;
  p.kind_ = MechanismKind::HighVisibility;
  p.va_ = &va;
  p.mu_b_ = mu_b;
  p.graph_ = &graph;
  p.n_agents_ = graph.n_agents();
  p.exploration_needed_ = needs_exploration(va, mu_b);
  p.replicated_ = partition;
  p.replica_label_ = replica_label;
  if (replica_label < 0 || replica_label >= partition.replica_count)
    throw InfeasibleParams("replica label out of range");
  p.tier_low_ = classify(graph, alpha).low_degree;
  return p;
}

Planner Planner::threshold_reveal(const PiecewiseDistribution& va,
                                  const PiecewiseDistribution& vb,
                                  int n_agents) {
  Planner p;
  p.kind_ = MechanismKind::ThresholdReveal;
  p.va_ = &va;
  p.vb_ess_sup_ = vb.ess_sup();
  p.n_agents_ = n_agents;
  p.exploration_needed_ = true;
  return p;
}

bool Planner::va_in(const IntervalSet& s) const {
  return revealed_a_ && s.contains(*revealed_a_);
}

bool Planner::va_in_current_replica() const {
  if (!revealed_a_) return false;
  if (replicated_.mode == ReplicaMode::Comb)
    return replicated_.d0_replicas.at(z_).contains(*revealed_a_);
  return replicated_.d0.contains(*revealed_a_) && replica_label_ == z_;
}

Action Planner::best_revealed() const {
  // Ties have probability zero; prefer the a-priori better action on one.
  if (revealed_a_ && revealed_b_)
    return *revealed_b_ > *revealed_a_ ? Action::B : Action::A;
  return Action::A;
}

void Planner::block_around(int agent, const std::set<int>* restrict_to) {
  std::set<int> added = graph_->second_neighborhood({agent}, restrict_to);
  for (int n : added)
    if (!rho_.contains(n) && n != agent) blocked_.insert(n);
}

Message Planner::step(int agent) {
  if (t_ >= n_agents_) throw OutOfOrderArrival("all agents already arrived");
  if (!stepped_.insert(agent).second)
    throw OutOfOrderArrival("agent stepped twice: " + std::to_string(agent));
  ++t_;
  switch (kind_) {
    case MechanismKind::NoVisibility: return no_visibility_step();
    case MechanismKind::MediumVisibility: return medium_visibility_step(agent);
    case MechanismKind::HighVisibility: return high_visibility_step(agent);
    case MechanismKind::ThresholdReveal: return threshold_reveal_step();
  }
  throw OutOfOrderArrival("unreachable");
}

void Planner::reveal(int agent, Action action, double reward) {
  if (!stepped_.contains(agent))
    throw OutOfOrderArrival("reveal before step for agent " + std::to_string(agent));
  if (action == Action::A) {
    revealed_a_ = reward;
  } else {
    revealed_b_ = reward;
  }
}

Message Planner::no_visibility_step() {
  if (!exploration_needed_ || t_ == 1) {
    last_branch_ = exploration_needed_ ? Branch::First : Branch::AlwaysA;
    return {Action::A, MsgFlag::None};
  }
  if (t_ <= partition_.k_count + 1) {
    last_branch_ = Branch::Test;
    const bool in_set =
        va_in(partition_.d0) || va_in(partition_.cell(t_ - 1));
    return {in_set ? Action::B : Action::A, MsgFlag::None};
  }
  if (!exploration_end_) exploration_end_ = t_;
  last_branch_ = Branch::Exploit;
  return {best_revealed(), MsgFlag::None};
}

Message Planner::medium_visibility_step(int agent) {
  if (!exploration_needed_ || t_ == 1) {
    last_branch_ = exploration_needed_ ? Branch::First : Branch::AlwaysA;
    return {Action::A, MsgFlag::None};
  }
  if (k_ < partition_.k_count) {
    if (blocked_.contains(agent)) {
      shadow_.insert(agent);
      last_branch_ = Branch::Blocked;
      return {Action::A, MsgFlag::None};
    }
    rho_.insert(agent);
    ++k_;
    block_around(agent, nullptr);
    last_branch_ = Branch::Test;
    const bool in_set = va_in(partition_.d0) || va_in(partition_.cell(k_));
    return {in_set ? Action::B : Action::A, MsgFlag::None};
  }
  if (!exploration_end_) exploration_end_ = t_;
  last_branch_ = Branch::Exploit;
  return {best_revealed(), MsgFlag::None};
}

Message Planner::high_visibility_step(int agent) {
  if (!exploration_needed_) {
    last_branch_ = Branch::AlwaysA;
    return {Action::A, MsgFlag::True};
  }
  if (t_ == 1) {
    last_branch_ = Branch::First;
    return {Action::A, MsgFlag::True};
  }
  if (!experiment_) {
    last_branch_ = Branch::Exploit;
    return {best_revealed(), MsgFlag::False_};
  }

  if (k_ < replicated_.k_prime) {
    if (!tier_low_.contains(agent)) {  // agent in S
      ++z_;
      if (z_ >= replicated_.replica_count)
        throw ReplicaExhausted("more high-degree arrivals than replicas");
      last_branch_ = Branch::HighDegree;
      if (knowledge_) {
        experiment_ = false;
        exploration_end_ = t_;
        last_branch_ = Branch::Exploit;
        return {best_revealed(), MsgFlag::False_};
      }
      return {Action::A, MsgFlag::True};
    }
    // agent in T
    if (!blocked_.contains(agent)) {
      rho_.insert(agent);
      ++k_;
      block_around(agent, &tier_low_);
      last_branch_ = Branch::Test;
      if (va_in_current_replica() || va_in(replicated_.cell(k_))) {
        knowledge_ = true;
        return {Action::B, MsgFlag::True};
      }
      return {Action::A, MsgFlag::True};
    }
    shadow_.insert(agent);
    last_branch_ = Branch::Blocked;
    return {Action::A, MsgFlag::True};
  }

  // k == K'
  if (knowledge_) {
    experiment_ = false;
    exploration_end_ = t_;
    last_branch_ = Branch::Exploit;
    return {best_revealed(), MsgFlag::False_};
  }
  // special case: V_a lies in one of the replicas never used for testing
  knowledge_ = true;
  last_branch_ = Branch::Special;
  return {Action::B, MsgFlag::Special};
}

Message Planner::threshold_reveal_step() {
  if (t_ == 1) {
    last_branch_ = Branch::First;
    return {Action::A, MsgFlag::None};
  }
  if (!revealed_a_ || *revealed_a_ >= vb_ess_sup_) {
    last_branch_ = Branch::AlwaysA;
    return {Action::A, MsgFlag::None};
  }
  if (t_ == 2) {
    last_branch_ = Branch::Test;
    return {Action::B, MsgFlag::None};
  }
  last_branch_ = Branch::Exploit;
  return {best_revealed(), MsgFlag::None};
}

}  // namespace icx
