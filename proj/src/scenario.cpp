#include "icx/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "icx/errors.hpp"

namespace icx {

uint64_t child_seed(uint64_t master, uint64_t index) {
  // splitmix64 over the fanned-out index
  uint64_t x = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

int Scenario::effective_replica_count() const {
  if (replica_count) return *replica_count;
  const Classification c = classify(graph, alpha);
  return static_cast<int>(c.high_degree.size()) + 1;
}

void Scenario::validate() const {
  if (dist_a.mean() < dist_b.mean())
    throw ConfigError(
        "mean(dist_a) must be >= mean(dist_b); relabel the actions so that a "
        "is the a-priori better one");
  if (arrival.kind == ArrivalOrderKind::Given) {
    std::vector<int> sorted = arrival.order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n_agents(); ++i)
      if (i >= static_cast<int>(sorted.size()) || sorted[i] != i)
        throw ConfigError("arrival order must be a permutation of 0..N-1");
  }
  for (const auto& [agent, policy] : policies) {
    if (agent < 0 || agent >= n_agents())
      throw ConfigError("policy for unknown agent " + std::to_string(agent));
    if (policy == PolicyKind::BestResponse &&
        mechanism != MechanismKind::NoVisibility)
      throw ConfigError(
          "best-response policies need the exact posterior path, which only "
          "the no-visibility mechanism provides");
  }
  if (replica_count && *replica_count < 1)
    throw ConfigError("replica_count must be >= 1");
}

RunContext::RunContext(const Scenario& scenario) : scenario_(&scenario) {
  scenario.validate();
  const double mu_b = scenario.mu_b();
  const PiecewiseDistribution& va = scenario.dist_a;
  exploration_needed_ =
      va.prob(IntervalSet::single(va.support_lo(), mu_b)) > 0.0;
  if (!exploration_needed_) return;
  switch (scenario.mechanism) {
    case MechanismKind::NoVisibility:
    case MechanismKind::MediumVisibility:
      partition_ = build_partition(va, mu_b);
      break;
    case MechanismKind::HighVisibility:
      replica_count_ = scenario.effective_replica_count();
      replicated_ = build_replicated_partition(va, mu_b, replica_count_,
                                               scenario.replica_mode);
      break;
    case MechanismKind::ThresholdReveal:
      break;
  }
}

const ExplorationPartition& RunContext::partition() const {
  if (!exploration_needed_)
    throw NoExplorationNeeded("scenario has P(V_a < mu_b) = 0");
  return partition_;
}

Planner RunContext::make_planner(RandomStream& stream, int* label_out) const {
  const Scenario& sc = *scenario_;
  switch (sc.mechanism) {
    case MechanismKind::NoVisibility:
      return Planner::no_visibility(sc.dist_a, sc.mu_b(), sc.n_agents(),
                                    exploration_needed_ ? &partition_ : nullptr);
    case MechanismKind::MediumVisibility:
      return Planner::medium_visibility(sc.dist_a, sc.mu_b(), sc.graph,
                                        exploration_needed_ ? &partition_ : nullptr);
    case MechanismKind::HighVisibility: {
      int label = 0;
      if (exploration_needed_ && sc.replica_mode == ReplicaMode::RandomTag) {
        std::uniform_int_distribution<int> pick(0, replica_count_ - 1);
        label = pick(stream);
      }
      if (label_out) *label_out = label;
      return Planner::high_visibility(sc.dist_a, sc.mu_b(), sc.graph, sc.alpha,
                                      replicated_, label);
    }
    case MechanismKind::ThresholdReveal:
      return Planner::threshold_reveal(sc.dist_a, sc.dist_b, sc.n_agents());
  }
  throw ConfigError("unknown mechanism kind");
}

Action RunContext::decide(const Scenario& sc, int agent, int position,
                          Message msg,
                          const std::vector<ObservedAction>& observed) const {
  const auto it = sc.policies.find(agent);
  const PolicyKind policy =
      it == sc.policies.end() ? PolicyKind::Compliant : it->second;
  if (policy == PolicyKind::Compliant) return msg.action;

  // Exact best response under the no-visibility mechanism.
  if (!exploration_needed_ || position > partition_.k_count + 1)
    return msg.action;  // recommendation is already the best response
  const IntervalSet event = no_visibility_info_event(
      partition_, sc.dist_a, position, msg.action, observed);
  const double ev_a = sc.dist_a.cond_expect(event);
  const double ev_b = sc.mu_b();
  if (std::abs(ev_a - ev_b) <= 1e-12) return msg.action;
  return ev_a > ev_b ? Action::A : Action::B;
}

RunTrace RunContext::run_once(uint64_t seed) const {
  const Scenario& sc = *scenario_;
  RandomStream stream(seed);
  RunTrace trace;

  const int n = sc.n_agents();
  trace.order.resize(n);
  for (int i = 0; i < n; ++i) trace.order[i] = i;
  if (sc.arrival.kind == ArrivalOrderKind::Given) {
    trace.order = sc.arrival.order;
  } else if (sc.arrival.kind == ArrivalOrderKind::SeededShuffle) {
    std::shuffle(trace.order.begin(), trace.order.end(), stream);
  }

  trace.va = sc.dist_a.sample(stream);
  trace.vb = sc.dist_b.sample(stream);
  Planner planner = make_planner(stream, &trace.replica_label);

  std::vector<int> position_of(n, 0);
  std::vector<Action> action_of(n, Action::A);
  trace.records.reserve(n);
  for (int t = 1; t <= n; ++t) {
    const int agent = trace.order[t - 1];
    position_of[agent] = t;
    const Message msg = planner.step(agent);

    std::vector<ObservedAction> observed;
    for (int f : sc.graph.neighbors(agent))
      if (position_of[f] != 0 && position_of[f] < t)
        observed.push_back({position_of[f], action_of[f]});

    const Action act = decide(sc, agent, t, msg, observed);
    action_of[agent] = act;
    const double reward = act == Action::A ? trace.va : trace.vb;
    planner.reveal(agent, act, reward);
    trace.records.push_back({agent, msg, act, reward, planner.last_branch(),
                             planner.k(), planner.z(), planner.experiment(),
                             planner.knowledge()});
  }
  trace.exploration_end = planner.exploration_end();
  trace.rho_size = static_cast<int>(planner.rho().size());
  trace.shadow_size = static_cast<int>(planner.shadow().size());
  trace.z_final = planner.z();
  trace.k_final = planner.k();
  return trace;
}

}  // namespace icx
