#pragma once

#include <string>
#include <vector>

#include "icx/scenario.hpp"

namespace icx {

struct McParams {
  long n_outer = 20000;
  long min_matched = 200;
};

/// Discrete signature of an information set: everything the agent can see.
/// Position is included because it is common knowledge that agents know
/// their place in the arrival sequence.
struct InfoSignature {
  int position = 0;
  Action message = Action::A;
  MsgFlag flag = MsgFlag::None;
  std::vector<std::pair<int, Action>> observed;  // (friend id, action), sorted

  auto operator<=>(const InfoSignature&) const = default;
  std::string to_string() const;
};

struct InfoSetReport {
  InfoSignature sig;
  std::string agent_class;  // dominant planner branch for this info set
  long matched = 0;
  double ev_a = 0.0;
  double ev_b = 0.0;
  double se_a = 0.0;
  double se_b = 0.0;
  double gain = 0.0;     // max(ev_a, ev_b) - posterior value of the message action
  double gain_se = 0.0;
  bool supported = false;
};

struct AuditResult {
  int agent = -1;
  long runs = 0;
  std::vector<InfoSetReport> infosets;
  double max_gain = 0.0;     // over supported info sets
  double max_gain_se = 0.0;  // se at the maximizing info set
  /// true when every supported info set has gain <= 3 standard errors
  bool incentive_compatible = true;
};

/// Monte Carlo deviation audit: simulates n_outer runs with everyone playing
/// their configured policy, conditions on the audited agent's realized
/// information set, and measures the gain of the best response over the
/// recommendation.
AuditResult audit_agent(const RunContext& ctx, int agent, const McParams& mc,
                        uint64_t seed);

/// Audits several agents off one shared batch of simulated runs.
std::vector<AuditResult> audit_agents(const RunContext& ctx,
                                      const std::vector<int>& agents,
                                      const McParams& mc, uint64_t seed);

struct ExactPosterior {
  double ev_a = 0.0;
  double ev_b = 0.0;
  double gain = 0.0;
  double event_prob = 0.0;
};

/// Closed-form posterior for the no-visibility mechanism given an info set
/// whose observed agents are compliant and within the first K+1 positions.
ExactPosterior exact_no_visibility_posterior(
    const RunContext& ctx, int position, Action message,
    const std::vector<ObservedAction>& observed);

/// Exact posteriors for a post-exploration arrival that observes nobody:
/// the message is the realized argmax, so the event couples V_a and V_b.
ExactPosterior exact_exploit_posterior(const Scenario& sc, Action message);

}  // namespace icx
