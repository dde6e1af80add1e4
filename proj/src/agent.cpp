#include "icx/agent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "icx/errors.hpp"

namespace icx {

std::string InfoSignature::to_string() const {
  std::ostringstream out;
  out << "pos=" << position << " msg=" << icx::to_string(message);
  if (flag != MsgFlag::None) out << "/" << icx::to_string(flag);
  out << " saw={";
  bool first = true;
  for (const auto& [id, act] : observed) {
    if (!first) out << ",";
    first = false;
    out << id << ":" << icx::to_string(act);
  }
  out << "}";
  return out.str();
}

namespace {

struct Accum {
  long n = 0;
  double sum_a = 0.0, sumsq_a = 0.0;
  double sum_b = 0.0, sumsq_b = 0.0;
  std::map<Branch, long> branches;

  void add(double va, double vb, Branch br) {
    ++n;
    sum_a += va;
    sumsq_a += va * va;
    sum_b += vb;
    sumsq_b += vb * vb;
    ++branches[br];
  }
};

double std_error(long n, double sum, double sumsq) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  double var = (sumsq - n * mean * mean) / (n - 1);
  if (var < 0.0) var = 0.0;
  return std::sqrt(var / n);
}

InfoSetReport finalize(const InfoSignature& sig, const Accum& acc,
                       long min_matched) {
  InfoSetReport rep;
  rep.sig = sig;
  rep.matched = acc.n;
  rep.supported = acc.n >= min_matched;
  if (acc.n > 0) {
    rep.ev_a = acc.sum_a / acc.n;
    rep.ev_b = acc.sum_b / acc.n;
    rep.se_a = std_error(acc.n, acc.sum_a, acc.sumsq_a);
    rep.se_b = std_error(acc.n, acc.sum_b, acc.sumsq_b);
    const double ev_msg = sig.message == Action::A ? rep.ev_a : rep.ev_b;
    rep.gain = std::max(rep.ev_a, rep.ev_b) - ev_msg;
    rep.gain_se = std::sqrt(rep.se_a * rep.se_a + rep.se_b * rep.se_b);
    Branch dominant = Branch::First;
    long best = -1;
    for (const auto& [br, cnt] : acc.branches)
      if (cnt > best) {
        best = cnt;
        dominant = br;
      }
    rep.agent_class = to_string(dominant);
  }
  return rep;
}

}  // namespace

std::vector<AuditResult> audit_agents(const RunContext& ctx,
                                      const std::vector<int>& agents,
                                      const McParams& mc, uint64_t seed) {
  const Scenario& sc = ctx.scenario();
  for (int agent : agents)
    if (agent < 0 || agent >= sc.n_agents())
      throw UnknownAgent("audit target out of range: " + std::to_string(agent));

  std::vector<std::map<InfoSignature, Accum>> tallies(agents.size());
  std::vector<int> position_of(sc.n_agents(), 0);

  for (long r = 0; r < mc.n_outer; ++r) {
    const RunTrace trace = ctx.run_once(child_seed(seed, static_cast<uint64_t>(r)));
    for (int t = 1; t <= sc.n_agents(); ++t) position_of[trace.order[t - 1]] = t;
    for (size_t i = 0; i < agents.size(); ++i) {
      const int agent = agents[i];
      const int pos = position_of[agent];
      const ArrivalRecord& rec = trace.records[pos - 1];
      InfoSignature sig;
      sig.position = pos;
      sig.message = rec.message.action;
      sig.flag = rec.message.flag;
      for (int f : sc.graph.neighbors(agent))
        if (position_of[f] < pos)
          sig.observed.emplace_back(f, trace.records[position_of[f] - 1].action);
      std::sort(sig.observed.begin(), sig.observed.end());
      tallies[i][sig].add(trace.va, trace.vb, rec.branch);
    }
  }

  std::vector<AuditResult> results;
  results.reserve(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    AuditResult res;
    res.agent = agents[i];
    res.runs = mc.n_outer;
    for (const auto& [sig, acc] : tallies[i]) {
      InfoSetReport rep = finalize(sig, acc, mc.min_matched);
      if (rep.supported && rep.gain > res.max_gain) {
        res.max_gain = rep.gain;
        res.max_gain_se = rep.gain_se;
      }
      if (rep.supported && rep.gain > 3.0 * rep.gain_se)
        res.incentive_compatible = false;
      res.infosets.push_back(std::move(rep));
    }
    results.push_back(std::move(res));
  }
  return results;
}

AuditResult audit_agent(const RunContext& ctx, int agent, const McParams& mc,
                        uint64_t seed) {
  return audit_agents(ctx, {agent}, mc, seed).front();
}

ExactPosterior exact_no_visibility_posterior(
    const RunContext& ctx, int position, Action message,
    const std::vector<ObservedAction>& observed) {
  const Scenario& sc = ctx.scenario();
  if (sc.mechanism != MechanismKind::NoVisibility)
    throw InfeasibleParams("exact posterior only covers the no-visibility mechanism");
  const ExplorationPartition& part = ctx.partition();
  const IntervalSet event = no_visibility_info_event(part, sc.dist_a, position,
                                                     message, observed);
  ExactPosterior out;
  out.event_prob = sc.dist_a.prob(event);
  out.ev_a = sc.dist_a.cond_expect(event);
  out.ev_b = sc.mu_b();
  const double ev_msg = message == Action::A ? out.ev_a : out.ev_b;
  out.gain = std::max(out.ev_a, out.ev_b) - ev_msg;
  return out;
}

ExactPosterior exact_exploit_posterior(const Scenario& sc, Action message) {
  const ComparisonStats st = compare_joint(sc.dist_a, sc.dist_b);
  ExactPosterior out;
  if (message == Action::A) {
    if (st.p <= 0.0) throw ZeroMassEvent("P(V_a > V_b) = 0");
    out.event_prob = st.p;
    out.ev_a = st.ea_win / st.p;
    out.ev_b = st.eb_win / st.p;
  } else {
    const double q = 1.0 - st.p;
    if (q <= 0.0) throw ZeroMassEvent("P(V_b > V_a) = 0");
    out.event_prob = q;
    out.ev_a = (sc.dist_a.mean() - st.ea_win) / q;
    out.ev_b = (sc.dist_b.mean() - st.eb_win) / q;
  }
  const double ev_msg = message == Action::A ? out.ev_a : out.ev_b;
  out.gain = std::max(out.ev_a, out.ev_b) - ev_msg;
  return out;
}

}  // namespace icx
