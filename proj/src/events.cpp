#include "icx/events.hpp"

#include "icx/errors.hpp"

namespace icx {

namespace {

IntervalSet support_set(const PiecewiseDistribution& va) {
  return IntervalSet::single(va.support_lo(), va.support_hi(), true);
}

}  // namespace

IntervalSet no_visibility_message_event(const ExplorationPartition& p,
                                        const PiecewiseDistribution& va,
                                        int position, Action message) {
  if (position == 1) return support_set(va);
  if (position < 1 || position > p.k_count + 1)
    throw InfeasibleParams(
        "no interval event for post-exploration position " +
        std::to_string(position));
  const IntervalSet b_event = p.d0.unite(p.cell(position - 1));
  if (message == Action::B) return b_event;
  return b_event.complement(va.support_lo(), va.support_hi());
}

IntervalSet no_visibility_info_event(const ExplorationPartition& p,
                                     const PiecewiseDistribution& va,
                                     int position, Action message,
                                     const std::vector<ObservedAction>& observed) {
  IntervalSet event = no_visibility_message_event(p, va, position, message);
  for (const ObservedAction& obs : observed)
    event = event.intersect(
        no_visibility_message_event(p, va, obs.position, obs.action));
  return event;
}

}  // namespace icx
