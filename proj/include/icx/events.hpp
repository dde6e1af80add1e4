#pragma once

#include <utility>
#include <vector>

#include "icx/mechanism.hpp"
#include "icx/partition.hpp"

namespace icx {

/// Action observed from an agent identified by its arrival position (1-based).
struct ObservedAction {
  int position = 0;
  Action action = Action::A;
};

/// Event {V_a in ...} for the message sent at `position` by the no-visibility
/// mechanism. Positions 2..K+1 are test positions; position 1 carries no
/// information; later positions are not interval events (they depend on V_b).
IntervalSet no_visibility_message_event(const ExplorationPartition& p,
                                        const PiecewiseDistribution& va,
                                        int position, Action message);

/// Event for a full information set: the message intersected with the events
/// implied by observed compliant predecessors. All positions involved must be
/// within 1..K+1.
IntervalSet no_visibility_info_event(const ExplorationPartition& p,
                                     const PiecewiseDistribution& va,
                                     int position, Action message,
                                     const std::vector<ObservedAction>& observed);

}  // namespace icx
