#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qoinet/model.hpp"

namespace qoinet {

// Data actually moved this slot, resolved from the requested decision.
struct ActualTransfers {
  std::vector<std::int64_t> s_q_act, s_j_act;
  PairTable<std::int64_t> a_act;
};

// Deterministic resolution: internal moves fill the uplink share first, then
// the relay share; relay shortfalls are filled ascending by destination.
ActualTransfers resolve_actual(const QueueVector& state,
                               const DecisionVector& decision);

// Slot update:
//   K' = max(K - s_q - s_j, 0) + d
//   J' = max(J - sum_m a(n->m) + s_j_act, 0)
//   Q' = max(Q - u + s_q_act, 0) + sum_m a_act(m->n)
QueueVector step_queues(const QueueVector& state, const DecisionVector& decision,
                        const ActualTransfers& actual,
                        std::span<const std::int64_t> admitted);

// Worst-case queue bounds for the quadratic policy, and the slack constant of
// the linear drift bound.
struct BoundConstants {
  std::vector<double> K_max;
  std::vector<double> Q_max;
  double E = 0.0;
  // Set where no format clears the admission threshold at this V; K_max falls
  // back to d_max for such devices.
  std::vector<bool> no_admissible_format;
};

BoundConstants compute_bounds(const Scenario& sc, double V);

inline BoundConstants compute_bounds(const Scenario& sc) {
  return compute_bounds(sc, sc.V);
}

}  // namespace qoinet
