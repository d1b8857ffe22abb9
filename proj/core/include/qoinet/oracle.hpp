#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qoinet/lp.hpp"
#include "qoinet/model.hpp"
#include "qoinet/sampling.hpp"

namespace qoinet {

// Brute-force reference implementations used by tests and the verify command.
// They never call the closed-form policy path.

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::int64_t max_candidates = 10'000'000;
};

// Default instance caps under which exhaustive enumeration stays inside the
// OracleLimits budget; the verify suites and the acceptance tests draw their
// random instances from these.
struct SmallInstanceCaps {
  std::int64_t max_queue = 12;
  std::int64_t max_rate = 4;
  int max_devices = 3;
  double grid_step = 0.01;
};

// Full decision objective of the per-slot quadratic minimization, evaluated
// monolithically: sum over devices of
//   (K - s_q)^2 + (K - s_j)^2 + (K + d)^2 + (Q - u)^2 + (Q + s_q)^2
//   + sum_m (Q_n + a_mn)^2 + sum_m (J_n - a_nm)^2 + (J + s_j)^2 - 2 V r.
// Inner sums run over every ordered pair, absent channels contributing zero
// rates. Integer-valued terms are exact in double.
double decision_objective(const QueueVector& state, const SlotRealization& slot,
                          const DecisionVector& decision, double V);

// Optional coupling constraints for non-orthogonal channel sets. A candidate
// is kept only if the predicate returns true; null predicates mean the
// product-form sets {0..best}.
struct JointCouplings {
  std::function<bool(std::span<const std::int64_t>)> uplink;
  std::function<bool(const PairTable<std::int64_t>&)> relay;
};

struct OracleDecision {
  DecisionVector decision;
  double objective = 0.0;
};

// Exhaustive minimization over every (f, s_q, s_j, u, a) tuple in the
// feasible set. Throws BudgetError when the candidate count exceeds the
// limit. Ties resolve to the lexicographically smallest decision.
OracleDecision oracle_joint_decision(const Scenario& sc,
                                     const QueueVector& state,
                                     const SlotRealization& slot, double V,
                                     const OracleLimits& limits = {},
                                     const JointCouplings& couplings = {});

// Grid minimization of sum_i {sum_j (Z_j + a_ji x_i)^2 - 2 V c_i x_i} over
// the box; the grid always includes both endpoints of [0, x_max].
std::vector<double> oracle_lp_step(const LpInstance& inst,
                                   std::span<const double> Z, double V,
                                   double grid_step);

struct OracleLpSolution {
  std::vector<double> x;
  double value = 0.0;
  bool found = false;  // false when no grid point is feasible
};

// Exhaustive feasible-grid maximization of c.x subject to A x <= b and the
// box bounds. Intended for tiny instances; throws BudgetError over limit.
OracleLpSolution oracle_lp_solve(const LpInstance& inst, double grid_step,
                                 const OracleLimits& limits = {});

struct Lemma1Check {
  double lhs = 0.0;
  double quadratic_bound = 0.0;
  double linear_bound = 0.0;
  bool quadratic_holds = false;  // lhs <= quadratic_bound
  bool linear_holds = false;     // quadratic_bound <= linear_bound
};

// Checks [max(x + sum a_i, 0) + sum b_j]^2 - x^2 against the quadratic bound
// with constant C and the linear bound with constant C'. Caps default to the
// actual magnitudes |a_i| and b_j (the tightest admissible choice).
Lemma1Check verify_lemma1(double x, std::span<const double> a,
                          std::span<const double> b,
                          std::span<const double> a_caps = {},
                          std::span<const double> b_caps = {});

// Random small-instance generators shared by tests and the verify command.
// All draws come from the supplied stream, so suites replay from a seed.
Scenario random_small_scenario(SplitMix64& rng, int num_devices,
                               std::int64_t max_rate, std::int64_t s_q_max,
                               std::int64_t s_j_max);
QueueVector random_queues(SplitMix64& rng, int num_devices,
                          std::int64_t max_queue);
LpInstance random_lp_instance(SplitMix64& rng, int max_vars, int max_cons);

}  // namespace qoinet
