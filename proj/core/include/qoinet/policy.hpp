#pragma once

#include <cstdint>
#include <span>

#include "qoinet/model.hpp"

namespace qoinet {

enum class PolicyKind { Quadratic, MaxWeight };

const char* policy_name(PolicyKind kind);
PolicyKind parse_policy(const std::string& name);  // throws ValidationError

// Quadratic-policy subproblem solvers. All argmins break ties toward the
// smaller action value / smaller format index, which keeps replays
// deterministic and moves the least data.

// Admission control: argmin over f of (K + d_f)^2 - 2 V r_f.
int qd_select_format(std::int64_t K, std::span<const FormatOption> options,
                     double V);

// Internal routing K -> Q: minimize (K - s)^2 + (Q + s)^2 over {0..s_q_max}.
std::int64_t qd_route_uplink(std::int64_t K, std::int64_t Q,
                             std::int64_t s_q_max);

// Internal routing K -> J: same structure with J in place of Q.
std::int64_t qd_route_relay(std::int64_t K, std::int64_t J,
                            std::int64_t s_j_max);

// Uplink allocation over the orthogonal set {0..best}: the rate closest to Q.
std::int64_t qd_allocate_uplink(std::int64_t Q, std::int64_t best);

// Relay allocation over {0..best}: minimize (J - a)^2 + (Q_m + a)^2.
std::int64_t qd_allocate_relay(std::int64_t J, std::int64_t Q_m,
                               std::int64_t best);

// Max-weight baseline: bang-bang minimization of the linear drift bound,
// choosing 0 whenever a coefficient is zero.
DecisionVector mw_decide(const Scenario& sc, const QueueVector& state,
                         const SlotRealization& slot, double V);

// Composes the per-device and per-link solvers (quadratic) or mw_decide.
// Pure function of its inputs.
DecisionVector decide(PolicyKind kind, const Scenario& sc,
                      const QueueVector& state, const SlotRealization& slot,
                      double V);

}  // namespace qoinet
