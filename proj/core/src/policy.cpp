#include "qoinet/policy.hpp"

namespace qoinet {

namespace {

inline std::int64_t sq(std::int64_t v) { return v * v; }

// Middle case of the routing/relay closed forms: evaluate both integer
// candidates around diff/2 and keep the smaller action on ties. The two
// candidates are evaluated explicitly rather than assuming either suffices.
inline std::int64_t nearest_half(std::int64_t behind, std::int64_t ahead,
                                 std::int64_t diff) {
  std::int64_t lo = diff / 2;            // diff > 0 here
  std::int64_t hi = lo + (diff & 1);
  std::int64_t g_lo = sq(behind - lo) + sq(ahead + lo);
  std::int64_t g_hi = sq(behind - hi) + sq(ahead + hi);
  return g_hi < g_lo ? hi : lo;
}

}  // namespace

const char* policy_name(PolicyKind kind) {
  return kind == PolicyKind::Quadratic ? "quadratic" : "maxweight";
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "quadratic") return PolicyKind::Quadratic;
  if (name == "maxweight" || name == "max-weight") return PolicyKind::MaxWeight;
  throw ValidationError("unknown policy '" + name +
                        "' (expected quadratic or maxweight)");
}

int qd_select_format(std::int64_t K, std::span<const FormatOption> options,
                     double V) {
  int best = 0;
  double best_obj = 0.0;
  for (int f = 0; f < static_cast<int>(options.size()); ++f) {
    double kd = static_cast<double>(K + options[f].data);
    double obj = kd * kd - 2.0 * V * options[f].reward;
    if (f == 0 || obj < best_obj) {
      best = f;
      best_obj = obj;
    }
  }
  return best;
}

std::int64_t qd_route_uplink(std::int64_t K, std::int64_t Q,
                             std::int64_t s_q_max) {
  std::int64_t diff = K - Q;
  if (diff >= 2 * s_q_max) return s_q_max;
  if (diff <= 0) return 0;
  return nearest_half(K, Q, diff);
}

std::int64_t qd_route_relay(std::int64_t K, std::int64_t J,
                            std::int64_t s_j_max) {
  std::int64_t diff = K - J;
  if (diff >= 2 * s_j_max) return s_j_max;
  if (diff <= 0) return 0;
  return nearest_half(K, J, diff);
}

std::int64_t qd_allocate_uplink(std::int64_t Q, std::int64_t best) {
  // Closest element of {0..best} to Q.
  return Q < best ? Q : best;
}

std::int64_t qd_allocate_relay(std::int64_t J, std::int64_t Q_m,
                               std::int64_t best) {
  std::int64_t diff = J - Q_m;
  if (diff >= 2 * best) return best;
  if (diff <= 0) return 0;
  return nearest_half(J, Q_m, diff);
}

DecisionVector mw_decide(const Scenario& sc, const QueueVector& state,
                         const SlotRealization& slot, double V) {
  const int n = sc.device_count();
  DecisionVector d = DecisionVector::zeros(n);
  for (int i = 0; i < n; ++i) {
    const auto& opts = slot.options[i];
    int best = 0;
    double best_obj = 0.0;
    for (int f = 0; f < static_cast<int>(opts.size()); ++f) {
      double obj = static_cast<double>(state.K[i]) * opts[f].data -
                   V * opts[f].reward;
      if (f == 0 || obj < best_obj) {
        best = f;
        best_obj = obj;
      }
    }
    d.format[i] = best;
    d.s_q[i] = state.K[i] > state.Q[i] ? sc.devices[i].s_q_max : 0;
    d.s_j[i] = state.K[i] > state.J[i] ? sc.devices[i].s_j_max : 0;
    d.u[i] = state.Q[i] > 0 ? slot.uplink_best[i] : 0;
  }
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s != t && state.J[s] > state.Q[t])
        d.a.at(s, t) = slot.relay_best.at(s, t);
  return d;
}

DecisionVector decide(PolicyKind kind, const Scenario& sc,
                      const QueueVector& state, const SlotRealization& slot,
                      double V) {
  if (kind == PolicyKind::MaxWeight) return mw_decide(sc, state, slot, V);

  const int n = sc.device_count();
  DecisionVector d = DecisionVector::zeros(n);
  for (int i = 0; i < n; ++i) {
    d.format[i] = qd_select_format(state.K[i], slot.options[i], V);
    d.s_q[i] = qd_route_uplink(state.K[i], state.Q[i], sc.devices[i].s_q_max);
    d.s_j[i] = qd_route_relay(state.K[i], state.J[i], sc.devices[i].s_j_max);
    d.u[i] = qd_allocate_uplink(state.Q[i], slot.uplink_best[i]);
  }
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s != t)
        d.a.at(s, t) =
            qd_allocate_relay(state.J[s], state.Q[t], slot.relay_best.at(s, t));
  return d;
}

}  // namespace qoinet
