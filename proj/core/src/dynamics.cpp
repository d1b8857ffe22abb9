#include "qoinet/dynamics.hpp"

#include <algorithm>

namespace qoinet {

ActualTransfers resolve_actual(const QueueVector& state,
                               const DecisionVector& decision) {
  const int n = decision.device_count();
  ActualTransfers act;
  act.s_q_act.assign(n, 0);
  act.s_j_act.assign(n, 0);
  act.a_act = PairTable<std::int64_t>(n);

  for (int i = 0; i < n; ++i) {
    std::int64_t total =
        std::min(state.K[i], decision.s_q[i] + decision.s_j[i]);
    act.s_q_act[i] = std::min(decision.s_q[i], total);
    act.s_j_act[i] = total - act.s_q_act[i];
  }

  for (int s = 0; s < n; ++s) {
    std::int64_t requested = 0;
    for (int t = 0; t < n; ++t) requested += decision.a.at(s, t);
    std::int64_t avail = std::min(state.J[s] + act.s_j_act[s], requested);
    for (int t = 0; t < n && avail > 0; ++t) {
      std::int64_t moved = std::min(decision.a.at(s, t), avail);
      act.a_act.at(s, t) = moved;
      avail -= moved;
    }
  }
  return act;
}

QueueVector step_queues(const QueueVector& state, const DecisionVector& decision,
                        const ActualTransfers& actual,
                        std::span<const std::int64_t> admitted) {
  const int n = state.device_count();
  QueueVector next = QueueVector::zeros(n);
  for (int i = 0; i < n; ++i) {
    next.K[i] =
        std::max<std::int64_t>(state.K[i] - decision.s_q[i] - decision.s_j[i], 0) +
        admitted[i];

    std::int64_t out = 0;
    for (int t = 0; t < n; ++t) out += decision.a.at(i, t);
    next.J[i] = std::max<std::int64_t>(state.J[i] - out + actual.s_j_act[i], 0);

    std::int64_t in = 0;
    for (int s = 0; s < n; ++s) in += actual.a_act.at(s, i);
    next.Q[i] =
        std::max<std::int64_t>(state.Q[i] - decision.u[i] + actual.s_q_act[i], 0) +
        in;
  }
  return next;
}

BoundConstants compute_bounds(const Scenario& sc, double V) {
  const int n = sc.device_count();
  BoundConstants out;
  out.K_max.resize(n);
  out.Q_max.resize(n);
  out.no_admissible_format.assign(n, false);

  for (int i = 0; i < n; ++i) {
    const DeviceSpec& dev = sc.devices[i];
    double threshold = 0.0;
    bool any = false;
    for (std::size_t f = 1; f < dev.formats.size(); ++f) {
      double d = static_cast<double>(dev.formats[f].data);
      double t = (2.0 * V * dev.formats[f].reward - d * d) / (2.0 * d);
      if (!any || t > threshold) threshold = t;
      any = true;
    }
    double d_max = static_cast<double>(dev.max_data());
    if (!any || threshold < 0.0) {
      // No format clears the admission threshold: nothing beyond the blank
      // format is ever admitted, so d_max bounds the input queue.
      out.no_admissible_format[i] = true;
      out.K_max[i] = d_max;
    } else {
      out.K_max[i] = threshold + d_max;
    }
  }

  double k_all = 0.0;
  for (int i = 0; i < n; ++i) k_all = std::max(k_all, out.K_max[i]);
  for (int i = 0; i < n; ++i) {
    out.Q_max[i] = std::max(out.K_max[i], k_all) +
                   static_cast<double>(sc.relay_in_max(i)) +
                   static_cast<double>(sc.devices[i].s_q_max);
  }

  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    const DeviceSpec& dev = sc.devices[i];
    double t1 = static_cast<double>(dev.s_q_max + dev.s_j_max + dev.max_data());
    double t2 = static_cast<double>(dev.s_q_max + sc.uplink_max(i) +
                                    sc.relay_in_max(i));
    double t3 = static_cast<double>(dev.s_j_max + sc.relay_out_max(i));
    e += t1 * t1 + t2 * t2 + t3 * t3;
  }
  out.E = 0.5 * e;
  return out;
}

}  // namespace qoinet
