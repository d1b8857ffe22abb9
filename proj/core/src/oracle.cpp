#include "qoinet/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace qoinet {

namespace {

inline double sqd(double v) { return v * v; }

}  // namespace

double decision_objective(const QueueVector& state, const SlotRealization& slot,
                          const DecisionVector& decision, double V) {
  const int n = state.device_count();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double K = static_cast<double>(state.K[i]);
    double Q = static_cast<double>(state.Q[i]);
    double J = static_cast<double>(state.J[i]);
    const FormatOption& opt = slot.options[i][decision.format[i]];
    total += sqd(K - static_cast<double>(decision.s_q[i]));
    total += sqd(K - static_cast<double>(decision.s_j[i]));
    total += sqd(K + static_cast<double>(opt.data));
    total += sqd(Q - static_cast<double>(decision.u[i]));
    total += sqd(Q + static_cast<double>(decision.s_q[i]));
    for (int m = 0; m < n; ++m)
      total += sqd(Q + static_cast<double>(decision.a.at(m, i)));
    for (int m = 0; m < n; ++m)
      total += sqd(J - static_cast<double>(decision.a.at(i, m)));
    total += sqd(J + static_cast<double>(decision.s_j[i]));
    total -= 2.0 * V * opt.reward;
  }
  return total;
}

namespace {

struct DevChoice {
  int format = 0;
  std::int64_t s_q = 0;
  std::int64_t s_j = 0;
  double partial = 0.0;
};

struct UCandidate {
  std::vector<std::int64_t> u;
  double partial = 0.0;
};

struct ACandidate {
  PairTable<std::int64_t> a;
  double partial = 0.0;
};

void check_budget(double candidates, const OracleLimits& limits) {
  if (candidates > static_cast<double>(limits.max_candidates))
    throw BudgetError("oracle: candidate count " + std::to_string(candidates) +
                      " exceeds budget " +
                      std::to_string(limits.max_candidates));
}

}  // namespace

OracleDecision oracle_joint_decision(const Scenario& sc,
                                     const QueueVector& state,
                                     const SlotRealization& slot, double V,
                                     const OracleLimits& limits,
                                     const JointCouplings& couplings) {
  const int n = sc.device_count();

  double candidates = 1.0;
  for (int i = 0; i < n; ++i) {
    candidates *= static_cast<double>(slot.options[i].size()) *
                  static_cast<double>(sc.devices[i].s_q_max + 1) *
                  static_cast<double>(sc.devices[i].s_j_max + 1);
    candidates *= static_cast<double>(slot.uplink_best[i] + 1);
    for (int m = 0; m < n; ++m)
      if (m != i) candidates *= static_cast<double>(slot.relay_best.at(i, m) + 1);
  }
  check_budget(candidates, limits);

  // Per-device (format, s_q, s_j) choices with their objective share.
  std::vector<std::vector<DevChoice>> dev(n);
  for (int i = 0; i < n; ++i) {
    double K = static_cast<double>(state.K[i]);
    double Q = static_cast<double>(state.Q[i]);
    double J = static_cast<double>(state.J[i]);
    for (int f = 0; f < static_cast<int>(slot.options[i].size()); ++f) {
      const FormatOption& opt = slot.options[i][f];
      double fmt = sqd(K + static_cast<double>(opt.data)) - 2.0 * V * opt.reward;
      for (std::int64_t q = 0; q <= sc.devices[i].s_q_max; ++q) {
        double fq = fmt + sqd(K - static_cast<double>(q)) +
                    sqd(Q + static_cast<double>(q));
        for (std::int64_t j = 0; j <= sc.devices[i].s_j_max; ++j) {
          double p = fq + sqd(K - static_cast<double>(j)) +
                     sqd(J + static_cast<double>(j));
          dev[i].push_back(DevChoice{f, q, j, p});
        }
      }
    }
  }

  // Joint uplink vectors, filtered by the coupling when present.
  std::vector<UCandidate> u_list;
  {
    std::vector<std::int64_t> u(n, 0);
    auto emit = [&]() {
      if (couplings.uplink && !couplings.uplink(u)) return;
      double p = 0.0;
      for (int i = 0; i < n; ++i)
        p += sqd(static_cast<double>(state.Q[i]) - static_cast<double>(u[i]));
      u_list.push_back(UCandidate{u, p});
    };
    auto rec = [&](auto&& self, int i) -> void {
      if (i == n) {
        emit();
        return;
      }
      for (u[i] = 0; u[i] <= slot.uplink_best[i]; ++u[i]) self(self, i + 1);
      u[i] = 0;
    };
    rec(rec, 0);
  }
  if (u_list.empty())
    throw ValidationError("oracle: uplink coupling admits no candidate");

  // Joint relay matrices. The constant share covers the diagonal and the
  // channel-free pairs, where the rate is pinned to zero.
  std::vector<std::pair<int, int>> pairs;
  double a_base = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s != t && slot.relay_best.at(s, t) > 0) {
        pairs.emplace_back(s, t);
      } else {
        a_base += sqd(static_cast<double>(state.J[s])) +
                  sqd(static_cast<double>(state.Q[t]));
      }
    }
  }
  std::vector<ACandidate> a_list;
  {
    PairTable<std::int64_t> a(n);
    auto emit = [&]() {
      if (couplings.relay && !couplings.relay(a)) return;
      double p = a_base;
      for (auto [s, t] : pairs)
        p += sqd(static_cast<double>(state.J[s]) -
                 static_cast<double>(a.at(s, t))) +
             sqd(static_cast<double>(state.Q[t]) +
                 static_cast<double>(a.at(s, t)));
      a_list.push_back(ACandidate{a, p});
    };
    auto rec = [&](auto&& self, std::size_t k) -> void {
      if (k == pairs.size()) {
        emit();
        return;
      }
      auto [s, t] = pairs[k];
      for (std::int64_t v = 0; v <= slot.relay_best.at(s, t); ++v) {
        a.at(s, t) = v;
        self(self, k + 1);
      }
      a.at(s, t) = 0;
    };
    rec(rec, 0);
  }
  if (a_list.empty())
    throw ValidationError("oracle: relay coupling admits no candidate");

  // Full product scan, ascending everywhere; strict improvement keeps the
  // lexicographically smallest minimizer.
  std::vector<int> idx(n, 0), best_idx(n, 0);
  std::size_t best_u = 0, best_a = 0;
  double best_obj = 0.0;
  bool have_best = false;

  auto scan_links = [&](double dev_sum) {
    for (std::size_t ui = 0; ui < u_list.size(); ++ui) {
      double du = dev_sum + u_list[ui].partial;
      for (std::size_t ai = 0; ai < a_list.size(); ++ai) {
        double total = du + a_list[ai].partial;
        if (!have_best || total < best_obj) {
          have_best = true;
          best_obj = total;
          best_idx = idx;
          best_u = ui;
          best_a = ai;
        }
      }
    }
  };
  auto rec = [&](auto&& self, int i, double sum) -> void {
    if (i == n) {
      scan_links(sum);
      return;
    }
    for (idx[i] = 0; idx[i] < static_cast<int>(dev[i].size()); ++idx[i])
      self(self, i + 1, sum + dev[i][idx[i]].partial);
    idx[i] = 0;
  };
  rec(rec, 0, 0.0);

  OracleDecision out;
  out.objective = best_obj;
  out.decision = DecisionVector::zeros(n);
  for (int i = 0; i < n; ++i) {
    const DevChoice& ch = dev[i][best_idx[i]];
    out.decision.format[i] = ch.format;
    out.decision.s_q[i] = ch.s_q;
    out.decision.s_j[i] = ch.s_j;
    out.decision.u[i] = u_list[best_u].u[i];
  }
  out.decision.a = a_list[best_a].a;
  return out;
}

std::vector<double> oracle_lp_step(const LpInstance& inst,
                                   std::span<const double> Z, double V,
                                   double grid_step) {
  std::vector<double> out(inst.num_vars, 0.0);
  for (int i = 0; i < inst.num_vars; ++i) {
    double best_x = 0.0, best_v = 0.0;
    bool first = true;
    std::int64_t steps =
        static_cast<std::int64_t>(std::floor(inst.x_max[i] / grid_step));
    for (std::int64_t k = 0; k <= steps + 1; ++k) {
      double x = k <= steps ? static_cast<double>(k) * grid_step : inst.x_max[i];
      if (x > inst.x_max[i]) x = inst.x_max[i];
      double v = -2.0 * V * inst.c[i] * x;
      for (int j = 0; j < inst.num_cons; ++j) v += sqd(Z[j] + inst.at(j, i) * x);
      if (first || v < best_v) {
        first = false;
        best_v = v;
        best_x = x;
      }
      if (k > steps) break;
    }
    out[i] = best_x;
  }
  return out;
}

OracleLpSolution oracle_lp_solve(const LpInstance& inst, double grid_step,
                                 const OracleLimits& limits) {
  std::vector<std::vector<double>> grids(inst.num_vars);
  double candidates = 1.0;
  for (int i = 0; i < inst.num_vars; ++i) {
    std::int64_t steps =
        static_cast<std::int64_t>(std::floor(inst.x_max[i] / grid_step));
    for (std::int64_t k = 0; k <= steps; ++k)
      grids[i].push_back(std::min(static_cast<double>(k) * grid_step,
                                  inst.x_max[i]));
    if (grids[i].back() < inst.x_max[i] - 1e-12)
      grids[i].push_back(inst.x_max[i]);
    candidates *= static_cast<double>(grids[i].size());
  }
  check_budget(candidates, limits);

  OracleLpSolution best;
  std::vector<double> x(inst.num_vars, 0.0);
  // Row sums maintained incrementally per recursion level.
  std::vector<std::vector<double>> rows(inst.num_vars + 1,
                                        std::vector<double>(inst.num_cons, 0.0));
  auto rec = [&](auto&& self, int i, double obj) -> void {
    if (i == inst.num_vars) {
      for (int j = 0; j < inst.num_cons; ++j)
        if (rows[i][j] > inst.b[j] + 1e-9) return;
      if (!best.found || obj > best.value) {
        best.found = true;
        best.value = obj;
        best.x = x;
      }
      return;
    }
    for (double v : grids[i]) {
      x[i] = v;
      for (int j = 0; j < inst.num_cons; ++j)
        rows[i + 1][j] = rows[i][j] + inst.at(j, i) * v;
      self(self, i + 1, obj + inst.c[i] * v);
    }
    x[i] = 0.0;
  };
  rec(rec, 0, 0.0);
  return best;
}

Lemma1Check verify_lemma1(double x, std::span<const double> a,
                          std::span<const double> b,
                          std::span<const double> a_caps,
                          std::span<const double> b_caps) {
  if (x < 0.0) throw ValidationError("lemma1: x must be non-negative");
  for (double v : b)
    if (v < 0.0) throw ValidationError("lemma1: b entries must be non-negative");
  std::vector<double> ca(a.size()), cb(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[i] = a_caps.empty() ? std::abs(a[i]) : a_caps[i];
    if (ca[i] < std::abs(a[i]) - 1e-12)
      throw ValidationError("lemma1: cap below |a| magnitude");
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    cb[j] = b_caps.empty() ? b[j] : b_caps[j];
    if (cb[j] < b[j] - 1e-12)
      throw ValidationError("lemma1: cap below b magnitude");
  }

  double sum_a = 0.0, sum_b = 0.0;
  for (double v : a) sum_a += v;
  for (double v : b) sum_b += v;

  Lemma1Check out;
  out.lhs = sqd(std::max(x + sum_a, 0.0) + sum_b) - x * x;

  double quad = 0.0;
  for (double v : a) quad += sqd(x + v);
  for (double v : b) quad += sqd(x + v);
  quad -= static_cast<double>(a.size() + b.size()) * x * x;
  double C = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i)
    for (std::size_t k = 0; k < i; ++k) C += ca[i] * ca[k];
  for (std::size_t j = 0; j < cb.size(); ++j)
    for (std::size_t k = 0; k < j; ++k) C += cb[j] * cb[k];
  for (double cai : ca)
    for (double cbj : cb) C += cai * cbj;
  C *= 2.0;
  out.quadratic_bound = quad + C;

  double cap_sum = 0.0;
  for (double v : ca) cap_sum += v;
  for (double v : cb) cap_sum += v;
  out.linear_bound = 2.0 * x * (sum_a + sum_b) + cap_sum * cap_sum;

  auto tol = [](double lo, double hi) {
    return 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
  };
  out.quadratic_holds = out.lhs <= out.quadratic_bound + tol(out.lhs, out.quadratic_bound);
  out.linear_holds =
      out.quadratic_bound <= out.linear_bound + tol(out.quadratic_bound, out.linear_bound);
  return out;
}

Scenario random_small_scenario(SplitMix64& rng, int num_devices,
                               std::int64_t max_rate, std::int64_t s_q_max,
                               std::int64_t s_j_max) {
  Scenario sc;
  sc.event_prob = 0.7;
  sc.V = 0.0;
  sc.horizon = 0;
  sc.seed = rng.next();

  RateDistribution uniform;
  for (std::int64_t r = 0; r <= max_rate; ++r)
    uniform.entries.push_back(
        {r, 1.0 / static_cast<double>(max_rate + 1)});

  for (int i = 1; i <= num_devices; ++i) {
    DeviceSpec dev;
    dev.id = i;
    dev.formats = {{0.0, 0}, {20.0, 100}, {15.0, 50}, {10.0, 10}};
    dev.s_q_max = s_q_max;
    dev.s_j_max = s_j_max;
    dev.observe_prob = 0.8;
    sc.devices.push_back(dev);

    ChannelSpec up;
    up.kind = ChannelSpec::Kind::Uplink;
    up.src = i;
    up.rates = uniform;
    sc.channels.push_back(up);
  }
  for (int s = 1; s <= num_devices; ++s) {
    for (int d = 1; d <= num_devices; ++d) {
      if (s == d) continue;
      ChannelSpec rel;
      rel.kind = ChannelSpec::Kind::Relay;
      rel.src = s;
      rel.dst = d;
      rel.rates = uniform;
      sc.channels.push_back(rel);
    }
  }
  sc.validate();
  return sc;
}

QueueVector random_queues(SplitMix64& rng, int num_devices,
                          std::int64_t max_queue) {
  QueueVector q = QueueVector::zeros(num_devices);
  auto draw = [&]() {
    return static_cast<std::int64_t>(rng.next() %
                                     static_cast<std::uint64_t>(max_queue + 1));
  };
  for (int i = 0; i < num_devices; ++i) {
    q.K[i] = draw();
    q.Q[i] = draw();
    q.J[i] = draw();
  }
  return q;
}

LpInstance random_lp_instance(SplitMix64& rng, int max_vars, int max_cons) {
  LpInstance inst;
  inst.num_vars = 1 + static_cast<int>(rng.next() % max_vars);
  inst.num_cons = 1 + static_cast<int>(rng.next() % max_cons);
  auto unit = [&]() { return rng.next_unit(); };
  for (int i = 0; i < inst.num_vars; ++i) {
    inst.c.push_back(-1.0 + 3.0 * unit());
    inst.x_max.push_back(0.5 + 2.5 * unit());
  }
  for (int j = 0; j < inst.num_cons; ++j) {
    // b > 0 keeps the origin strictly feasible (a Slater point).
    inst.b.push_back(0.5 + 5.5 * unit());
    for (int i = 0; i < inst.num_vars; ++i) {
      double v = unit() < 0.2 ? 0.0 : -1.0 + 4.0 * unit();
      inst.a.push_back(v);
    }
  }
  inst.validate();
  return inst;
}

}  // namespace qoinet
