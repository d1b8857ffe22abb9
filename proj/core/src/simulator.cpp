#include "qoinet/simulator.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "qoinet/sampling.hpp"

namespace qoinet {

namespace {

std::int64_t max_of(const std::vector<std::int64_t>& v) {
  std::int64_t m = 0;
  for (auto x : v) m = std::max(m, x);
  return m;
}

}  // namespace

std::int64_t RunMetrics::max_K_all() const { return max_of(max_K); }
std::int64_t RunMetrics::max_Q_all() const { return max_of(max_Q); }
std::int64_t RunMetrics::max_J_all() const { return max_of(max_J); }

RunMetrics run(const Scenario& sc, PolicyKind kind, const RunOptions& opts) {
  const int n = sc.device_count();
  const double V = opts.v_override.value_or(sc.V);
  const std::uint64_t seed = opts.seed_override.value_or(sc.seed);
  const std::int64_t horizon = opts.horizon_override.value_or(sc.horizon);
  const std::int64_t burn_in = std::min(opts.burn_in, horizon);

  BoundConstants bounds = compute_bounds(sc, V);
  QueueVector state =
      opts.initial_queues ? *opts.initial_queues : QueueVector::zeros(n);

  RunMetrics m;
  m.policy = kind;
  m.V = V;
  m.seed = seed;
  m.horizon = horizon;
  m.avg_K.assign(n, 0.0);
  m.avg_Q.assign(n, 0.0);
  m.avg_J.assign(n, 0.0);
  m.max_K.assign(n, 0);
  m.max_Q.assign(n, 0);
  m.max_J.assign(n, 0);

  double sum_y0 = 0.0;
  std::vector<std::int64_t> sum_K(n, 0), sum_Q(n, 0), sum_J(n, 0);

  for (std::int64_t slot = 0; slot < horizon; ++slot) {
    SlotRealization real = sample_slot(sc, seed, slot);
    DecisionVector dec = decide(kind, sc, state, real, V);
    ActualTransfers act = resolve_actual(state, dec);
    std::vector<std::int64_t> adm = admitted_data(real, dec);
    double y0 = slot_reward(real, dec);
    state = step_queues(state, dec, act, adm);

    bool violated = false;
    for (int i = 0; i < n; ++i) {
      if (static_cast<double>(state.K[i]) > bounds.K_max[i] + 1e-9 ||
          static_cast<double>(state.J[i]) > bounds.K_max[i] + 1e-9 ||
          static_cast<double>(state.Q[i]) > bounds.Q_max[i] + 1e-9)
        violated = true;
      m.max_K[i] = std::max(m.max_K[i], state.K[i]);
      m.max_Q[i] = std::max(m.max_Q[i], state.Q[i]);
      m.max_J[i] = std::max(m.max_J[i], state.J[i]);
    }
    if (violated) ++m.bound_violations;

    if (slot >= burn_in) {
      sum_y0 += y0;
      for (int i = 0; i < n; ++i) {
        sum_K[i] += state.K[i];
        sum_Q[i] += state.Q[i];
        sum_J[i] += state.J[i];
      }
    }
    if (opts.trace_sink) opts.trace_sink(SlotTrace{slot, y0, state, dec});
  }

  const double slots = static_cast<double>(std::max<std::int64_t>(horizon - burn_in, 1));
  m.avg_y0 = sum_y0 / slots;
  for (int i = 0; i < n; ++i) {
    m.avg_K[i] = static_cast<double>(sum_K[i]) / slots;
    m.avg_Q[i] = static_cast<double>(sum_Q[i]) / slots;
    m.avg_J[i] = static_cast<double>(sum_J[i]) / slots;
    m.avg_backlog_total += m.avg_K[i] + m.avg_Q[i] + m.avg_J[i];
  }
  return m;
}

unsigned sweep_thread_cap() {
  if (const char* env = std::getenv("QOI_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<RunMetrics> sweep_v(const Scenario& sc,
                                std::span<const PolicyKind> kinds,
                                std::span<const double> v_values,
                                const RunOptions& opts) {
  struct Task {
    PolicyKind kind;
    double v;
  };
  std::vector<Task> tasks;
  for (PolicyKind k : kinds)
    for (double v : v_values) tasks.push_back({k, v});

  std::vector<RunMetrics> results(tasks.size());
  auto run_task = [&](std::size_t i) {
    RunOptions o = opts;
    o.v_override = tasks[i].v;
    o.trace_sink = nullptr;  // traces are per-run, not per-sweep
    results[i] = run(sc, tasks[i].kind, o);
  };

  unsigned threads =
      std::min<unsigned>(sweep_thread_cap(), static_cast<unsigned>(tasks.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          run_task(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return results;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_summary_header(std::ostream& out) {
  out << "policy,V,seed,avg_y0,avg_backlog_total,max_K,max_Q,max_J,"
         "bound_violations\n";
}

void write_summary_row(std::ostream& out, const RunMetrics& m) {
  out << policy_name(m.policy) << ',' << format_double(m.V) << ',' << m.seed
      << ',' << format_double(m.avg_y0) << ','
      << format_double(m.avg_backlog_total) << ',' << m.max_K_all() << ','
      << m.max_Q_all() << ',' << m.max_J_all() << ',' << m.bound_violations
      << '\n';
}

void write_trace_header(std::ostream& out, int device_count) {
  out << "slot,y0";
  for (int i = 1; i <= device_count; ++i) out << ",K_" << i;
  for (int i = 1; i <= device_count; ++i) out << ",Q_" << i;
  for (int i = 1; i <= device_count; ++i) out << ",J_" << i;
  out << '\n';
}

void write_trace_row(std::ostream& out, const SlotTrace& t) {
  out << t.slot << ',' << format_double(t.y0);
  for (auto v : t.queues.K) out << ',' << v;
  for (auto v : t.queues.Q) out << ',' << v;
  for (auto v : t.queues.J) out << ',' << v;
  out << '\n';
}

}  // namespace qoinet
