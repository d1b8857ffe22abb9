#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qoinet/dynamics.hpp"
#include "qoinet/policy.hpp"

namespace qoinet {

struct SlotTrace {
  std::int64_t slot = 0;
  double y0 = 0.0;
  const QueueVector& queues;      // state after the update
  const DecisionVector& decision;
};

struct RunMetrics {
  PolicyKind policy = PolicyKind::Quadratic;
  double V = 0.0;
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  double avg_y0 = 0.0;
  std::vector<double> avg_K, avg_Q, avg_J;
  double avg_backlog_total = 0.0;
  std::vector<std::int64_t> max_K, max_Q, max_J;
  std::int64_t bound_violations = 0;

  std::int64_t max_K_all() const;
  std::int64_t max_Q_all() const;
  std::int64_t max_J_all() const;
};

struct RunOptions {
  std::optional<double> v_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::int64_t> horizon_override;
  std::optional<QueueVector> initial_queues;  // default: all zero
  std::int64_t burn_in = 0;                   // slots excluded from averages
  std::function<void(const SlotTrace&)> trace_sink;
};

// Executes the slotted loop: sample -> decide -> resolve -> step -> record.
// Deterministic given (scenario, kind, options). bound_violations counts
// slots where the state exceeds the deterministic worst-case bounds; a
// nonzero count under the quadratic policy from zero queues indicates a bug.
RunMetrics run(const Scenario& sc, PolicyKind kind, const RunOptions& opts = {});

// One run per (kind, V) with a shared seed. Runs fan out across threads up
// to the QOI_THREADS environment cap; results keep the (kind, V) order.
std::vector<RunMetrics> sweep_v(const Scenario& sc,
                                std::span<const PolicyKind> kinds,
                                std::span<const double> v_values,
                                const RunOptions& opts = {});

unsigned sweep_thread_cap();

// CSV emission. Schemas are documented in the README and pinned by tests.
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const RunMetrics& m);
void write_trace_header(std::ostream& out, int device_count);
void write_trace_row(std::ostream& out, const SlotTrace& t);

// Shortest round-trip decimal form; used for every CSV value so identical
// commands emit byte-identical files.
std::string format_double(double v);

}  // namespace qoinet
