#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qoinet {

// Raised when a scenario or LP instance breaks a structural rule. The message
// names the offending entity and the violated rule.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One reporting format: reward earned and data injected when selected.
struct FormatOption {
  double reward = 0.0;
  std::int64_t data = 0;

  bool operator==(const FormatOption&) const = default;
};

struct DeviceSpec {
  int id = 0;                         // external device id, 1-based
  std::vector<FormatOption> formats;  // index 0 is the blank format (0, 0)
  std::int64_t s_q_max = 0;           // cap on per-slot K -> Q internal moves
  std::int64_t s_j_max = 0;           // cap on per-slot K -> J internal moves
  double observe_prob = 1.0;

  std::int64_t max_data() const;
  double max_reward() const;
};

struct RateDistribution {
  struct Entry {
    std::int64_t best_rate = 0;
    double probability = 0.0;
  };
  std::vector<Entry> entries;

  std::int64_t max_rate() const;
  double mean_rate() const;
};

struct ChannelSpec {
  enum class Kind { Uplink, Relay };
  Kind kind = Kind::Uplink;
  int src = 0;  // device id
  int dst = 0;  // device id for relay links; 0 (the receiver station) for uplink
  RateDistribution rates;
};

// Dense N x N table of per-ordered-pair values; entries stay zero where no
// relay channel exists, and the diagonal is always zero.
template <typename T>
class PairTable {
 public:
  PairTable() = default;
  explicit PairTable(int n) : n_(n), v_(static_cast<std::size_t>(n) * n) {}

  T& at(int src, int dst) { return v_[idx(src, dst)]; }
  const T& at(int src, int dst) const { return v_[idx(src, dst)]; }
  int size() const { return n_; }

  bool operator==(const PairTable&) const = default;

 private:
  std::size_t idx(int src, int dst) const {
    return static_cast<std::size_t>(src) * n_ + dst;
  }

  int n_ = 0;
  std::vector<T> v_;
};

// Static description of a network instance. Immutable after construction.
struct Scenario {
  std::vector<DeviceSpec> devices;  // sorted by id
  std::vector<ChannelSpec> channels;
  double event_prob = 0.0;
  double V = 0.0;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;

  int device_count() const { return static_cast<int>(devices.size()); }
  int device_pos(int id) const;  // position in devices, -1 if unknown

  // Lookups take device positions (0-based), not ids.
  const RateDistribution* uplink(int pos) const;
  const RateDistribution* relay(int src_pos, int dst_pos) const;
  std::int64_t uplink_max(int pos) const;
  std::int64_t relay_max(int src_pos, int dst_pos) const;
  std::int64_t relay_in_max(int pos) const;   // sum of a_max over sources
  std::int64_t relay_out_max(int pos) const;  // sum of a_max over destinations

  // Throws ValidationError naming the violated rule.
  void validate() const;
};

// One slot's randomness: event/observation outcome and best channel rates.
struct SlotRealization {
  bool event_occurred = false;
  std::vector<std::vector<FormatOption>> options;  // [device position][format]
  std::vector<std::int64_t> uplink_best;
  PairTable<std::int64_t> relay_best;

  bool operator==(const SlotRealization&) const = default;
};

// Per-device backlogs: input (K), uplink (Q), relay (J).
struct QueueVector {
  std::vector<std::int64_t> K, Q, J;

  static QueueVector zeros(int n) {
    QueueVector q;
    q.K.assign(n, 0);
    q.Q.assign(n, 0);
    q.J.assign(n, 0);
    return q;
  }
  int device_count() const { return static_cast<int>(K.size()); }
  std::int64_t total() const;

  bool operator==(const QueueVector&) const = default;
};

// One slot's requested actions.
struct DecisionVector {
  std::vector<int> format;
  std::vector<std::int64_t> s_q, s_j, u;
  PairTable<std::int64_t> a;

  static DecisionVector zeros(int n) {
    DecisionVector d;
    d.format.assign(n, 0);
    d.s_q.assign(n, 0);
    d.s_j.assign(n, 0);
    d.u.assign(n, 0);
    d.a = PairTable<std::int64_t>(n);
    return d;
  }
  int device_count() const { return static_cast<int>(format.size()); }

  bool operator==(const DecisionVector&) const = default;
};

// Data injected per device by the chosen formats.
std::vector<std::int64_t> admitted_data(const SlotRealization& slot,
                                        const DecisionVector& decision);

// Total information quality y0 earned this slot by the chosen formats.
double slot_reward(const SlotRealization& slot, const DecisionVector& decision);

}  // namespace qoinet
