#include "qoinet/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qoinet {

namespace {

std::string dev_label(int id) { return "device " + std::to_string(id); }

}  // namespace

std::int64_t DeviceSpec::max_data() const {
  std::int64_t m = 0;
  for (const auto& f : formats) m = std::max(m, f.data);
  return m;
}

double DeviceSpec::max_reward() const {
  double m = 0.0;
  for (const auto& f : formats) m = std::max(m, f.reward);
  return m;
}

std::int64_t RateDistribution::max_rate() const {
  std::int64_t m = 0;
  for (const auto& e : entries) m = std::max(m, e.best_rate);
  return m;
}

double RateDistribution::mean_rate() const {
  double m = 0.0;
  for (const auto& e : entries) m += static_cast<double>(e.best_rate) * e.probability;
  return m;
}

int Scenario::device_pos(int id) const {
  for (int i = 0; i < device_count(); ++i)
    if (devices[i].id == id) return i;
  return -1;
}

const RateDistribution* Scenario::uplink(int pos) const {
  int id = devices[pos].id;
  for (const auto& ch : channels)
    if (ch.kind == ChannelSpec::Kind::Uplink && ch.src == id) return &ch.rates;
  return nullptr;
}

const RateDistribution* Scenario::relay(int src_pos, int dst_pos) const {
  int src = devices[src_pos].id;
  int dst = devices[dst_pos].id;
  for (const auto& ch : channels)
    if (ch.kind == ChannelSpec::Kind::Relay && ch.src == src && ch.dst == dst)
      return &ch.rates;
  return nullptr;
}

std::int64_t Scenario::uplink_max(int pos) const {
  const RateDistribution* d = uplink(pos);
  return d ? d->max_rate() : 0;
}

std::int64_t Scenario::relay_max(int src_pos, int dst_pos) const {
  const RateDistribution* d = relay(src_pos, dst_pos);
  return d ? d->max_rate() : 0;
}

std::int64_t Scenario::relay_in_max(int pos) const {
  std::int64_t sum = 0;
  for (int m = 0; m < device_count(); ++m)
    if (m != pos) sum += relay_max(m, pos);
  return sum;
}

std::int64_t Scenario::relay_out_max(int pos) const {
  std::int64_t sum = 0;
  for (int m = 0; m < device_count(); ++m)
    if (m != pos) sum += relay_max(pos, m);
  return sum;
}

void Scenario::validate() const {
  if (devices.empty()) throw ValidationError("scenario has no devices");
  if (!(event_prob >= 0.0 && event_prob <= 1.0))
    throw ValidationError("event_prob must lie in [0, 1]");
  if (!(V >= 0.0)) throw ValidationError("V must be non-negative");
  if (horizon < 0) throw ValidationError("horizon must be non-negative");

  for (std::size_t i = 0; i < devices.size(); ++i) {
    const DeviceSpec& d = devices[i];
    if (d.id <= 0) throw ValidationError(dev_label(d.id) + ": id must be positive");
    for (std::size_t k = i + 1; k < devices.size(); ++k)
      if (devices[k].id == d.id)
        throw ValidationError(dev_label(d.id) + ": duplicate device id");
    if (!(d.observe_prob >= 0.0 && d.observe_prob <= 1.0))
      throw ValidationError(dev_label(d.id) + ": observe_prob must lie in [0, 1]");
    if (d.s_q_max < 0 || d.s_j_max < 0)
      throw ValidationError(dev_label(d.id) + ": shift caps must be non-negative");
    if (d.formats.empty())
      throw ValidationError(dev_label(d.id) + ": needs at least the blank format");
    if (d.formats[0].data != 0 || d.formats[0].reward != 0.0)
      throw ValidationError(dev_label(d.id) + ": format 0 must be blank (0 0)");
    for (std::size_t f = 0; f < d.formats.size(); ++f) {
      if (d.formats[f].data < 0 || d.formats[f].reward < 0.0)
        throw ValidationError(dev_label(d.id) + ": format " + std::to_string(f) +
                              " must be non-negative");
      if (f > 0 && d.formats[f].data == 0)
        throw ValidationError(dev_label(d.id) + ": format " + std::to_string(f) +
                              " has zero data; non-blank formats must carry data");
    }
  }

  for (std::size_t i = 0; i < channels.size(); ++i) {
    const ChannelSpec& ch = channels[i];
    bool is_relay = ch.kind == ChannelSpec::Kind::Relay;
    std::string label = std::string("channel ") + (is_relay ? "relay " : "uplink ") +
                        std::to_string(ch.src) +
                        (is_relay ? " " + std::to_string(ch.dst) : std::string());
    if (device_pos(ch.src) < 0)
      throw ValidationError(label + ": unknown device " + std::to_string(ch.src));
    if (is_relay) {
      if (ch.src == ch.dst) throw ValidationError(label + ": self-relay forbidden");
      if (device_pos(ch.dst) < 0)
        throw ValidationError(label + ": unknown device " + std::to_string(ch.dst));
    }
    for (std::size_t k = i + 1; k < channels.size(); ++k)
      if (channels[k].kind == ch.kind && channels[k].src == ch.src &&
          (!is_relay || channels[k].dst == ch.dst))
        throw ValidationError(label + ": duplicate channel");
    if (ch.rates.entries.empty())
      throw ValidationError(label + ": empty rate distribution");
    double total = 0.0;
    for (const auto& e : ch.rates.entries) {
      if (e.best_rate < 0) throw ValidationError(label + ": negative rate");
      if (e.probability < 0.0) throw ValidationError(label + ": negative probability");
      total += e.probability;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw ValidationError(label + ": probabilities sum to " + std::to_string(total) +
                            ", expected 1");
  }

  // Internal shifts must cover what the channels can carry.
  for (int n = 0; n < device_count(); ++n) {
    const DeviceSpec& d = devices[n];
    if (d.s_q_max < uplink_max(n))
      throw ValidationError(dev_label(d.id) +
                            ": shift sufficiency violated: s_q_max (" +
                            std::to_string(d.s_q_max) + ") < max uplink rate (" +
                            std::to_string(uplink_max(n)) + ")");
    if (d.s_j_max < relay_out_max(n))
      throw ValidationError(dev_label(d.id) +
                            ": shift sufficiency violated: s_j_max (" +
                            std::to_string(d.s_j_max) +
                            ") < total max outgoing relay rate (" +
                            std::to_string(relay_out_max(n)) + ")");
  }
}

std::int64_t QueueVector::total() const {
  std::int64_t sum = 0;
  for (auto v : K) sum += v;
  for (auto v : Q) sum += v;
  for (auto v : J) sum += v;
  return sum;
}

std::vector<std::int64_t> admitted_data(const SlotRealization& slot,
                                        const DecisionVector& decision) {
  std::vector<std::int64_t> d(decision.format.size());
  for (std::size_t n = 0; n < d.size(); ++n)
    d[n] = slot.options[n][decision.format[n]].data;
  return d;
}

double slot_reward(const SlotRealization& slot, const DecisionVector& decision) {
  double y0 = 0.0;
  for (std::size_t n = 0; n < decision.format.size(); ++n)
    y0 += slot.options[n][decision.format[n]].reward;
  return y0;
}

}  // namespace qoinet
