#include "qoinet/sampling.hpp"

namespace qoinet {

std::int64_t sample_rate(const RateDistribution& dist, SplitMix64& rng) {
  double u = rng.next_unit();
  double cum = 0.0;
  for (const auto& e : dist.entries) {
    cum += e.probability;
    if (u < cum) return e.best_rate;
  }
  return dist.entries.back().best_rate;
}

SlotRealization sample_slot(const Scenario& sc, std::uint64_t seed,
                            std::uint64_t slot) {
  const int n = sc.device_count();
  SplitMix64 rng = slot_stream(seed, slot);

  SlotRealization out;
  out.event_occurred = rng.next_unit() < sc.event_prob;
  out.options.resize(n);
  out.uplink_best.assign(n, 0);
  out.relay_best = PairTable<std::int64_t>(n);

  for (int i = 0; i < n; ++i) {
    const DeviceSpec& dev = sc.devices[i];
    bool observed =
        out.event_occurred && rng.next_unit() < dev.observe_prob;
    if (observed) {
      out.options[i] = dev.formats;
    } else {
      out.options[i].assign(dev.formats.size(), FormatOption{});
    }
  }

  for (int i = 0; i < n; ++i) {
    if (const RateDistribution* d = sc.uplink(i))
      out.uplink_best[i] = sample_rate(*d, rng);
  }
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      if (s == d) continue;
      if (const RateDistribution* dist = sc.relay(s, d))
        out.relay_best.at(s, d) = sample_rate(*dist, rng);
    }
  }
  return out;
}

}  // namespace qoinet
