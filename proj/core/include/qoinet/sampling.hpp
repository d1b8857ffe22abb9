#pragma once

#include <cstdint>

#include "qoinet/model.hpp"

namespace qoinet {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic 64-bit generator (splitmix64). Chosen for portability: the
// output sequence depends only on the state, never on the platform or
// standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53 mantissa bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Per-slot stream keyed by (seed, slot): realizations are a pure function of
// (scenario, seed, slot index), so replay never depends on how many draws an
// earlier slot consumed.
inline SplitMix64 slot_stream(std::uint64_t seed, std::uint64_t slot) {
  return SplitMix64(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ mix64(~slot));
}

std::int64_t sample_rate(const RateDistribution& dist, SplitMix64& rng);

// Draw order within a slot: event, then per-device observation ascending by
// position (event slots only), then uplink rates ascending by position, then
// relay rates ascending by (src, dst).
SlotRealization sample_slot(const Scenario& sc, std::uint64_t seed,
                            std::uint64_t slot);

inline SlotRealization sample_slot(const Scenario& sc, std::uint64_t slot) {
  return sample_slot(sc, sc.seed, slot);
}

}  // namespace qoinet
