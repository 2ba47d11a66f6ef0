#pragma once

#include <cstdint>

namespace densilab {

// Counter-based stream: the i-th draw is a pure function of (key, i), so a
// stream keyed by (seed, j, batch) can be evaluated on any thread.
class CounterRng {
 public:
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
      : key_(mix(mix(mix(seed) ^ stream) ^ (substream * 0xd1b54a32d192ed03ull))) {}

  constexpr std::uint64_t next() { return mix(key_ ^ mix(counter_++)); }

  // Uniform in [0, 1).
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace densilab
