#pragma once

#include <cstdint>
#include <vector>

namespace cdrum {

// Counter-based pseudo-random stream: output i is splitmix64 applied to
// seed + i * golden-ratio increment. Streams derived from (seed, tags...)
// are independent and reproducible across platforms, which keeps every
// generated fixture re-derivable from its seed alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : state_(seed) {}

  // Derives a child stream for a tagged subtask (agent index, trial index...).
  CounterRng child(std::uint64_t tag) const {
    return CounterRng(mix(state_ ^ (0x9e3779b97f4a7c15ULL + mix(tag))));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0,1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) via rejection-free scaling; bound <= 2^32.
  std::uint32_t next_below(std::uint32_t bound) {
    return static_cast<std::uint32_t>((next_u64() >> 32) * std::uint64_t(bound) >> 32);
  }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Index draw from nonnegative weights (need not be normalized).
  std::size_t next_weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = next_unit() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cdrum
