#pragma once

#include <cmath>
#include <cstdint>

namespace mallows {

/// Reproducible random substream addressed by (master_seed, stream_index).
///
/// The 256-bit xoshiro256** state is derived from the address with SplitMix64:
/// one mixing round absorbs the master seed, a second absorbs the stream
/// index, and four further outputs fill the state. Equal addresses replay the
/// identical draw sequence on any thread; distinct indices land on unrelated
/// 256-bit states, so parallel replicas can each own an index and never
/// coordinate.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed), stream_index_(stream_index) {
    std::uint64_t x = master_seed;
    std::uint64_t a = split_mix_next(x);
    x = a ^ (stream_index * 0xD2B74407B1CE6E93ULL + 0x8BB84B93962EACC9ULL);
    for (auto& word : state_) word = split_mix_next(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in the open interval (0,1); exact zeros are resampled.
  double next_unit() {
    for (;;) {
      const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Uniform integer in [0, bound), bound >= 1. Bitmask rejection, no bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t mask = mask_for(bound - 1);
    for (;;) {
      const std::uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t split_mix_next(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t mask_for(std::uint64_t v) {
    v |= v >> 1;
    v |= v >> 2;
    v |= v >> 4;
    v |= v >> 8;
    v |= v >> 16;
    v |= v >> 32;
    return v;
  }

  std::uint64_t state_[4];
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
};

/// Standard normal draw (Box-Muller; the paired draw is discarded).
inline double normal_standard(RngStream& rng) {
  const double u = rng.next_unit();
  const double v = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
}

}  // namespace mallows
