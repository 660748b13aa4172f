#pragma once

#include <array>
#include <cstdint>

namespace smoothwalk {

// splitmix64 finalizer. Also used as the seed-mixing primitive so that
// derived streams (per walk, per trial, per subsystem) are decorrelated.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic combination of a user seed with up to two stream tags.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag_a,
                              std::uint64_t tag_b = 0) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ (tag_a + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
  h = mix64(h ^ (tag_b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
  return h;
}

// Fixed tags for the independent random streams in the pipeline.
namespace seed_tag {
inline constexpr std::uint64_t kWalk = 0x57414c4bull;      // walk generation
inline constexpr std::uint64_t kSampler = 0x534d504cull;   // pair acceptance
inline constexpr std::uint64_t kTrainInit = 0x494e4954ull; // matrix init
inline constexpr std::uint64_t kNegative = 0x4e454753ull;  // negative draws
inline constexpr std::uint64_t kSplit = 0x53504c54ull;     // edge removal
inline constexpr std::uint64_t kSynth = 0x53594e48ull;     // graph generators
inline constexpr std::uint64_t kTrial = 0x5452494cull;     // eval repetitions
}  // namespace seed_tag

// xoshiro256++ with splitmix64 seeding. Self-contained so that sequences
// are reproducible across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += 0x9e3779b97f4a7c15ull;
      word = mix64(s);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace smoothwalk
