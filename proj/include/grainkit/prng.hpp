#pragma once

#include <cstdint>

namespace grainkit {

// SplitMix64 output function. Used to mix seeds, never as a stream.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed of the generator for one 8x8 grain block:
//   s = mix64(mix64(mix64(master) ^ frame) ^ (component << 48 | block_y << 24 | block_x))
// Every block has its own substream, so blocks can be processed in any order
// or in parallel with identical results.
constexpr std::uint64_t block_seed(std::uint64_t master_seed, std::uint32_t frame_index, int component, int block_y,
                                   int block_x) {
  const std::uint64_t position = (static_cast<std::uint64_t>(component) << 48) |
                                 (static_cast<std::uint64_t>(block_y & 0xFFFFFF) << 24) |
                                 static_cast<std::uint64_t>(block_x & 0xFFFFFF);
  return mix64(mix64(mix64(master_seed) ^ frame_index) ^ position);
}

// xorshift64* (Vigna 2016): 64-bit state, multiplier 0x2545F4914F6CDD1D.
class GrainRng {
 public:
  explicit GrainRng(std::uint64_t seed) : state_(seed != 0 ? seed : 0x853C49E6748FEA9Bull) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  // Uniform integer in [0, bound) from the upper 32 output bits
  // (multiply-shift; bias below 2^-25 for the bounds used here).
  std::uint32_t next_below(std::uint32_t bound) {
    const std::uint64_t r = next() >> 32;
    return static_cast<std::uint32_t>((r * bound) >> 32);
  }

  // Uniform double in (0, 1].
  double next_unit() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  // Standard normal via the Box-Muller transform; both outputs of a pair are used.
  double next_gaussian();

  std::uint64_t state() const { return state_; }
  bool operator==(const GrainRng&) const = default;

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace grainkit
