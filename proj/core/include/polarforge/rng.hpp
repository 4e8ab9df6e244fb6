#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace polarforge {

/// Counter-style pseudo random stream built on SplitMix64.
///
/// Substreams are derived from (seed, a, b) key tuples so that every
/// simulation frame owns an independent stream regardless of how frames
/// are distributed over worker threads. The derivation is part of the
/// reproducibility contract: results depend only on the key tuple.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kPhi)) {}

  /// Stream for (seed, a, b), e.g. (master seed, sweep point, frame).
  static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = mix(seed ^ kPhi);
    s = mix(s ^ (a + 0x9e3779b97f4a7c15ull));
    s = mix(s ^ (b + 0xbf58476d1ce4e5b9ull));
    return Rng(FromState{}, s);
  }

  std::uint64_t next_u64() {
    state_ += kPhi;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();  // log(0) guard
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  struct FromState {};
  Rng(FromState, std::uint64_t s) : state_(s) {}

  static constexpr std::uint64_t kPhi = 0x9e3779b97f4a7c15ull;

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace polarforge
