#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace matchsim {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Bit pattern of rho with -0.0 folded onto +0.0.
inline std::uint64_t rho_bits(double rho) {
  return std::bit_cast<std::uint64_t>(rho == 0.0 ? 0.0 : rho);
}

/// Seed for one sweep cell. Each coordinate is folded in with xor followed by mix64:
///   h = mix64(master); h = mix64(h ^ n); h = mix64(h ^ k);
///   h = mix64(h ^ bits(rho)); h = mix64(h ^ trial)
inline std::uint64_t cell_seed(std::uint64_t master_seed, std::uint64_t n, std::uint64_t k,
                               double rho, std::uint64_t trial) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ n);
  h = mix64(h ^ k);
  h = mix64(h ^ rho_bits(rho));
  return mix64(h ^ trial);
}

/// Seeded random stream. The engine's output sequence is fixed by the C++ standard,
/// and uniform doubles are built from raw bits rather than std distributions, whose
/// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace matchsim
