#pragma once

#include <cstdint>
#include <random>

static_assert(sizeof(unsigned long) == 8, "GMP word import assumes 64-bit unsigned long");

#include "noncollide/exact.hpp"

namespace noncollide {

using Engine = std::mt19937_64;

/// Independent engine for path `stream` of a run seeded with `seed`. Results
/// depend only on (seed, stream), never on scheduling.
inline Engine stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x6e6f6e63u};
  return Engine(seq);
}

/// Uniform integer in [0, bound) by rejection on 64-bit words; bound > 0.
inline BigInt uniform_below(const BigInt& bound, Engine& rng) {
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const std::size_t spare = words * 64 - bits;
  for (;;) {
    BigInt r(0);
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t word = rng();
      if (w == 0 && spare > 0) word >>= spare;
      mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), 64);
      mpz_add_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(word));
    }
    if (r < bound) return r;
  }
}

}  // namespace noncollide
