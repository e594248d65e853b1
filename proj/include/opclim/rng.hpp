#pragma once

#include <cstdint>
#include <limits>

namespace opclim {

// SplitMix64 output finalizer. A bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Seed of an independent substream identified by (purpose, year, index)
// within one run. Computed as a chain of mix64 calls so that every key
// perturbs all output bits.
enum class StreamPurpose : std::uint64_t { init = 1, update = 2, vital = 3 };
std::uint64_t stream_seed(std::uint64_t run_seed, StreamPurpose purpose,
                          std::uint64_t year, std::uint64_t index) noexcept;

// SplitMix64 generator (Steele, Lea & Flood 2014). Satisfies
// UniformRandomBitGenerator. Chosen over the <random> engines and
// distributions because the latter are not bit-reproducible across
// standard library implementations, and because seeding is O(1), which
// the per-agent substreams need.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

 private:
  std::uint64_t state_;
};

// Every helper below documents how many generator draws it consumes.

// [0, 1) with 53 random bits. One draw.
double uniform01(SplitMix64& rng) noexcept;
// (0, 1), never returns an endpoint. One draw.
double uniform_open01(SplitMix64& rng) noexcept;
// [0, n) by 128-bit multiply-high. One draw, bias below n / 2^64.
std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t n) noexcept;
// Standard normal by Box-Muller (cosine branch). Two draws.
double standard_normal(SplitMix64& rng) noexcept;

}  // namespace opclim
