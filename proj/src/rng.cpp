#include "opclim/rng.hpp"

#include <cmath>
#include <numbers>

namespace opclim {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t run_seed, StreamPurpose purpose,
                          std::uint64_t year, std::uint64_t index) noexcept {
  std::uint64_t h = mix64(run_seed + static_cast<std::uint64_t>(purpose) * kGolden);
  h = mix64(h + (year + 1) * kGolden);
  return mix64(h + (index + 1) * kGolden);
}

SplitMix64::result_type SplitMix64::operator()() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double uniform01(SplitMix64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_open01(SplitMix64& rng) noexcept {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

__extension__ using u128 = unsigned __int128;

std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t n) noexcept {
  const u128 product = static_cast<u128>(rng()) * n;
  return static_cast<std::uint64_t>(product >> 64);
}

double standard_normal(SplitMix64& rng) noexcept {
  const double u1 = uniform_open01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace opclim
