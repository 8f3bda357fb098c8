#include "wl1/rng.hpp"

#include <cmath>
#include <numbers>

namespace wl1 {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 0x1.0p-53;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, const std::uint64_t* path, std::size_t len) {
  std::uint64_t s = mix64(master + kGamma);
  for (std::size_t i = 0; i < len; ++i) s = mix64(s ^ mix64(path[i] + kGamma));
  return s;
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return derive_seed(master, path.begin(), path.size());
}

std::uint64_t SplitMix64::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double SplitMix64::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

double SplitMix64::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;  // (0, 1]
  const double u2 = static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;        // [0, 1)
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

double SplitMix64::next_normal(double sigma) {
  return sigma * next_normal();
}

}  // namespace wl1
