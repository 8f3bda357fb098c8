#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace wl1 {

/// Stream identifier recorded next to any artifact whose bytes depend on the
/// generator. Bump the suffix if the draw convention ever changes.
inline constexpr std::string_view kRngAlgorithm = "splitmix64+boxmuller:1";

/// SplitMix64 finalizer. Bijective; also used as the seed-derivation hash.
std::uint64_t mix64(std::uint64_t z);

/// Derives an independent child seed from a master seed and an integer path,
/// e.g. derive_seed(master, {n, m, trial}). Order-sensitive, collision-resistant
/// enough for disjoint experiment coordinates, and platform-stable.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);
std::uint64_t derive_seed(std::uint64_t master, const std::uint64_t* path, std::size_t len);

/// Counter-based SplitMix64 with Box-Muller normals. Every draw sequence is a
/// pure function of the seed, identical across platforms and compilers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_uniform();

  /// Unbiased integer on [0, bound) via 128-bit multiply-shift; bound >= 1.
  std::uint64_t next_below(std::uint64_t bound);

  /// Standard normal via Box-Muller. Draw convention: each pair consumes two
  /// u64 (u1 in (0,1], u2 in [0,1)); cosine branch first, sine branch cached.
  double next_normal();

  /// Normal with standard deviation sigma >= 0 (sigma = 0 yields exact zeros
  /// while still consuming the underlying draws, keeping streams aligned).
  double next_normal(double sigma);

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace wl1
