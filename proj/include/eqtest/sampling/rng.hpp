#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace eqt {

/// Deterministic random stream identified by (seed, stream).
///
/// Draws use the standard library distributions over mt19937_64, so a given
/// (seed, stream) reproduces the same sequence on a given toolchain.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform on {0, ..., n-1}; n > 0.
  std::size_t uniform_index(std::size_t n);
  double normal(double mean = 0.0, double stddev = 1.0);
  double uniform(double lo, double hi);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Order-sensitive hash of a base seed and coordinates; used to give every
/// experiment cell and replicate an independent, re-runnable seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coordinates) noexcept;

}  // namespace eqt
