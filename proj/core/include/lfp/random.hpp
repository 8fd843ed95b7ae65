#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lfp {

/// SplitMix64 finalizer; a bijection on 64-bit words.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for an independent sub-stream identified by a path of integers,
/// e.g. derive_seed(seed, {trial, channel}).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed,
                                        std::initializer_list<std::uint64_t> path) noexcept;

/// Seeded generator with portable uniform and normal variates.
///
/// std::mt19937_64 output is fully specified by the standard; the uniform
/// mapping and the Box-Muller transform are done here so results do not depend
/// on the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace lfp
