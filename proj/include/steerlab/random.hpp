#pragma once

#include <cstdint>
#include <random>

namespace steerlab {

/// Deterministic random source: std::mt19937_64 with uniform and Gaussian
/// variates derived from raw 64-bit outputs, so sequences are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();
  int bit() { return static_cast<int>(engine_() >> 63); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the independent stream for item `index` under `master`. Depends
/// only on its arguments, so parallel execution order does not matter.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace steerlab
