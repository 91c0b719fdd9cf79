#pragma once

#include <cstdint>
#include <random>

namespace qkd {

/// Logical roles. Each role draws from its own stream so consuming more
/// numbers in one role never shifts another role's sequence.
enum class Stream : std::uint64_t {
  alice_bits = 1,
  alice_bases = 2,
  bob_bases = 3,
  channel = 4,
  sampling = 5,
  alice_intensity = 6,
  bob_outcomes = 7,
  cv_modulation = 8,
  cv_noise = 9,
  seeds = 10,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream `role` of a session seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, Stream role) noexcept;

/// Deterministic, cross-platform random source. The engine is the standard
/// mt19937_64; distributions are implemented here because the standard
/// library distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream role) : engine_(stream_seed(seed, role)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via the Box–Muller transform (the spare variate is cached).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qkd
