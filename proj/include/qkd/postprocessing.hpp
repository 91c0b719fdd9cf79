#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkd/core_math.hpp"
#include "qkd/rng.hpp"

namespace qkd {

/// One bit per element (values 0 or 1).
using Bits = std::vector<std::uint8_t>;

struct ReconciliationModel {
  double efficiency_f = 1.16;

  void validate() const;
};

struct QberSample {
  Probability q_hat;
  ConfidenceInterval interval;
  std::uint64_t sample_size = 0;
  std::uint64_t errors = 0;
  std::vector<std::size_t> remaining;  // unsampled positions, increasing
};

/// Publicly compares ⌈fraction·n⌉ positions chosen uniformly without
/// replacement. Sampled positions are consumed; only the remainder may enter
/// the key.
QberSample estimate_qber_sample(std::span<const std::uint8_t> alice_key, std::span<const std::uint8_t> bob_key,
                                Probability fraction, Probability confidence, std::uint64_t seed);

/// ⌈f·n·h₂(q)⌉ bits disclosed by error correction.
std::uint64_t reconciliation_leakage(std::uint64_t n, Probability q, const ReconciliationModel& model);

/// Seed for an m×n Toeplitz matrix: T[j,i] = bits[j − i + n − 1].
class ToeplitzSeed {
 public:
  ToeplitzSeed(Bits bits, std::size_t input_len, std::size_t output_len);

  static ToeplitzSeed random(std::size_t input_len, std::size_t output_len, Rng& rng);

  const Bits& bits() const noexcept { return bits_; }
  std::size_t input_len() const noexcept { return input_len_; }
  std::size_t output_len() const noexcept { return output_len_; }

  /// Hex string of the seed bits, most significant bit first, zero-padded to a
  /// whole nibble.
  std::string to_hex() const;
  static ToeplitzSeed from_hex(std::string_view hex, std::size_t input_len, std::size_t output_len);

 private:
  Bits bits_;
  std::size_t input_len_;
  std::size_t output_len_;
};

std::string bits_to_hex(std::span<const std::uint8_t> bits);
Bits bits_from_hex(std::string_view hex, std::size_t bit_count);

/// GF(2) product of the seed's Toeplitz matrix with `input`.
Bits toeplitz_hash(std::span<const std::uint8_t> input, const ToeplitzSeed& seed);

struct KeyAccounting {
  std::uint64_t sifted_len = 0;
  /// Bits whose phase error is bounded by `phase_error`; defaults to the whole
  /// sifted key. Decoy runs set this to the single-photon share.
  std::optional<double> single_photon_len;
  std::uint64_t leak_ec = 0;
  std::uint64_t leak_auth = 128;
  Probability phase_error;
  SecurityBudget budget{1e-10, 1e-10, 1e-10, 1e-10};
  std::uint64_t final_len = 0;
};

/// ℓ = max(0, ⌊n·(1 − h₂(e_ph)) − leak_EC − leak_auth − 2·log₂(1/ε_sec)⌋), capped at n.
std::uint64_t final_key_length(const KeyAccounting& acct);

/// ε_sec + ε_cor + ε_PE + ε_auth.
double epsilon_total(const SecurityBudget& budget);

}  // namespace qkd
