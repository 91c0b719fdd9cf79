#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkd/channel.hpp"
#include "qkd/postprocessing.hpp"

namespace qkd {

enum class Mode { monte_carlo, analytic };

enum class Basis : std::uint8_t { Z = 0, X = 1 };

inline constexpr double kBb84QberThreshold = 0.11;
inline constexpr std::string_view kAbortInsecureChannel = "insecure channel";
inline constexpr std::string_view kAbortNoBellViolation = "Bell violation not detected";

/// Per-pulse record of a prepare-and-measure run. `detections[i]` is −1 when
/// Bob's detector stayed dark, else the bit he recorded.
struct RawSession {
  std::uint64_t pulses = 0;
  Bits alice_bits;
  Bits alice_bases;
  Bits bob_bases;
  std::vector<std::int8_t> detections;
  std::uint64_t seed = 0;
};

struct SiftedKey {
  std::vector<std::size_t> kept_indices;
  Bits alice_key;
  Bits bob_key;
};

struct SessionResult {
  Probability sift_fraction;
  Probability qber_estimate;
  ConfidenceInterval qber_interval;
  bool aborted = false;
  std::string abort_reason;
  std::optional<double> asymptotic_rate;  // bits per detected sifted-slot, floored at 0
  double signed_rate = 0.0;               // q·[1 − 2h₂(Q̂)] before flooring
  std::uint64_t raw_key_bits = 0;         // sifted, detected and not consumed by sampling
  std::uint64_t detected = 0;
  Probability detection_probability;
};

/// Draws bits, bases, clicks and errors from independent streams. Each pulse
/// clicks with the modeled p_det; a click in the matching basis is wrong with
/// the modeled QBER, a click in the other basis yields a uniform bit.
RawSession generate_bb84_session(const LinkModel& link, std::uint64_t pulses, std::uint64_t seed);

/// Keeps the positions where the bases agree, in order.
SiftedKey sift(std::span<const std::uint8_t> alice_bases, std::span<const std::uint8_t> bob_bases,
               std::span<const std::uint8_t> alice_bits, std::span<const std::uint8_t> bob_bits);

struct Bb84Options {
  Probability sample_fraction{0.1};
  Probability confidence{0.99};
};

SessionResult run_bb84(const LinkModel& link, std::uint64_t pulses, std::uint64_t seed, Mode mode,
                       const Bb84Options& options = {});

// --- SARG04 ---------------------------------------------------------------

enum class QubitState : std::uint8_t { Z0, Z1, XPlus, XMinus };

struct CandidatePair {
  QubitState first;
  QubitState second;
};

Basis basis_of(QubitState s) noexcept;

/// Outcome index of `s` in its own basis: 0 for |0⟩ and |+⟩, 1 for |1⟩ and |−⟩.
std::uint8_t value_of(QubitState s) noexcept;

/// Bit carried by a state under pair announcement: 0 for Z states, 1 for X states.
std::uint8_t sarg04_bit(QubitState s) noexcept;

/// Result of Bob's exclusion test against the announced pair. A conclusive
/// outcome is orthogonal to exactly one candidate; the bit is the other
/// candidate's. Returns nullopt when inconclusive.
std::optional<std::uint8_t> sarg04_sift(QubitState sent, CandidatePair announced, Basis bob_basis,
                                        std::uint8_t bob_outcome);

/// Ideal projective measurement of `s` in `basis`.
std::uint8_t measure_ideal(QubitState s, Basis basis, Rng& rng);

// --- E91 / CHSH -------------------------------------------------------------

struct CorrelationCell {
  double value = 0.0;  // E in [−1, 1]
  std::uint64_t samples = 0;
};

/// Cells are indexed alice_setting * 2 + bob_setting, with setting 0 = a/b and
/// 1 = a′/b′.
struct ChshStats {
  std::array<std::optional<CorrelationCell>, 4> cells;
  double S = 0.0;

  void set(int alice_setting, int bob_setting, CorrelationCell cell) { cells[alice_setting * 2 + bob_setting] = cell; }
  const std::optional<CorrelationCell>& at(int alice_setting, int bob_setting) const {
    return cells[alice_setting * 2 + bob_setting];
  }
};

/// Sample correlation ⟨AB⟩ of ±1 outcome records.
CorrelationCell correlation(std::span<const std::int8_t> alice, std::span<const std::int8_t> bob);

/// E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′).
double chsh_S(const ChshStats& stats);

struct ChshAngles {
  double a = 0.0, a_prime = 45.0, b = 22.5, b_prime = 157.5;  // degrees
};

struct E91Result {
  ChshStats stats;
  bool aborted = false;
};

/// V·cos[2(θ_a − θ_b)] for the Φ⁺ polarization pair.
double e91_correlation(double theta_a_deg, double theta_b_deg, Probability visibility);

/// `pairs_per_cell` entangled pairs are measured for each of the four setting
/// combinations in Monte Carlo mode. Aborts iff S ≤ 2.
E91Result simulate_e91(const ChshAngles& angles, Probability visibility, std::uint64_t pairs_per_cell,
                       std::uint64_t seed, Mode mode);

}  // namespace qkd
