#include "qkd/dv_protocols.hpp"

#include <cmath>
#include <numbers>

namespace qkd {

RawSession generate_bb84_session(const LinkModel& link, std::uint64_t pulses, std::uint64_t seed) {
  const QberModel model = qber_model(link);

  RawSession s;
  s.pulses = pulses;
  s.seed = seed;
  s.alice_bits.resize(pulses);
  s.alice_bases.resize(pulses);
  s.bob_bases.resize(pulses);
  s.detections.resize(pulses);

  Rng bits(seed, Stream::alice_bits);
  Rng alice_bases(seed, Stream::alice_bases);
  Rng bob_bases(seed, Stream::bob_bases);
  Rng channel(seed, Stream::channel);

  for (std::uint64_t i = 0; i < pulses; ++i) {
    s.alice_bits[i] = bits.bit();
    s.alice_bases[i] = alice_bases.bit();
    s.bob_bases[i] = bob_bases.bit();
    if (!channel.bernoulli(model.p_det)) {
      s.detections[i] = -1;
      continue;
    }
    if (s.alice_bases[i] == s.bob_bases[i]) {
      const bool error = channel.bernoulli(model.qber);
      s.detections[i] = static_cast<std::int8_t>(s.alice_bits[i] ^ static_cast<std::uint8_t>(error));
    } else {
      s.detections[i] = static_cast<std::int8_t>(channel.bit());
    }
  }
  return s;
}

SiftedKey sift(std::span<const std::uint8_t> alice_bases, std::span<const std::uint8_t> bob_bases,
               std::span<const std::uint8_t> alice_bits, std::span<const std::uint8_t> bob_bits) {
  const std::size_t n = alice_bases.size();
  require(bob_bases.size() == n && alice_bits.size() == n && bob_bits.size() == n, Errc::length_mismatch,
          "sift: sequence lengths differ");
  SiftedKey out;
  for (std::size_t i = 0; i < n; ++i) {
    if (alice_bases[i] != bob_bases[i]) continue;
    out.kept_indices.push_back(i);
    out.alice_key.push_back(alice_bits[i]);
    out.bob_key.push_back(bob_bits[i]);
  }
  return out;
}

namespace {

void finish_rate(SessionResult& r) {
  r.aborted = r.qber_estimate.value() > kBb84QberThreshold;
  r.signed_rate = r.sift_fraction.value() * (1.0 - 2.0 * binary_entropy(r.qber_estimate));
  if (r.aborted) {
    r.abort_reason = std::string(kAbortInsecureChannel);
    r.asymptotic_rate.reset();
  } else {
    r.asymptotic_rate = std::max(0.0, r.signed_rate);
  }
}

}  // namespace

SessionResult run_bb84(const LinkModel& link, std::uint64_t pulses, std::uint64_t seed, Mode mode,
                       const Bb84Options& options) {
  const double fraction = options.sample_fraction.value();
  require(fraction > 0.0 && fraction < 1.0, Errc::domain, "run_bb84: sample fraction must lie in (0,1)");
  const QberModel model = qber_model(link);

  SessionResult r;
  if (mode == Mode::analytic) {
    r.sift_fraction = 0.5;
    r.qber_estimate = model.qber;
    r.qber_interval = {model.qber, model.qber, options.confidence};
    r.detection_probability = model.p_det;
    const double detected_sifted = static_cast<double>(pulses) * 0.5 * model.p_det;
    r.detected = static_cast<std::uint64_t>(std::llround(static_cast<double>(pulses) * model.p_det));
    r.raw_key_bits = static_cast<std::uint64_t>(std::llround(detected_sifted * (1.0 - fraction)));
    finish_rate(r);
    return r;
  }

  require(pulses >= 100, Errc::too_few_samples, "run_bb84: Monte Carlo mode needs at least 100 pulses");
  const RawSession session = generate_bb84_session(link, pulses, seed);

  Bits bob_bits(pulses);
  std::uint64_t detected = 0;
  for (std::uint64_t i = 0; i < pulses; ++i) {
    if (session.detections[i] >= 0) {
      bob_bits[i] = static_cast<std::uint8_t>(session.detections[i]);
      ++detected;
    }
  }
  const SiftedKey sifted = sift(session.alice_bases, session.bob_bases, session.alice_bits, bob_bits);

  // Undetected slots carry no key material even when the bases agree.
  Bits alice_raw, bob_raw;
  for (std::size_t k = 0; k < sifted.kept_indices.size(); ++k) {
    if (session.detections[sifted.kept_indices[k]] < 0) continue;
    alice_raw.push_back(sifted.alice_key[k]);
    bob_raw.push_back(sifted.bob_key[k]);
  }
  require(alice_raw.size() >= 10, Errc::too_few_samples, "run_bb84: sifted key too short to sample");

  const QberSample sample = estimate_qber_sample(alice_raw, bob_raw, options.sample_fraction, options.confidence,
                                                 stream_seed(seed, Stream::sampling));
  r.sift_fraction = static_cast<double>(sifted.kept_indices.size()) / static_cast<double>(pulses);
  r.qber_estimate = sample.q_hat;
  r.qber_interval = sample.interval;
  r.detected = detected;
  r.detection_probability = static_cast<double>(detected) / static_cast<double>(pulses);
  r.raw_key_bits = sample.remaining.size();
  finish_rate(r);
  return r;
}

// --- SARG04 ---------------------------------------------------------------

Basis basis_of(QubitState s) noexcept {
  return (s == QubitState::Z0 || s == QubitState::Z1) ? Basis::Z : Basis::X;
}

std::uint8_t value_of(QubitState s) noexcept { return (s == QubitState::Z1 || s == QubitState::XMinus) ? 1 : 0; }

std::uint8_t sarg04_bit(QubitState s) noexcept { return basis_of(s) == Basis::Z ? 0 : 1; }

namespace {

bool orthogonal_to_outcome(QubitState s, Basis basis, std::uint8_t outcome) {
  return basis_of(s) == basis && value_of(s) != outcome;
}

}  // namespace

std::optional<std::uint8_t> sarg04_sift(QubitState sent, CandidatePair announced, Basis bob_basis,
                                        std::uint8_t bob_outcome) {
  require(basis_of(announced.first) != basis_of(announced.second), Errc::malformed_pair,
          "sarg04_sift: pair must hold one Z state and one X state");
  require(announced.first == sent || announced.second == sent, Errc::malformed_pair,
          "sarg04_sift: announced pair does not contain the sent state");
  require(bob_outcome <= 1, Errc::domain, "sarg04_sift: outcome must be 0 or 1");

  const bool first_excluded = orthogonal_to_outcome(announced.first, bob_basis, bob_outcome);
  const bool second_excluded = orthogonal_to_outcome(announced.second, bob_basis, bob_outcome);
  if (first_excluded == second_excluded) return std::nullopt;
  return sarg04_bit(first_excluded ? announced.second : announced.first);
}

std::uint8_t measure_ideal(QubitState s, Basis basis, Rng& rng) {
  if (basis_of(s) == basis) return value_of(s);
  return rng.bit();
}

// --- E91 / CHSH -------------------------------------------------------------

CorrelationCell correlation(std::span<const std::int8_t> alice, std::span<const std::int8_t> bob) {
  require(alice.size() == bob.size(), Errc::length_mismatch, "correlation: outcome records differ in length");
  require(!alice.empty(), Errc::missing_cell, "correlation: empty cell");
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < alice.size(); ++i) sum += alice[i] * bob[i];
  return {static_cast<double>(sum) / static_cast<double>(alice.size()), alice.size()};
}

double chsh_S(const ChshStats& stats) {
  for (const auto& cell : stats.cells) require(cell.has_value(), Errc::missing_cell, "chsh_S: missing cell");
  return stats.at(0, 0)->value + stats.at(0, 1)->value + stats.at(1, 0)->value - stats.at(1, 1)->value;
}

double e91_correlation(double theta_a_deg, double theta_b_deg, Probability visibility) {
  const double delta = (theta_a_deg - theta_b_deg) * std::numbers::pi / 180.0;
  return visibility.value() * std::cos(2.0 * delta);
}

E91Result simulate_e91(const ChshAngles& angles, Probability visibility, std::uint64_t pairs_per_cell,
                       std::uint64_t seed, Mode mode) {
  const std::array<double, 2> alice{angles.a, angles.a_prime};
  const std::array<double, 2> bob{angles.b, angles.b_prime};

  E91Result out;
  if (mode == Mode::analytic) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.stats.set(i, j, {e91_correlation(alice[i], bob[j], visibility), 0});
  } else {
    require(pairs_per_cell >= 1000, Errc::too_few_samples, "simulate_e91: need at least 1000 pairs per cell");
    Rng alice_rng(seed, Stream::alice_bits);
    Rng bob_rng(seed, Stream::bob_outcomes);
    std::vector<std::int8_t> a(pairs_per_cell), b(pairs_per_cell);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double agree = 0.5 * (1.0 + e91_correlation(alice[i], bob[j], visibility));
        for (std::uint64_t k = 0; k < pairs_per_cell; ++k) {
          a[k] = alice_rng.bit() ? 1 : -1;
          b[k] = bob_rng.bernoulli(agree) ? a[k] : static_cast<std::int8_t>(-a[k]);
        }
        out.stats.set(i, j, correlation(a, b));
      }
    }
  }
  out.stats.S = chsh_S(out.stats);
  out.aborted = out.stats.S <= 2.0;
  return out;
}

}  // namespace qkd
