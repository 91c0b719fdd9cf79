#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkd/channel.hpp"
#include "qkd/rng.hpp"

namespace qkd {

inline constexpr double kVacuumErrorRate = 0.5;  // e₀
inline constexpr std::string_view kAbortInsufficientRate = "insufficient key rate";

struct IntensitySet {
  double signal_mu = 0.5;
  double decoy_nu = 0.1;
  double vacuum_omega = 0.0;
  std::array<double, 3> usage_fractions{0.8, 0.15, 0.05};

  /// μ > ν > ω ≥ 0 and the fractions sum to 1 within 1e−9.
  void validate() const;
};

struct GainEntry {
  double intensity = 0.0;
  Probability gain;
  Probability qber;
  std::uint64_t trials = 0;  // 0 for tables computed from a model
};

struct GainTable {
  std::vector<GainEntry> entries;

  /// Entry whose intensity matches within 1e−12; throws Errc::missing_cell.
  const GainEntry& at(double intensity) const;
};

enum class EstimatorId { paper_two_decoy, paper_alg3, lmc_reference };

std::string_view to_string(EstimatorId id) noexcept;
EstimatorId estimator_from_string(std::string_view name);

struct DecoyEstimate {
  Probability Y0;
  double Y1_raw = 0.0;
  Probability Y1;
  Probability Q1;
  double e1_raw = 0.0;
  Probability e1;
  bool sound_flag = true;  // raw values were already inside their ranges
  EstimatorId estimator_id = EstimatorId::lmc_reference;
};

/// A bound before and after clamping into its admissible range.
struct Bound {
  double raw = 0.0;
  double clamped = 0.0;
  bool in_range = true;
};

/// Exact Q_λ and E_λ from the threshold-detector yield model, summed over
/// photon numbers until the Poisson tail drops below 1e−15.
GainTable gains_from_model(const LinkModel& link, const IntensitySet& intensities);

/// Same, from the per-photon parameters directly: channel efficiency ηη_d,
/// background yield Y₀ and optical error e_opt.
GainTable gains_from_yields(double efficiency, double y0, double e_opt, const IntensitySet& intensities);

/// Gains and QBERs counted from `pulses` simulated pulses split by the usage
/// fractions. Clicks and errors are binomial draws with the model's Q_λ, E_λ.
GainTable sample_gains(const LinkModel& link, const IntensitySet& intensities, std::uint64_t pulses,
                       std::uint64_t seed);

/// Exact binomial variate by geometric skipping; cost grows with n·min(p, 1−p).
std::uint64_t sample_binomial(Rng& rng, std::uint64_t n, double p);

Probability estimate_y0(Probability q_omega);

/// [μe^μQ_ν − νe^νQ_μ − (μ − ν)Y₀] / (μν(μ − ν)), clamped to [0, 1].
Bound estimate_y1_paper(double q_mu, double q_nu, double mu, double nu, double y0);

/// A = μ_s e^{μ_s} Q_d − μ_d e^{μ_d} Q_s − (μ_s − μ_d) e^{μ_0} Q_0,
/// B = μ_s μ_d (μ_s − μ_d); Y₁ = max(0, A/B), clamped to [0, 1].
Bound estimate_y1_alg3(double q_signal, double q_decoy, double q_vacuum, double mu_signal, double mu_decoy,
                       double mu_vacuum);

/// Vacuum + weak decoy lower bound
/// (μ/(μν − ν²))·[Q_ν e^ν − (ν/μ)² Q_μ e^μ − ((μ² − ν²)/μ²) Y₀], clamped to [0, 1].
/// Valid for any non-negative yields once ν < μ.
Bound estimate_y1_lmc(double q_mu, double q_nu, double mu, double nu, double y0);

/// (E_ν Q_ν e^ν − e₀Y₀)/(ν e^ν Y₁), clamped to [0, 0.5]. Throws
/// Errc::insufficient_single_photon_yield when Y₁ = 0.
Bound estimate_e1(double e_nu, double q_nu, double nu, double y0, double y1);

/// (E_ν Q_ν e^ν − e₀Y₀)/(ν Y₁), clamped to [0, 0.5]. Upper bound for any
/// non-negative per-photon error weights.
Bound estimate_e1_lmc(double e_nu, double q_nu, double nu, double y0, double y1);

/// min((E_s Q_s e^{μ_s} − E_d Q_d e^{μ_d}) / ((μ_s − μ_d) Y₁), 0.5), floored at 0.
Bound estimate_e1_alg3(double e_signal, double q_signal, double e_decoy, double q_decoy, double mu_signal,
                       double mu_decoy, double y1);

/// Full estimator chain on a gain table. Q₁ = μe^{−μ}Y₁.
DecoyEstimate estimate_decoy(const GainTable& table, const IntensitySet& intensities, EstimatorId estimator);

/// q·[−Q_μ f(E_μ) h₂(E_μ) + Q₁(1 − h₂(e₁))], signed.
double decoy_key_rate(Probability q, Probability q_mu, Probability e_mu, Probability q1, Probability e1, double f);

/// CSV with header `intensity,gain,qber,trials`.
void write_gain_table_csv(std::ostream& out, const GainTable& table, int precision = 17);
GainTable read_gain_table_csv(std::istream& in);

}  // namespace qkd
