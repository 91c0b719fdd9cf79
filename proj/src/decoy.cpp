#include "qkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "qkd/format.hpp"

namespace qkd {

void IntensitySet::validate() const {
  require(vacuum_omega >= 0.0 && decoy_nu > vacuum_omega && signal_mu > decoy_nu && std::isfinite(signal_mu),
          Errc::degenerate_intensities, "intensities must satisfy mu > nu > omega >= 0");
  double sum = 0.0;
  for (double p : usage_fractions) {
    require(p >= 0.0 && p <= 1.0, Errc::domain, "usage fractions must lie in [0,1]");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-9, Errc::domain, "usage fractions must sum to 1");
}

const GainEntry& GainTable::at(double intensity) const {
  for (const auto& e : entries) {
    if (std::abs(e.intensity - intensity) <= 1e-12) return e;
  }
  fail(Errc::missing_cell, "gain table has no entry for intensity " + format_number(intensity, 9));
}

std::string_view to_string(EstimatorId id) noexcept {
  switch (id) {
    case EstimatorId::paper_two_decoy: return "paper-two-decoy";
    case EstimatorId::paper_alg3: return "paper-alg3";
    case EstimatorId::lmc_reference: return "lmc-reference";
  }
  return "unknown";
}

EstimatorId estimator_from_string(std::string_view name) {
  for (auto id : {EstimatorId::paper_two_decoy, EstimatorId::paper_alg3, EstimatorId::lmc_reference}) {
    if (name == to_string(id)) return id;
  }
  fail(Errc::invalid_config, "unknown estimator '" + std::string(name) + "'");
}

namespace {

struct GainModel {
  double efficiency;
  double y0;
  double e_opt;
};

GainModel gain_model(const LinkModel& link) {
  link.validate();
  return {channel_efficiency(link), link.detector.dark_count_prob.value(),
          std::min(0.5, link.optics.optical_qber() + link.optics.misalignment_qber.value())};
}

std::pair<double, double> model_gain(const GainModel& m, double intensity) {
  const std::uint32_t cutoff = poisson_truncation(intensity);
  double gain = 0.0;
  double error_weight = 0.0;
  for (std::uint32_t n = 0; n <= cutoff; ++n) {
    const double pn = poisson_pmf(n, intensity);
    const double yn = photon_yield(n, m.efficiency, m.y0);
    gain += pn * yn;
    error_weight += pn * (kVacuumErrorRate * m.y0 + m.e_opt * (yn - m.y0));
  }
  gain = std::min(gain, 1.0);
  const double qber = gain > 0.0 ? std::clamp(error_weight / gain, 0.0, 1.0) : 0.0;
  return {gain, qber};
}

Bound clamp_bound(double raw, double hi) {
  return {raw, std::clamp(raw, 0.0, hi), raw >= 0.0 && raw <= hi};
}

void require_ordered(double mu, double nu, const char* what) {
  require(mu > nu && nu > 0.0, Errc::degenerate_intensities, what);
}

}  // namespace

GainTable gains_from_model(const LinkModel& link, const IntensitySet& intensities) {
  const GainModel m = gain_model(link);
  return gains_from_yields(m.efficiency, m.y0, m.e_opt, intensities);
}

GainTable gains_from_yields(double efficiency, double y0, double e_opt, const IntensitySet& intensities) {
  intensities.validate();
  require(efficiency >= 0.0 && efficiency <= 1.0 && y0 >= 0.0 && y0 <= 1.0 && e_opt >= 0.0 && e_opt <= 0.5,
          Errc::domain, "gains_from_yields: parameters out of range");
  const GainModel m{efficiency, y0, e_opt};
  GainTable table;
  for (double lambda : {intensities.signal_mu, intensities.decoy_nu, intensities.vacuum_omega}) {
    const auto [gain, qber] = model_gain(m, lambda);
    table.entries.push_back({lambda, gain, qber, 0});
  }
  return table;
}

std::uint64_t sample_binomial(Rng& rng, std::uint64_t n, double p) {
  require(p >= 0.0 && p <= 1.0, Errc::domain, "sample_binomial: p outside [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - sample_binomial(rng, n, 1.0 - p);

  const double log_q = std::log1p(-p);
  std::uint64_t successes = 0;
  std::uint64_t position = 0;
  for (;;) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    const double skip = std::floor(std::log(u) / log_q);
    if (skip >= static_cast<double>(n - position)) break;
    position += static_cast<std::uint64_t>(skip) + 1;
    ++successes;
    if (position >= n) break;
  }
  return successes;
}

GainTable sample_gains(const LinkModel& link, const IntensitySet& intensities, std::uint64_t pulses,
                       std::uint64_t seed) {
  intensities.validate();
  const GainModel m = gain_model(link);
  Rng clicks_rng(seed, Stream::channel);
  Rng errors_rng(seed, Stream::bob_outcomes);

  const std::array<double, 3> levels{intensities.signal_mu, intensities.decoy_nu, intensities.vacuum_omega};
  GainTable table;
  std::uint64_t assigned = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const std::uint64_t trials =
        k + 1 == levels.size()
            ? pulses - assigned
            : static_cast<std::uint64_t>(std::llround(intensities.usage_fractions[k] * static_cast<double>(pulses)));
    assigned += trials;
    const auto [gain, qber] = model_gain(m, levels[k]);
    const std::uint64_t clicks = sample_binomial(clicks_rng, trials, gain);
    const std::uint64_t errors = sample_binomial(errors_rng, clicks, qber);
    table.entries.push_back({levels[k], trials ? static_cast<double>(clicks) / static_cast<double>(trials) : 0.0,
                             clicks ? static_cast<double>(errors) / static_cast<double>(clicks) : 0.0, trials});
  }
  return table;
}

Probability estimate_y0(Probability q_omega) { return q_omega; }

Bound estimate_y1_paper(double q_mu, double q_nu, double mu, double nu, double y0) {
  require_ordered(mu, nu, "estimate_y1_paper: requires mu > nu > 0");
  const double numerator = mu * std::exp(mu) * q_nu - nu * std::exp(nu) * q_mu - (mu - nu) * y0;
  return clamp_bound(numerator / (mu * nu * (mu - nu)), 1.0);
}

Bound estimate_y1_alg3(double q_signal, double q_decoy, double q_vacuum, double mu_signal, double mu_decoy,
                       double mu_vacuum) {
  require_ordered(mu_signal, mu_decoy, "estimate_y1_alg3: requires mu_s > mu_d > 0");
  require(mu_decoy > mu_vacuum && mu_vacuum >= 0.0, Errc::degenerate_intensities,
          "estimate_y1_alg3: requires mu_d > mu_0 >= 0");
  const double a = mu_signal * std::exp(mu_signal) * q_decoy - mu_decoy * std::exp(mu_decoy) * q_signal -
                   (mu_signal - mu_decoy) * std::exp(mu_vacuum) * q_vacuum;
  const double b = mu_signal * mu_decoy * (mu_signal - mu_decoy);
  const double raw = a / b;
  return {raw, std::clamp(std::max(0.0, raw), 0.0, 1.0), raw >= 0.0 && raw <= 1.0};
}

Bound estimate_y1_lmc(double q_mu, double q_nu, double mu, double nu, double y0) {
  require_ordered(mu, nu, "estimate_y1_lmc: requires mu > nu > 0");
  const double ratio = nu / mu;
  const double bracket = q_nu * std::exp(nu) - ratio * ratio * q_mu * std::exp(mu) - (1.0 - ratio * ratio) * y0;
  return clamp_bound(mu / (mu * nu - nu * nu) * bracket, 1.0);
}

Bound estimate_e1(double e_nu, double q_nu, double nu, double y0, double y1) {
  require(y1 > 0.0, Errc::insufficient_single_photon_yield, "estimate_e1: insufficient single-photon yield");
  require(nu > 0.0, Errc::degenerate_intensities, "estimate_e1: requires nu > 0");
  const double raw = (e_nu * q_nu * std::exp(nu) - kVacuumErrorRate * y0) / (nu * std::exp(nu) * y1);
  return clamp_bound(raw, 0.5);
}

Bound estimate_e1_lmc(double e_nu, double q_nu, double nu, double y0, double y1) {
  require(y1 > 0.0, Errc::insufficient_single_photon_yield, "estimate_e1_lmc: insufficient single-photon yield");
  require(nu > 0.0, Errc::degenerate_intensities, "estimate_e1_lmc: requires nu > 0");
  const double raw = (e_nu * q_nu * std::exp(nu) - kVacuumErrorRate * y0) / (nu * y1);
  return clamp_bound(raw, 0.5);
}

Bound estimate_e1_alg3(double e_signal, double q_signal, double e_decoy, double q_decoy, double mu_signal,
                       double mu_decoy, double y1) {
  require(y1 > 0.0, Errc::insufficient_single_photon_yield, "estimate_e1_alg3: insufficient single-photon yield");
  require_ordered(mu_signal, mu_decoy, "estimate_e1_alg3: requires mu_s > mu_d > 0");
  const double raw = (e_signal * q_signal * std::exp(mu_signal) - e_decoy * q_decoy * std::exp(mu_decoy)) /
                     ((mu_signal - mu_decoy) * y1);
  return clamp_bound(raw, 0.5);
}

DecoyEstimate estimate_decoy(const GainTable& table, const IntensitySet& intensities, EstimatorId estimator) {
  intensities.validate();
  const double mu = intensities.signal_mu;
  const double nu = intensities.decoy_nu;
  const double omega = intensities.vacuum_omega;
  const GainEntry& s = table.at(mu);
  const GainEntry& d = table.at(nu);
  const GainEntry& v = table.at(omega);

  DecoyEstimate est;
  est.estimator_id = estimator;
  est.Y0 = estimate_y0(v.gain);

  Bound y1;
  switch (estimator) {
    case EstimatorId::paper_two_decoy: y1 = estimate_y1_paper(s.gain, d.gain, mu, nu, est.Y0); break;
    case EstimatorId::paper_alg3: y1 = estimate_y1_alg3(s.gain, d.gain, v.gain, mu, nu, omega); break;
    case EstimatorId::lmc_reference: y1 = estimate_y1_lmc(s.gain, d.gain, mu, nu, est.Y0); break;
  }
  est.Y1_raw = y1.raw;
  est.Y1 = y1.clamped;
  est.Q1 = std::min(1.0, mu * std::exp(-mu) * y1.clamped);

  Bound e1;
  switch (estimator) {
    case EstimatorId::paper_two_decoy: e1 = estimate_e1(d.qber, d.gain, nu, est.Y0, est.Y1); break;
    case EstimatorId::paper_alg3: e1 = estimate_e1_alg3(s.qber, s.gain, d.qber, d.gain, mu, nu, est.Y1); break;
    case EstimatorId::lmc_reference: e1 = estimate_e1_lmc(d.qber, d.gain, nu, est.Y0, est.Y1); break;
  }
  est.e1_raw = e1.raw;
  est.e1 = e1.clamped;
  est.sound_flag = y1.in_range && e1.in_range;
  return est;
}

double decoy_key_rate(Probability q, Probability q_mu, Probability e_mu, Probability q1, Probability e1, double f) {
  require(f >= 1.0, Errc::domain, "decoy_key_rate: f must be >= 1");
  return q.value() * (-q_mu.value() * f * binary_entropy(e_mu) + q1.value() * (1.0 - binary_entropy(e1)));
}

void write_gain_table_csv(std::ostream& out, const GainTable& table, int precision) {
  out << "intensity,gain,qber,trials\n";
  for (const auto& e : table.entries) {
    out << format_number(e.intensity, precision) << ',' << format_number(e.gain, precision) << ','
        << format_number(e.qber, precision) << ',' << e.trials << '\n';
  }
}

GainTable read_gain_table_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::invalid_config, "gain table CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "intensity,gain,qber,trials", Errc::invalid_config,
          "gain table CSV header must be 'intensity,gain,qber,trials'");
  GainTable table;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell[4];
    for (int i = 0; i < 4; ++i) {
      require(static_cast<bool>(std::getline(row, cell[i], ',')), Errc::invalid_config,
              "gain table CSV row needs 4 columns");
    }
    std::string extra;
    require(!std::getline(row, extra, ','), Errc::invalid_config, "gain table CSV row has extra columns");
    const double trials = parse_number(cell[3]);
    require(trials >= 0.0 && trials == std::floor(trials), Errc::invalid_config, "trials must be a whole number");
    table.entries.push_back({parse_number(cell[0]), parse_number(cell[1]), parse_number(cell[2]),
                             static_cast<std::uint64_t>(trials)});
  }
  return table;
}

}  // namespace qkd
