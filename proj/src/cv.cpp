#include "qkd/cv.hpp"

#include <cmath>

#include "qkd/rng.hpp"

namespace qkd {

void CvParams::validate() const {
  require(modulation_variance >= 0.0 && std::isfinite(modulation_variance), Errc::domain,
          "cv: modulation variance must be non-negative");
  require(transmittance > 0.0, Errc::zero_trials, "cv: transmittance must be positive");
  require(transmittance <= 1.0, Errc::domain, "cv: transmittance must not exceed 1");
  require(excess_noise >= 0.0 && std::isfinite(excess_noise), Errc::domain, "cv: excess noise must be non-negative");
  require(reconciliation_efficiency >= 0.0 && reconciliation_efficiency <= 1.0, Errc::domain,
          "cv: reconciliation efficiency must lie in [0,1]");
}

double CvParams::chi_line() const noexcept { return excess_noise + (1.0 - transmittance) / transmittance; }

double cv_mutual_info(const CvParams& params, CvConvention convention) {
  params.validate();
  const double V = params.V();
  if (convention == CvConvention::consistent) {
    const double chi = params.chi_line();
    return 0.5 * std::log2((V + chi) / (1.0 + chi));
  }
  const double chi = params.chi_tot();
  return 0.5 * std::log2((V + chi) / chi);
}

double holevo_g(double x) {
  if (x <= 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

SymplecticSpectrum cv_symplectic_spectrum(const CvParams& params) {
  params.validate();
  const double V = params.V();
  const double T = params.transmittance;
  const double chi = params.chi_line();

  const double b = T * (V + chi);
  const double c2 = T * (V * V - 1.0);
  const double A = V * V * (1.0 - 2.0 * T) + 2.0 * T + T * T * (V + chi) * (V + chi);
  const double B = T * T * (V * chi + 1.0) * (V * chi + 1.0);
  double disc = A * A - 4.0 * B;
  require(disc >= -1e-9 * A * A, Errc::nonphysical_covariance, "cv_holevo: negative discriminant");
  disc = std::max(0.0, disc);

  SymplecticSpectrum s;
  s.lambda1 = std::sqrt(0.5 * (A + std::sqrt(disc)));
  s.lambda2 = std::sqrt(std::max(0.0, 0.5 * (A - std::sqrt(disc))));
  s.lambda3 = std::sqrt(V * (V - c2 / b));
  const double tol = 1e-9;
  require(s.lambda1 >= 1.0 - tol && s.lambda2 >= 1.0 - tol && s.lambda3 >= 1.0 - tol, Errc::nonphysical_covariance,
          "cv_holevo: symplectic eigenvalue below the vacuum level");
  return s;
}

double cv_holevo(const CvParams& params) {
  const SymplecticSpectrum s = cv_symplectic_spectrum(params);
  const double chi = holevo_g(0.5 * (s.lambda1 - 1.0)) + holevo_g(0.5 * (s.lambda2 - 1.0)) -
                     holevo_g(0.5 * (s.lambda3 - 1.0));
  return std::max(0.0, chi);
}

CvRateReport cv_key_rate(const CvParams& params, CvConvention convention) {
  CvRateReport r;
  r.I_AB = cv_mutual_info(params, convention);
  r.chi_BE = cv_holevo(params);
  r.K = params.reconciliation_efficiency * r.I_AB - r.chi_BE;
  r.estimated_T = params.transmittance;
  r.estimated_xi = params.excess_noise;
  r.aborted = r.K <= 0.0;
  return r;
}

CvSimulation simulate_cv_session(const CvParams& params, std::uint64_t N, std::uint64_t seed) {
  params.validate();
  require(N >= 10000, Errc::too_few_samples, "simulate_cv_session: need at least 10^4 symbols");

  Rng modulation(seed, Stream::cv_modulation);
  Rng noise(seed, Stream::cv_noise);
  Rng basis(seed, Stream::bob_bases);

  CvSimulation sim;
  CvSession& s = sim.session;
  s.N = N;
  s.seed = seed;
  s.alice_x.resize(N);
  s.alice_p.resize(N);
  s.bob_basis.resize(N);
  s.bob_values.resize(N);

  const double sd_a = std::sqrt(params.modulation_variance);
  const double sqrt_t = std::sqrt(params.transmittance);
  const double sd_noise = std::sqrt(1.0 + params.transmittance * params.excess_noise);
  for (std::uint64_t i = 0; i < N; ++i) {
    s.alice_x[i] = modulation.normal(0.0, sd_a);
    s.alice_p[i] = modulation.normal(0.0, sd_a);
    s.bob_basis[i] = basis.bit();
    const double sent = s.bob_basis[i] ? s.alice_p[i] : s.alice_x[i];
    s.bob_values[i] = sqrt_t * sent + noise.normal(0.0, sd_noise);
  }

  const CvEstimate est = estimate_cv_parameters(s);
  sim.estimated_T = est.T;
  sim.estimated_xi = est.xi;
  return sim;
}

CvEstimate estimate_cv_parameters(const CvSession& s) {
  require(s.alice_x.size() == s.N && s.alice_p.size() == s.N && s.bob_basis.size() == s.N &&
              s.bob_values.size() == s.N,
          Errc::length_mismatch, "estimate_cv_parameters: session arrays differ in length");
  require(s.N >= 2, Errc::too_few_samples, "estimate_cv_parameters: need at least two symbols");

  // Zero-mean model, so moments are taken about the origin.
  double saa = 0.0, sab = 0.0, sbb = 0.0;
  for (std::uint64_t i = 0; i < s.N; ++i) {
    const double a = s.bob_basis[i] ? s.alice_p[i] : s.alice_x[i];
    const double b = s.bob_values[i];
    saa += a * a;
    sab += a * b;
    sbb += b * b;
  }
  require(saa > 0.0, Errc::zero_signal_variance, "estimate_cv_parameters: zero signal variance, slope undefined");
  const double n = static_cast<double>(s.N);
  const double slope = sab / saa;
  const double residual = (sbb - slope * sab) / n;

  CvEstimate est;
  est.T = slope * slope;
  require(est.T > 0.0, Errc::zero_signal_variance, "estimate_cv_parameters: estimated transmittance is zero");
  est.xi = (residual - 1.0) / est.T;
  return est;
}

}  // namespace qkd
