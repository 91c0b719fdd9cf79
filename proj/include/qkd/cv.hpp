#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qkd/core_math.hpp"

namespace qkd {

inline constexpr std::string_view kAbortCvNoisy = "channel too noisy for CV-QKD";

/// Shot-noise units throughout; ξ is referred to the channel input.
struct CvParams {
  double modulation_variance = 4.0;  // V_A
  double transmittance = 0.5;        // T
  double excess_noise = 0.01;        // ξ
  double reconciliation_efficiency = 0.95;  // β

  void validate() const;
  double V() const noexcept { return modulation_variance + 1.0; }
  /// ξ + (1 − T)/T
  double chi_line() const noexcept;
  /// 1 + χ_line
  double chi_tot() const noexcept { return 1.0 + chi_line(); }
};

/// How I_AB normalizes the added noise. `paper` divides by χ_tot; `consistent`
/// uses the χ_line convention that χ_BE is built on.
enum class CvConvention { paper, consistent };

/// paper: ½log₂[(V + χ_tot)/χ_tot]; consistent: ½log₂[(V + χ_line)/(1 + χ_line)].
double cv_mutual_info(const CvParams& params, CvConvention convention = CvConvention::paper);

/// (x+1)log₂(x+1) − x·log₂x, G(0) = 0.
double holevo_g(double x);

struct SymplecticSpectrum {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;  // conditional on Bob's homodyne outcome
};

/// Closed-form eigenvalues of the entangling-cloner covariance matrix.
SymplecticSpectrum cv_symplectic_spectrum(const CvParams& params);

/// G((λ₁−1)/2) + G((λ₂−1)/2) − G((λ₃−1)/2), reverse reconciliation.
double cv_holevo(const CvParams& params);

struct CvRateReport {
  double I_AB = 0.0;
  double chi_BE = 0.0;
  double K = 0.0;
  double estimated_T = 0.0;
  double estimated_xi = 0.0;
  bool aborted = false;
};

/// K = β·I_AB − χ_BE, aborted iff K ≤ 0. The estimates echo the inputs.
CvRateReport cv_key_rate(const CvParams& params, CvConvention convention = CvConvention::paper);

struct CvSession {
  std::uint64_t N = 0;
  std::vector<double> alice_x;
  std::vector<double> alice_p;
  std::vector<std::uint8_t> bob_basis;  // 0 = x quadrature, 1 = p quadrature
  std::vector<double> bob_values;
  std::uint64_t seed = 0;
};

struct CvSimulation {
  CvSession session;
  double estimated_T = 0.0;
  double estimated_xi = 0.0;
};

/// Gaussian-modulated coherent states over B = √T·A + noise of variance
/// 1 + Tξ, followed by random-quadrature homodyne detection and regression
/// estimation of T and ξ. Requires N ≥ 10⁴.
CvSimulation simulate_cv_session(const CvParams& params, std::uint64_t N, std::uint64_t seed);

struct CvEstimate {
  double T = 0.0;
  double xi = 0.0;
};

/// T̂ = slope², ξ̂ = (residual variance − 1)/T̂, using Bob's chosen quadrature.
/// Throws Errc::zero_signal_variance when Alice's data has no spread.
CvEstimate estimate_cv_parameters(const CvSession& session);

}  // namespace qkd
