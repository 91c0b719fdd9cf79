#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "qkd/core_math.hpp"

namespace qkd {

// --- MDI ---------------------------------------------------------------------

struct GainCell {
  Probability gain;
  Probability qber;
};

/// Q_{λκ}, E_{λκ} indexed by (Alice intensity, Bob intensity).
struct GainTable2D {
  std::map<std::pair<double, double>, GainCell> entries;

  void set(double lambda, double kappa, GainCell cell) { entries[{lambda, kappa}] = cell; }
  /// Lookup with 1e−12 tolerance on both intensities; throws Errc::missing_cell.
  const GainCell& at(double lambda, double kappa) const;
};

struct MdiEstimate {
  double S11_raw = 0.0;
  Probability S11;
  double e11_raw = 0.0;
  Probability e11;
  bool e11_available = false;  // false when S₁₁ ≤ 0
  bool sound_flag = true;
};

/// S₁₁ ≥ [μ²e^μ(Q_νν − Q_μν) − (μ² − ν²)e^{μ+ν}Q_ωω] / (μν(μ − ν)),
/// e₁₁ ≤ (E_νν Q_νν − E_ωω Q_ωω) / S₁₁.
MdiEstimate mdi_bounds(const GainTable2D& gains, double mu, double nu, double omega);

/// S₁₁[1 − h₂(e₁₁)] − Q_μμ f h₂(E_μμ) − Δ_FK(N, ε). Pass an infinite N for the
/// asymptotic value. Throws Errc::no_pair_yield when e₁₁ is unavailable.
double mdi_rate(const MdiEstimate& est, Probability q_mumu, Probability e_mumu, double f,
                double blocks = std::numeric_limits<double>::infinity(), double eps_sec = 1e-10,
                bool floor_at_zero = false);

// --- TF ----------------------------------------------------------------------

struct TfSlice {
  double N_k = 0.0;
  Probability Y11;
  Probability e11_phase;
  Probability Q_mumu;
  Probability E_mumu;
};

struct TfSliceData {
  std::vector<TfSlice> slices;
  double total_N = 0.0;

  std::size_t M() const noexcept { return slices.size(); }
  void validate() const;
};

/// Σ_k (N_k/N)[Y₁₁(1 − h₂(e^φ)) − Q_μμ f h₂(E_μμ)] − √(ln(2/ε)/N).
double tf_rate(const TfSliceData& data, double f, double eps_sec);

// --- DPS / COW / RRDPS --------------------------------------------------------

struct ClickRate {
  double p_click = 0.0;
  double qber = 0.0;
  double signed_rate = 0.0;
  double rate = 0.0;  // max(0, signed_rate)
};

/// P_click = 1 − e^{−ημ} − Y₀, Q = (1 − V)/2, R = P_click[1 − 2h₂(Q)].
ClickRate dps_rate(double eta, double mu, Probability visibility, double y0);

/// P_sig[1 − h₂(Q)] − p_m h₂((1 − V)/2), P_sig = (1 − p_m)(1 − e^{−ημ} − Y₀),
/// Q = (1 − √V)/2.
ClickRate cow_rate(double eta, double mu, Probability visibility, double y0, Probability monitor_fraction);

struct RrdpsRate : ClickRate {
  double adversary_info = 0.0;  // 1/(L − 1)
};

/// P_click[1 − h₂(Q) − 1/(L − 1)], P_click = 1 − e^{−ημL} − Y₀.
RrdpsRate rrdps_rate(double eta, double mu, Probability qber, double y0, std::uint32_t block_length);

// --- DI ----------------------------------------------------------------------

/// max(0, H(A|E) − H(A|B)).
double di_rate(double h_a_given_e, double h_a_given_b);

// --- QDS ---------------------------------------------------------------------

struct QdsParams {
  double L = 0.0;
  Probability s_auth;
  Probability s_ver;
  Probability p_err;
  Probability p_guess;

  /// p_err < s_auth < s_ver < 1 and p_guess ≤ s_ver.
  void validate() const;
};

struct QdsBounds {
  double p_forge = 1.0;
  double p_repud = 1.0;
  // Natural logs of the bounds; these stay finite after the bounds underflow.
  double log_p_forge = 0.0;
  double log_p_repud = 0.0;
};

/// exp[−L·D(s_ver‖p_guess)] and exp[−L·D(p_err‖s_auth)].
QdsBounds qds_security(const QdsParams& params);

/// Smallest L with both bounds ≤ target_eps. `params.L` is ignored.
std::uint64_t qds_required_L(double target_eps, QdsParams params);

}  // namespace qkd
