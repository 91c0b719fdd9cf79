#pragma once

#include "qkd/core_math.hpp"

namespace qkd {

struct FiberLink {
  double attenuation_db_per_km = 0.2;
  double length_km = 0.0;
  double extra_loss_db = 0.0;  // connectors and splices, lumped

  void validate() const;
};

struct Detector {
  Probability efficiency{0.2};
  Probability dark_count_prob{1e-5};  // per gate
};

struct OpticalQuality {
  Probability visibility{1.0};
  Probability misalignment_qber{0.0};

  /// (1 − V)/2.
  double optical_qber() const noexcept { return 0.5 * (1.0 - visibility.value()); }
};

struct LinkModel {
  FiberLink fiber;
  Detector detector;
  OpticalQuality optics;
  double mean_photon_number = 0.5;

  void validate() const;
};

/// 10^{−(α·L + extra)/10}.
Probability transmissivity(const FiberLink& fiber);

/// 1 − e^{−μηη_d}.
Probability p_signal(double mu, Probability eta, Probability eta_d);

struct QberModel {
  Probability qber;
  Probability p_det;
  Probability p_sig;
};

/// Observed QBER decomposition: optical error on signal clicks, half the dark
/// counts wrong, plus a misalignment floor. Throws Errc::dead_link when no
/// click is possible.
QberModel qber_model(const LinkModel& link);

/// Overall single-photon transmittance seen by the detector, η·η_d.
double channel_efficiency(const LinkModel& link);

/// Threshold-detector yield Y_n = Y₀ + [1 − (1 − ηη_d)ⁿ](1 − Y₀).
double photon_yield(unsigned n, double efficiency, double y0);

/// e_n·Y_n = e₀Y₀ + e_opt(Y_n − Y₀), returned as e_n (e₀ for Y_n = 0).
double photon_error(unsigned n, double efficiency, double y0, double e_opt, double e0 = 0.5);

}  // namespace qkd
