#include "qkd/channel.hpp"

#include <algorithm>
#include <cmath>

namespace qkd {

void FiberLink::validate() const {
  require(attenuation_db_per_km > 0.0 && std::isfinite(attenuation_db_per_km), Errc::domain,
          "fiber attenuation must be > 0 dB/km");
  require(length_km >= 0.0 && std::isfinite(length_km), Errc::domain, "fiber length must be >= 0 km");
  require(extra_loss_db >= 0.0 && std::isfinite(extra_loss_db), Errc::domain, "extra loss must be >= 0 dB");
}

void LinkModel::validate() const {
  fiber.validate();
  require(mean_photon_number >= 0.0 && std::isfinite(mean_photon_number), Errc::domain,
          "mean photon number must be >= 0");
}

Probability transmissivity(const FiberLink& fiber) {
  fiber.validate();
  const double loss_db = fiber.attenuation_db_per_km * fiber.length_km + fiber.extra_loss_db;
  return std::pow(10.0, -loss_db / 10.0);
}

Probability p_signal(double mu, Probability eta, Probability eta_d) {
  require(mu >= 0.0, Errc::domain, "p_signal: mean photon number must be >= 0");
  return -std::expm1(-mu * eta.value() * eta_d.value());
}

double channel_efficiency(const LinkModel& link) {
  return transmissivity(link.fiber).value() * link.detector.efficiency.value();
}

QberModel qber_model(const LinkModel& link) {
  link.validate();
  const Probability eta = transmissivity(link.fiber);
  const double p_sig = p_signal(link.mean_photon_number, eta, link.detector.efficiency);
  const double p_d = link.detector.dark_count_prob.value();
  const double clicks = p_sig + p_d;
  if (!(clicks > 0.0)) fail(Errc::dead_link, "dead link: no clicks possible");

  const double q = (link.optics.optical_qber() * p_sig + 0.5 * p_d) / clicks +
                   link.optics.misalignment_qber.value();
  return {std::clamp(q, 0.0, 0.5), std::min(1.0, clicks), p_sig};
}

double photon_yield(unsigned n, double efficiency, double y0) {
  return y0 + (1.0 - std::pow(1.0 - efficiency, static_cast<double>(n))) * (1.0 - y0);
}

double photon_error(unsigned n, double efficiency, double y0, double e_opt, double e0) {
  const double yn = photon_yield(n, efficiency, y0);
  if (yn <= 0.0) return e0;
  return (e0 * y0 + e_opt * (yn - y0)) / yn;
}

}  // namespace qkd
