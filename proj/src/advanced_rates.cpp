#include "qkd/advanced_rates.hpp"

#include <algorithm>
#include <cmath>

namespace qkd {

const GainCell& GainTable2D::at(double lambda, double kappa) const {
  for (const auto& [key, cell] : entries) {
    if (std::abs(key.first - lambda) <= 1e-12 && std::abs(key.second - kappa) <= 1e-12) return cell;
  }
  fail(Errc::missing_cell, "2D gain table has no entry for the requested intensity pair");
}

MdiEstimate mdi_bounds(const GainTable2D& gains, double mu, double nu, double omega) {
  require(mu > nu && nu > omega && omega >= 0.0, Errc::degenerate_intensities,
          "mdi_bounds: requires mu > nu > omega >= 0");
  const GainCell& nn = gains.at(nu, nu);
  const GainCell& mn = gains.at(mu, nu);
  const GainCell& ww = gains.at(omega, omega);

  MdiEstimate est;
  const double numerator = mu * mu * std::exp(mu) * (nn.gain.value() - mn.gain.value()) -
                           (mu * mu - nu * nu) * std::exp(mu + nu) * ww.gain.value();
  est.S11_raw = numerator / (mu * nu * (mu - nu));
  est.S11 = std::clamp(est.S11_raw, 0.0, 1.0);
  est.sound_flag = est.S11_raw >= 0.0 && est.S11_raw <= 1.0;
  if (est.S11_raw > 0.0) {
    est.e11_available = true;
    est.e11_raw = (nn.qber.value() * nn.gain.value() - ww.qber.value() * ww.gain.value()) / est.S11_raw;
    est.e11 = std::clamp(est.e11_raw, 0.0, 0.5);
    est.sound_flag = est.sound_flag && est.e11_raw >= 0.0 && est.e11_raw <= 0.5;
  }
  return est;
}

double mdi_rate(const MdiEstimate& est, Probability q_mumu, Probability e_mumu, double f, double blocks,
                double eps_sec, bool floor_at_zero) {
  require(est.e11_available, Errc::no_pair_yield, "mdi_rate: no single-photon-pair yield");
  require(f >= 1.0, Errc::domain, "mdi_rate: f must be >= 1");
  const double rate = est.S11.value() * (1.0 - binary_entropy(est.e11)) -
                      q_mumu.value() * f * binary_entropy(e_mumu) - finite_key_penalty(blocks, eps_sec);
  return floor_at_zero ? std::max(0.0, rate) : rate;
}

void TfSliceData::validate() const {
  require(total_N > 0.0, Errc::zero_trials, "tf_rate: total_N must be positive");
  double used = 0.0;
  for (const auto& s : slices) {
    require(s.N_k >= 0.0, Errc::domain, "tf_rate: slice counts must be non-negative");
    used += s.N_k;
  }
  require(used <= total_N, Errc::domain, "tf_rate: slice counts exceed total_N");
}

double tf_rate(const TfSliceData& data, double f, double eps_sec) {
  data.validate();
  require(f >= 1.0, Errc::domain, "tf_rate: f must be >= 1");
  double sum = 0.0;
  for (const auto& s : data.slices) {
    const double bracket = s.Y11.value() * (1.0 - binary_entropy(s.e11_phase)) -
                           s.Q_mumu.value() * f * binary_entropy(s.E_mumu);
    sum += s.N_k / data.total_N * bracket;
  }
  return sum - finite_key_penalty(data.total_N, eps_sec);
}

namespace {

double click_probability(double eta, double mu, double y0) {
  require(eta >= 0.0 && eta <= 1.0 && mu >= 0.0 && y0 >= 0.0, Errc::domain, "click rate: inputs out of range");
  const double p = -std::expm1(-eta * mu) - y0;
  require(p >= 0.0, Errc::dead_link, "click rate: background exceeds signal clicks");
  return p;
}

}  // namespace

ClickRate dps_rate(double eta, double mu, Probability visibility, double y0) {
  ClickRate r;
  r.p_click = click_probability(eta, mu, y0);
  r.qber = 0.5 * (1.0 - visibility.value());
  r.signed_rate = r.p_click * (1.0 - 2.0 * binary_entropy(r.qber));
  r.rate = std::max(0.0, r.signed_rate);
  return r;
}

ClickRate cow_rate(double eta, double mu, Probability visibility, double y0, Probability monitor_fraction) {
  require(monitor_fraction.value() < 1.0, Errc::domain, "cow_rate: monitor fraction must lie in [0,1)");
  ClickRate r;
  r.p_click = (1.0 - monitor_fraction.value()) * click_probability(eta, mu, y0);
  r.qber = 0.5 * (1.0 - std::sqrt(visibility.value()));
  r.signed_rate = r.p_click * (1.0 - binary_entropy(r.qber)) -
                  monitor_fraction.value() * binary_entropy(0.5 * (1.0 - visibility.value()));
  r.rate = std::max(0.0, r.signed_rate);
  return r;
}

RrdpsRate rrdps_rate(double eta, double mu, Probability qber, double y0, std::uint32_t block_length) {
  require(block_length >= 2, Errc::domain, "rrdps_rate: block length must be at least 2");
  RrdpsRate r;
  r.adversary_info = 1.0 / static_cast<double>(block_length - 1);
  r.p_click = click_probability(eta, mu * block_length, y0);
  r.qber = qber.value();
  r.signed_rate = r.p_click * (1.0 - binary_entropy(qber) - r.adversary_info);
  r.rate = std::max(0.0, r.signed_rate);
  return r;
}

double di_rate(double h_a_given_e, double h_a_given_b) {
  require(h_a_given_e >= 0.0 && h_a_given_e <= 1.0 && h_a_given_b >= 0.0 && h_a_given_b <= 1.0, Errc::domain,
          "di_rate: entropies must lie in [0,1]");
  return std::max(0.0, h_a_given_e - h_a_given_b);
}

void QdsParams::validate() const {
  require(L >= 0.0, Errc::domain, "qds: L must be non-negative");
  require(p_err.value() < s_auth.value() && s_auth.value() < s_ver.value() && s_ver.value() < 1.0, Errc::domain,
          "qds: requires p_err < s_auth < s_ver < 1");
  require(p_guess.value() <= s_ver.value(), Errc::domain, "qds: requires p_guess <= s_ver");
}

QdsBounds qds_security(const QdsParams& params) {
  params.validate();
  QdsBounds b;
  b.log_p_forge = -params.L * kl_divergence(params.s_ver, params.p_guess);
  b.log_p_repud = -params.L * kl_divergence(params.p_err, params.s_auth);
  b.p_forge = std::exp(b.log_p_forge);
  b.p_repud = std::exp(b.log_p_repud);
  return b;
}

std::uint64_t qds_required_L(double target_eps, QdsParams params) {
  require(target_eps > 0.0 && target_eps <= 1.0, Errc::domain, "qds_required_L: target must lie in (0,1]");
  params.L = 0.0;
  params.validate();
  const double d = std::min(kl_divergence(params.s_ver, params.p_guess), kl_divergence(params.p_err, params.s_auth));
  require(d > 0.0, Errc::unreachable_target, "qds_required_L: zero divergence, target unreachable");

  auto meets = [&](std::uint64_t L) {
    params.L = static_cast<double>(L);
    const QdsBounds b = qds_security(params);
    const double log_eps = std::log(target_eps);
    return b.log_p_forge <= log_eps && b.log_p_repud <= log_eps;
  };
  auto L = static_cast<std::uint64_t>(std::max(0.0, std::ceil(std::log(1.0 / target_eps) / d)));
  // exp/log rounding can leave the ceiling one step off either way.
  while (!meets(L)) ++L;
  while (L > 0 && meets(L - 1)) --L;
  return L;
}

}  // namespace qkd
