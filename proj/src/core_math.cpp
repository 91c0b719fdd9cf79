#include "qkd/core_math.hpp"

#include <algorithm>
#include <cmath>

namespace qkd {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "domain error";
    case Errc::zero_trials: return "zero trials";
    case Errc::dead_link: return "dead link";
    case Errc::length_mismatch: return "length mismatch";
    case Errc::too_few_samples: return "too few samples";
    case Errc::empty_sample: return "empty sample";
    case Errc::missing_cell: return "missing cell";
    case Errc::malformed_pair: return "malformed pair";
    case Errc::degenerate_intensities: return "degenerate intensities";
    case Errc::insufficient_single_photon_yield: return "insufficient single-photon yield";
    case Errc::no_pair_yield: return "no single-photon-pair yield";
    case Errc::nonphysical_covariance: return "non-physical covariance";
    case Errc::zero_signal_variance: return "zero signal variance";
    case Errc::unreachable_target: return "unreachable target";
    case Errc::invalid_config: return "invalid configuration";
    case Errc::unresolvable_path: return "unresolvable field path";
    case Errc::infeasible_region: return "empty feasible region";
    case Errc::unimplemented: return "unimplemented";
  }
  return "unknown";
}

SecurityBudget::SecurityBudget(double eps_sec, double eps_cor, double eps_pe, double eps_auth)
    : eps_sec_(eps_sec), eps_cor_(eps_cor), eps_pe_(eps_pe), eps_auth_(eps_auth) {
  for (double eps : {eps_sec, eps_cor, eps_pe, eps_auth}) {
    require(eps > 0.0 && std::isfinite(eps), Errc::domain, "security budget components must be > 0");
  }
}

namespace {

// x·log(x/y) with the 0·log 0 = 0 convention.
double xlogy_ratio(double x, double y) {
  if (x == 0.0) return 0.0;
  require(y > 0.0, Errc::domain, "kl_divergence: reference probability excludes observed outcome");
  return x * std::log(x / y);
}

}  // namespace

double binary_entropy(double x) {
  require(x >= 0.0 && x <= 1.0, Errc::domain, "binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double kl_divergence(double p, double q) {
  require(p >= 0.0 && p <= 1.0, Errc::domain, "kl_divergence: p outside [0,1]");
  require(q >= 0.0 && q <= 1.0, Errc::domain, "kl_divergence: q outside [0,1]");
  const double d = xlogy_ratio(p, q) + xlogy_ratio(1.0 - p, 1.0 - q);
  return std::max(0.0, d);
}

double poisson_pmf(std::uint32_t n, double mu) {
  require(mu >= 0.0 && std::isfinite(mu), Errc::domain, "poisson_pmf: mean must be >= 0");
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  const double log_pmf = n * std::log(mu) - mu - std::lgamma(static_cast<double>(n) + 1.0);
  return std::exp(log_pmf);
}

std::uint32_t poisson_truncation(double mu, double tail) {
  require(mu >= 0.0, Errc::domain, "poisson_truncation: mean must be >= 0");
  std::uint32_t n = 0;
  for (;; ++n) {
    // Past the mode the remaining mass is bounded by a geometric series.
    if (n + 1 > mu) {
      const double ratio = mu / (n + 2.0);
      const double bound = poisson_pmf(n + 1, mu) / (1.0 - ratio);
      if (bound < tail) break;
    }
  }
  return n;
}

double hoeffding_half_width(std::uint64_t trials, Probability confidence) {
  require(trials >= 1, Errc::zero_trials, "hoeffding_interval: zero trials");
  require(confidence.value() < 1.0, Errc::domain, "hoeffding_interval: confidence must be < 1");
  return std::sqrt(std::log(2.0 / (1.0 - confidence.value())) / (2.0 * static_cast<double>(trials)));
}

ConfidenceInterval hoeffding_interval(std::uint64_t successes, std::uint64_t trials, Probability confidence) {
  const double half = hoeffding_half_width(trials, confidence);
  require(successes <= trials, Errc::domain, "hoeffding_interval: successes exceed trials");
  const double center = static_cast<double>(successes) / static_cast<double>(trials);
  return {std::max(0.0, center - half), std::min(1.0, center + half), confidence};
}

double finite_key_penalty(double blocks, double eps_sec) {
  require(blocks >= 1.0, Errc::domain, "finite_key_penalty: N must be >= 1");
  require(eps_sec > 0.0 && eps_sec <= 2.0, Errc::domain, "finite_key_penalty: eps_sec outside (0,2]");
  if (std::isinf(blocks)) return 0.0;
  return std::sqrt(std::log(2.0 / eps_sec) / blocks);
}

}  // namespace qkd
