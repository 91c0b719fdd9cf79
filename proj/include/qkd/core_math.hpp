#pragma once

#include <cstdint>

#include "qkd/error.hpp"

namespace qkd {

/// A real number in [0, 1]. Construction rejects anything outside the range
/// (including NaN) with Errc::domain.
class Probability {
 public:
  constexpr Probability() = default;
  constexpr Probability(double value) : value_(value) {  // NOLINT(google-explicit-constructor)
    if (!(value >= 0.0 && value <= 1.0)) fail(Errc::domain, "probability outside [0,1]");
  }

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }  // NOLINT

 private:
  double value_ = 0.0;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  Probability confidence{};

  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

/// Composable failure probabilities. Every component must be > 0.
class SecurityBudget {
 public:
  SecurityBudget(double eps_sec, double eps_cor, double eps_pe, double eps_auth);

  double eps_sec() const noexcept { return eps_sec_; }
  double eps_cor() const noexcept { return eps_cor_; }
  double eps_pe() const noexcept { return eps_pe_; }
  double eps_auth() const noexcept { return eps_auth_; }

 private:
  double eps_sec_, eps_cor_, eps_pe_, eps_auth_;
};

/// Shannon entropy of a Bernoulli(x) variable in bits, with 0·log 0 = 0.
double binary_entropy(double x);

/// D(Bern(p) || Bern(q)) in nats. q may sit on {0,1} only when the matching
/// p term vanishes; otherwise the divergence is infinite and Errc::domain is thrown.
double kl_divergence(double p, double q);

/// μⁿe^{−μ}/n!, evaluated in log space so large n does not overflow.
double poisson_pmf(std::uint32_t n, double mu);

/// Smallest photon number N such that the Poisson(μ) tail mass beyond N is
/// below `tail`. Used to truncate yield summations.
std::uint32_t poisson_truncation(double mu, double tail = 1e-15);

/// Two-sided Hoeffding interval around k/n, clamped to [0,1].
ConfidenceInterval hoeffding_interval(std::uint64_t successes, std::uint64_t trials, Probability confidence);

/// Half-width of the Hoeffding interval, without centering or clamping.
double hoeffding_half_width(std::uint64_t trials, Probability confidence);

/// √(ln(2/ε_sec)/N).
double finite_key_penalty(double blocks, double eps_sec);

}  // namespace qkd
