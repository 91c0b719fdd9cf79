#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qkd/config.hpp"

namespace qkd {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

struct Report {
  Json config;
  Protocol protocol = Protocol::bb84;
  Mode mode = Mode::analytic;
  bool aborted = false;
  std::string abort_reason;

  std::optional<double> rate_per_pulse;  // absent when aborted
  std::optional<double> rate_bps;
  double signed_rate = 0.0;  // before flooring, kept for sweep plots

  std::optional<double> qber;
  std::optional<ConfidenceInterval> qber_interval;
  std::optional<double> sift_fraction;
  std::optional<double> detection_probability;

  std::uint64_t sifted_len = 0;
  std::uint64_t leak_ec = 0;
  std::uint64_t leak_auth = 0;
  std::optional<double> phase_error;
  std::uint64_t final_len = 0;
  double eps_tot = 0.0;

  Json details = Json::object();  // protocol-specific quantities
  std::vector<std::string> notes;
  double elapsed_seconds = 0.0;
};

/// Runs one protocol end to end. Channel failures and missing single-photon
/// yields become aborted reports; config problems throw.
Report run_pipeline(const RunConfig& config);

/// Seed for sweep point `index`: the base seed itself for index 0, then
/// distinct splitmix64 derivations.
std::uint64_t sweep_point_seed(std::uint64_t base, std::size_t index);

struct SweepPoint {
  double value = 0.0;
  Report report;
};

/// One pipeline run per value with `variable` set to it, in input order.
std::vector<SweepPoint> sweep(const RunConfig& config, std::string_view variable, const std::vector<double>& values);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct OptimizeBounds {
  Interval mu;
  Interval nu;
};

struct OptimizeOptions {
  std::size_t grid_points = 8;
  std::size_t refinement_rounds = 3;
  double shrink = 0.5;
  bool allow_monte_carlo = false;
  std::uint64_t min_monte_carlo_pulses = 10000000;
};

struct OptimizeResult {
  IntensitySet best;
  double best_signed_rate = 0.0;
  double best_rate = 0.0;  // floored at 0
  std::size_t evaluations = 0;
};

/// Grid search followed by coordinate descent over (μ, ν) for bb84-decoy.
/// ω and the usage fractions stay as configured. Ties go to larger μ, then
/// larger ν. The configured (μ, ν) is evaluated too when it lies in bounds.
OptimizeResult optimize_intensities(const RunConfig& config, const OptimizeBounds& bounds,
                                    const OptimizeOptions& options = {});

/// Applies `fn` to every item on up to hardware_concurrency threads. Results
/// keep input order; the first exception in input order is rethrown.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, Fn fn) -> std::vector<decltype(fn(items[0], std::size_t{}))> {
  using R = decltype(fn(items[0], std::size_t{}));
  std::vector<std::optional<R>> slots(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(items.size(), std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        slots[i].emplace(fn(items[i], i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  std::vector<R> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace qkd
