#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qkd {

/// Failure categories surfaced by the toolkit. Engine code maps protocol-level
/// categories onto structured abort reasons; the rest are usage/config errors.
enum class Errc {
  domain,
  zero_trials,
  dead_link,
  length_mismatch,
  too_few_samples,
  empty_sample,
  missing_cell,
  malformed_pair,
  degenerate_intensities,
  insufficient_single_photon_yield,
  no_pair_yield,
  nonphysical_covariance,
  zero_signal_variance,
  unreachable_target,
  invalid_config,
  unresolvable_path,
  infeasible_region,
  unimplemented,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, Errc code, const char* what) {
  if (!condition) fail(code, what);
}

}  // namespace qkd
