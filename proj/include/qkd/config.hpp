#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qkd/advanced_rates.hpp"
#include "qkd/cv.hpp"
#include "qkd/decoy.hpp"
#include "qkd/dv_protocols.hpp"
#include "qkd/postprocessing.hpp"

namespace qkd {

using Json = nlohmann::ordered_json;

enum class Protocol { bb84, bb84_decoy, e91, mdi, tf, dps, cow, rrdps, cv };

std::string_view to_string(Protocol p) noexcept;
Protocol protocol_from_string(std::string_view name);
std::string_view to_string(Mode m) noexcept;

struct E91Config {
  ChshAngles angles;
  double key_fraction = 2.0 / 9.0;  // share of pairs measured in matching key bases
};

struct MdiConfig {
  double mu = 0.5;
  double nu = 0.1;
  double omega = 0.0;
  GainTable2D gains;
};

struct CowConfig {
  Probability monitor_fraction{0.1};
};

struct RrdpsConfig {
  std::uint32_t block_length = 128;
};

struct CvConfig {
  CvParams params;
  bool transmittance_from_fiber = true;
  CvConvention convention = CvConvention::paper;
};

/// Typed view of a fully defaulted configuration document. `doc` is the
/// canonical echo; the typed fields are derived from it.
struct RunConfig {
  Protocol protocol = Protocol::bb84;
  Mode mode = Mode::analytic;
  std::optional<std::uint64_t> seed;
  std::uint64_t pulses = 1000000;
  LinkModel link;
  SecurityBudget budget{1e-10, 1e-10, 1e-10, 1e-10};
  ReconciliationModel reconciliation;
  EstimatorId estimator = EstimatorId::lmc_reference;
  Probability sample_fraction{0.1};
  Probability confidence{0.99};
  double repetition_rate_hz = 1e9;
  std::uint64_t leak_auth_bits = 128;

  std::optional<IntensitySet> intensities;
  std::optional<E91Config> e91;
  std::optional<MdiConfig> mdi;
  std::optional<TfSliceData> tf;
  std::optional<CowConfig> cow;
  std::optional<RrdpsConfig> rrdps;
  std::optional<CvConfig> cv;

  Json doc;
};

/// Defaults for every field a configuration of `protocol` may carry.
Json default_config(Protocol protocol);

/// Merges `user` onto the defaults for its protocol and validates the result.
/// Unknown fields, misplaced protocol blocks and type errors throw
/// Errc::invalid_config; reserved features throw Errc::unimplemented.
RunConfig parse_config(const Json& user);

RunConfig load_config_file(const std::string& path);

/// Replaces the value at a dotted path such as `fiber.length_km`. The path must
/// already exist in the defaulted document (Errc::unresolvable_path).
void set_path(Json& doc, std::string_view path, Json value);
const Json& get_path(const Json& doc, std::string_view path);

/// Applies `path=value` overrides in order and re-validates. Values parse as
/// JSON when possible, otherwise as a string.
RunConfig apply_overrides(const RunConfig& config, const std::vector<std::pair<std::string, std::string>>& overrides);
RunConfig with_value(const RunConfig& config, std::string_view path, Json value);

Json parse_override_value(std::string_view text);

}  // namespace qkd
