#include "qkd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qkd {

namespace {

constexpr std::array<std::pair<Protocol, std::string_view>, 9> kProtocolNames{{
    {Protocol::bb84, "bb84"},
    {Protocol::bb84_decoy, "bb84-decoy"},
    {Protocol::e91, "e91"},
    {Protocol::mdi, "mdi"},
    {Protocol::tf, "tf"},
    {Protocol::dps, "dps"},
    {Protocol::cow, "cow"},
    {Protocol::rrdps, "rrdps"},
    {Protocol::cv, "cv"},
}};

// Protocol blocks and the protocol that owns each one.
constexpr std::array<std::pair<std::string_view, Protocol>, 7> kBlocks{{
    {"intensities", Protocol::bb84_decoy},
    {"e91", Protocol::e91},
    {"mdi", Protocol::mdi},
    {"tf", Protocol::tf},
    {"cow", Protocol::cow},
    {"rrdps", Protocol::rrdps},
    {"cv", Protocol::cv},
}};

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(Errc::invalid_config, "config field '" + path + "': " + what);
}

const Json& field(const Json& obj, const std::string& prefix, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(prefix + key, "missing");
  return *it;
}

double number(const Json& obj, const std::string& prefix, const char* key) {
  const Json& v = field(obj, prefix, key);
  if (!v.is_number()) bad(prefix + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(prefix + key, "must be finite");
  return x;
}

Probability probability(const Json& obj, const std::string& prefix, const char* key) {
  const double x = number(obj, prefix, key);
  if (x < 0.0 || x > 1.0) bad(prefix + key, "must lie in [0,1]");
  return x;
}

std::uint64_t count(const Json& obj, const std::string& prefix, const char* key) {
  const double x = number(obj, prefix, key);
  if (x < 0.0 || x != std::floor(x) || x >= 18446744073709551616.0) bad(prefix + key, "expected a whole count");
  if (field(obj, prefix, key).is_number_unsigned()) return field(obj, prefix, key).get<std::uint64_t>();
  return static_cast<std::uint64_t>(x);
}

std::string text(const Json& obj, const std::string& prefix, const char* key) {
  const Json& v = field(obj, prefix, key);
  if (!v.is_string()) bad(prefix + key, "expected a string");
  return v.get<std::string>();
}

const Json& object(const Json& obj, const std::string& prefix, const char* key) {
  const Json& v = field(obj, prefix, key);
  if (!v.is_object()) bad(prefix + key, "expected an object");
  return v;
}

void merge_into(Json& base, const Json& user, const std::string& prefix) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix + it.key();
    auto slot = base.find(it.key());
    if (slot == base.end()) bad(path, "unknown field");
    if (slot->is_object()) {
      if (!it.value().is_object()) bad(path, "expected an object");
      merge_into(*slot, it.value(), path + ".");
    } else if (slot->is_number_float() && it.value().is_number()) {
      *slot = it.value().get<double>();  // canonical echo: 50 and 50.0 serialize alike
    } else {
      *slot = it.value();
    }
  }
}

Json block_defaults(std::string_view block) {
  if (block == "intensities") {
    return {{"mu", 0.5}, {"nu", 0.1}, {"omega", 0.0}, {"usage_fractions", {0.8, 0.15, 0.05}}};
  }
  if (block == "e91") {
    return {{"angles_deg", {{"a", 0.0}, {"a_prime", 45.0}, {"b", 22.5}, {"b_prime", 157.5}}},
            {"key_fraction", 2.0 / 9.0}};
  }
  if (block == "mdi") return {{"mu", 0.5}, {"nu", 0.1}, {"omega", 0.0}, {"gains", nullptr}};
  if (block == "tf") return {{"total_N", nullptr}, {"slices", nullptr}};
  if (block == "cow") return {{"monitor_fraction", 0.1}};
  if (block == "rrdps") return {{"block_length", 128}};
  return {{"modulation_variance", 4.0},
          {"transmittance", nullptr},
          {"excess_noise", 0.01},
          {"reconciliation_efficiency", 0.95},
          {"convention", "paper"}};
}

IntensitySet parse_intensities(const Json& j) {
  const std::string p = "intensities.";
  IntensitySet s;
  s.signal_mu = number(j, p, "mu");
  s.decoy_nu = number(j, p, "nu");
  s.vacuum_omega = number(j, p, "omega");
  const Json& fr = field(j, p, "usage_fractions");
  if (!fr.is_array() || fr.size() != 3) bad(p + "usage_fractions", "expected three numbers");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!fr[i].is_number()) bad(p + "usage_fractions", "expected three numbers");
    s.usage_fractions[i] = fr[i].get<double>();
  }
  s.validate();
  return s;
}

E91Config parse_e91(const Json& j) {
  const std::string p = "e91.";
  E91Config c;
  const Json& a = object(j, p, "angles_deg");
  const std::string pa = p + "angles_deg.";
  c.angles = {number(a, pa, "a"), number(a, pa, "a_prime"), number(a, pa, "b"), number(a, pa, "b_prime")};
  c.key_fraction = probability(j, p, "key_fraction");
  return c;
}

MdiConfig parse_mdi(const Json& j) {
  const std::string p = "mdi.";
  MdiConfig c;
  c.mu = number(j, p, "mu");
  c.nu = number(j, p, "nu");
  c.omega = number(j, p, "omega");
  if (!(c.mu > c.nu && c.nu > c.omega && c.omega >= 0.0)) {
    fail(Errc::degenerate_intensities, "config field 'mdi': requires mu > nu > omega >= 0");
  }
  const Json& gains = field(j, p, "gains");
  if (!gains.is_array() || gains.empty()) bad(p + "gains", "required: array of {alice, bob, gain, qber}");
  for (const Json& cell : gains) {
    if (!cell.is_object()) bad(p + "gains", "entries must be objects");
    for (auto it = cell.begin(); it != cell.end(); ++it) {
      if (it.key() != "alice" && it.key() != "bob" && it.key() != "gain" && it.key() != "qber") {
        bad(p + "gains." + it.key(), "unknown field");
      }
    }
    const std::string pc = p + "gains[].";
    c.gains.set(number(cell, pc, "alice"), number(cell, pc, "bob"),
                {probability(cell, pc, "gain"), probability(cell, pc, "qber")});
  }
  return c;
}

TfSliceData parse_tf(const Json& j) {
  const std::string p = "tf.";
  TfSliceData d;
  if (field(j, p, "total_N").is_null()) bad(p + "total_N", "required");
  d.total_N = number(j, p, "total_N");
  const Json& slices = field(j, p, "slices");
  if (!slices.is_array()) bad(p + "slices", "required: array of slice objects");
  for (const Json& s : slices) {
    if (!s.is_object()) bad(p + "slices", "entries must be objects");
    for (auto it = s.begin(); it != s.end(); ++it) {
      const std::string& k = it.key();
      if (k != "N_k" && k != "Y11" && k != "e11_phase" && k != "Q_mumu" && k != "E_mumu") {
        bad(p + "slices." + k, "unknown field");
      }
    }
    const std::string ps = p + "slices[].";
    d.slices.push_back({number(s, ps, "N_k"), probability(s, ps, "Y11"), probability(s, ps, "e11_phase"),
                        probability(s, ps, "Q_mumu"), probability(s, ps, "E_mumu")});
  }
  d.validate();
  return d;
}

CvConfig parse_cv(const Json& j, const FiberLink& fiber) {
  const std::string p = "cv.";
  CvConfig c;
  c.params.modulation_variance = number(j, p, "modulation_variance");
  c.transmittance_from_fiber = field(j, p, "transmittance").is_null();
  c.params.transmittance =
      c.transmittance_from_fiber ? transmissivity(fiber).value() : probability(j, p, "transmittance").value();
  c.params.excess_noise = number(j, p, "excess_noise");
  c.params.reconciliation_efficiency = number(j, p, "reconciliation_efficiency");
  const std::string conv = text(j, p, "convention");
  if (conv == "paper") {
    c.convention = CvConvention::paper;
  } else if (conv == "consistent") {
    c.convention = CvConvention::consistent;
  } else {
    bad(p + "convention", "expected 'paper' or 'consistent'");
  }
  c.params.validate();
  return c;
}

RunConfig typed(Json doc) {
  RunConfig c;
  const std::string top;
  c.protocol = protocol_from_string(text(doc, top, "protocol"));

  const std::string mode = text(doc, top, "mode");
  if (mode == "analytic") {
    c.mode = Mode::analytic;
  } else if (mode == "monte-carlo") {
    c.mode = Mode::monte_carlo;
  } else {
    bad("mode", "expected 'analytic' or 'monte-carlo'");
  }
  if (!doc["seed"].is_null()) {
    const Json& seed = doc["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      bad("seed", "expected a non-negative integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  c.pulses = count(doc, top, "pulses");
  if (c.pulses == 0) fail(Errc::zero_trials, "config field 'pulses': must be positive");
  c.repetition_rate_hz = number(doc, top, "repetition_rate_hz");
  if (c.repetition_rate_hz < 0.0) bad("repetition_rate_hz", "must be non-negative");
  c.sample_fraction = probability(doc, top, "sample_fraction");
  if (c.sample_fraction.value() <= 0.0 || c.sample_fraction.value() >= 1.0) bad("sample_fraction", "must lie in (0,1)");
  c.confidence = probability(doc, top, "confidence");
  if (c.confidence.value() <= 0.0 || c.confidence.value() >= 1.0) bad("confidence", "must lie in (0,1)");
  c.estimator = estimator_from_string(text(doc, top, "estimator"));
  c.leak_auth_bits = count(doc, top, "leak_auth_bits");

  const Json& fiber = object(doc, top, "fiber");
  c.link.fiber = {number(fiber, "fiber.", "attenuation_db_per_km"), number(fiber, "fiber.", "length_km"),
                  number(fiber, "fiber.", "extra_loss_db")};
  const Json& det = object(doc, top, "detector");
  c.link.detector = {probability(det, "detector.", "efficiency"), probability(det, "detector.", "dark_count_prob")};
  const Json& opt = object(doc, top, "optics");
  c.link.optics = {probability(opt, "optics.", "visibility"), probability(opt, "optics.", "misalignment_qber")};
  c.link.mean_photon_number = number(doc, top, "mean_photon_number");
  c.link.validate();

  const Json& b = object(doc, top, "budget");
  c.budget = SecurityBudget(number(b, "budget.", "eps_sec"), number(b, "budget.", "eps_cor"),
                            number(b, "budget.", "eps_pe"), number(b, "budget.", "eps_auth"));
  const Json& rec = object(doc, top, "reconciliation");
  c.reconciliation.efficiency_f = number(rec, "reconciliation.", "efficiency_f");
  c.reconciliation.validate();

  if (!doc["wdm_coexistence"].is_null()) {
    fail(Errc::unimplemented, "config field 'wdm_coexistence': WDM co-existence has no model and is not supported");
  }

  switch (c.protocol) {
    case Protocol::bb84_decoy: c.intensities = parse_intensities(doc["intensities"]); break;
    case Protocol::e91: c.e91 = parse_e91(doc["e91"]); break;
    case Protocol::mdi: c.mdi = parse_mdi(doc["mdi"]); break;
    case Protocol::tf: c.tf = parse_tf(doc["tf"]); break;
    case Protocol::cow:
      c.cow = CowConfig{probability(doc["cow"], "cow.", "monitor_fraction")};
      if (c.cow->monitor_fraction.value() >= 1.0) bad("cow.monitor_fraction", "must lie in [0,1)");
      break;
    case Protocol::rrdps: {
      const std::uint64_t L = count(doc["rrdps"], "rrdps.", "block_length");
      if (L < 2 || L > 1u << 20) bad("rrdps.block_length", "must lie in [2, 2^20]");
      c.rrdps = RrdpsConfig{static_cast<std::uint32_t>(L)};
      break;
    }
    case Protocol::cv: c.cv = parse_cv(doc["cv"], c.link.fiber); break;
    default: break;
  }

  const bool analytic_only = c.protocol == Protocol::mdi || c.protocol == Protocol::tf ||
                             c.protocol == Protocol::dps || c.protocol == Protocol::cow ||
                             c.protocol == Protocol::rrdps;
  if (analytic_only && c.mode == Mode::monte_carlo) {
    bad("mode", "protocol '" + std::string(to_string(c.protocol)) + "' is a closed-form calculator; use 'analytic'");
  }
  if (c.mode == Mode::monte_carlo) {
    if (c.protocol == Protocol::bb84 && c.pulses < 100) bad("pulses", "monte-carlo bb84 needs at least 100 pulses");
    if (c.protocol == Protocol::e91 && c.pulses < 4000) bad("pulses", "monte-carlo e91 needs at least 1000 pairs per cell");
    if (c.protocol == Protocol::cv && c.pulses < 10000) bad("pulses", "monte-carlo cv needs at least 10^4 symbols");
    if (c.pulses > 2000000000ull) bad("pulses", "monte-carlo runs are limited to 2e9 pulses");
  }

  c.doc = std::move(doc);
  return c;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    parts.emplace_back(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (parts.back().empty()) fail(Errc::unresolvable_path, "empty component in path '" + std::string(path) + "'");
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

}  // namespace

std::string_view to_string(Protocol p) noexcept {
  for (const auto& [id, name] : kProtocolNames) {
    if (id == p) return name;
  }
  return "unknown";
}

Protocol protocol_from_string(std::string_view name) {
  for (const auto& [id, n] : kProtocolNames) {
    if (n == name) return id;
  }
  fail(Errc::invalid_config, "unknown protocol '" + std::string(name) + "'");
}

std::string_view to_string(Mode m) noexcept { return m == Mode::analytic ? "analytic" : "monte-carlo"; }

Json default_config(Protocol protocol) {
  Json doc = {
      {"protocol", std::string(to_string(protocol))},
      {"mode", "analytic"},
      {"seed", nullptr},
      {"pulses", 1000000},
      {"repetition_rate_hz", 1e9},
      {"sample_fraction", 0.1},
      {"confidence", 0.99},
      {"estimator", "lmc-reference"},
      {"leak_auth_bits", 128},
      {"fiber", {{"attenuation_db_per_km", 0.2}, {"length_km", 0.0}, {"extra_loss_db", 0.0}}},
      {"detector", {{"efficiency", 0.2}, {"dark_count_prob", 1e-5}}},
      {"optics", {{"visibility", 1.0}, {"misalignment_qber", 0.0}}},
      {"mean_photon_number", 0.5},
      {"budget", {{"eps_sec", 1e-10}, {"eps_cor", 1e-10}, {"eps_pe", 1e-10}, {"eps_auth", 1e-10}}},
      {"reconciliation", {{"efficiency_f", 1.16}}},
      {"wdm_coexistence", nullptr},
  };
  for (const auto& [block, owner] : kBlocks) {
    if (owner == protocol) doc[std::string(block)] = block_defaults(block);
  }
  return doc;
}

RunConfig parse_config(const Json& user) {
  if (!user.is_object()) fail(Errc::invalid_config, "config must be a JSON object");
  auto it = user.find("protocol");
  if (it == user.end() || !it->is_string()) bad("protocol", "required string");
  const Protocol protocol = protocol_from_string(it->get<std::string>());

  for (const auto& [block, owner] : kBlocks) {
    if (owner != protocol && user.contains(block)) {
      bad(std::string(block), "block does not apply to protocol '" + std::string(to_string(protocol)) + "'");
    }
  }
  if ((protocol == Protocol::mdi || protocol == Protocol::tf) && !user.contains(to_string(protocol))) {
    bad(std::string(to_string(protocol)), "block is required for this protocol");
  }

  Json doc = default_config(protocol);
  merge_into(doc, user, "");
  return typed(std::move(doc));
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::invalid_config, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json user;
  try {
    user = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    fail(Errc::invalid_config, "config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(user);
}

const Json& get_path(const Json& doc, std::string_view path) {
  const Json* node = &doc;
  for (const std::string& part : split_path(path)) {
    if (!node->is_object() || !node->contains(part)) {
      fail(Errc::unresolvable_path, "path '" + std::string(path) + "' does not name a config field");
    }
    node = &(*node)[part];
  }
  return *node;
}

void set_path(Json& doc, std::string_view path, Json value) {
  Json* node = &doc;
  for (const std::string& part : split_path(path)) {
    if (!node->is_object() || !node->contains(part)) {
      fail(Errc::unresolvable_path, "path '" + std::string(path) + "' does not name a config field");
    }
    node = &(*node)[part];
  }
  *node = std::move(value);
}

Json parse_override_value(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return Json(std::string(text));
  }
}

RunConfig with_value(const RunConfig& config, std::string_view path, Json value) {
  Json doc = config.doc;
  set_path(doc, path, std::move(value));
  return parse_config(doc);
}

RunConfig apply_overrides(const RunConfig& config, const std::vector<std::pair<std::string, std::string>>& overrides) {
  Json doc = config.doc;
  for (const auto& [path, value] : overrides) set_path(doc, path, parse_override_value(value));
  return parse_config(doc);
}

}  // namespace qkd
