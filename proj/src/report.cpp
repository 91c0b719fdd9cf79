#include "qkd/report.hpp"

#include <cmath>

#include "qkd/format.hpp"

namespace qkd {

namespace {

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

std::string cell(const Json& v, int precision) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) {
    const double x = v.get<double>();
    return std::isfinite(x) ? format_number(x, precision) : "";
  }
  return v.is_string() ? v.get<std::string>() : v.dump();
}

Json detail(const Report& r, const char* key) {
  auto it = r.details.find(key);
  return it == r.details.end() ? Json(nullptr) : *it;
}

void check_precision(int precision) {
  require(precision >= 1 && precision <= 17, Errc::invalid_config, "precision must lie in [1, 17]");
}

}  // namespace

void round_numbers(Json& j, int precision) {
  if (j.is_object() || j.is_array()) {
    for (auto& child : j) round_numbers(child, precision);
  } else if (j.is_number_float()) {
    const double x = j.get<double>();
    j = std::isfinite(x) ? Json(round_significant(x, precision)) : Json(nullptr);
  }
}

Json report_to_json(const Report& r, const SerializeOptions& options) {
  check_precision(options.precision);
  Json j;
  j["toolkit_version"] = std::string(kToolkitVersion);
  j["protocol"] = std::string(to_string(r.protocol));
  j["mode"] = std::string(to_string(r.mode));
  j["aborted"] = r.aborted;
  j["abort_reason"] = r.aborted ? Json(r.abort_reason) : Json(nullptr);
  j["rate_per_pulse"] = optional_number(r.rate_per_pulse);
  j["rate_bps"] = optional_number(r.rate_bps);
  j["signed_rate"] = r.signed_rate;
  j["qber"] = optional_number(r.qber);
  j["qber_interval"] = r.qber_interval ? Json{{"lower", r.qber_interval->lower},
                                              {"upper", r.qber_interval->upper},
                                              {"confidence", r.qber_interval->confidence.value()}}
                                       : Json(nullptr);
  j["sift_fraction"] = optional_number(r.sift_fraction);
  j["detection_probability"] = optional_number(r.detection_probability);
  j["accounting"] = {{"sifted_len", r.sifted_len},
                     {"leak_ec", r.leak_ec},
                     {"leak_auth", r.leak_auth},
                     {"phase_error", optional_number(r.phase_error)},
                     {"final_len", r.final_len},
                     {"eps_tot", r.eps_tot}};
  j["details"] = r.details;
  j["notes"] = r.notes;
  j["config"] = r.config;
  if (options.timing) j["timing"] = {{"elapsed_seconds", r.elapsed_seconds}};
  round_numbers(j, options.precision);
  return j;
}

Json optimize_to_json(const OptimizeResult& result, const RunConfig& config, const SerializeOptions& options) {
  check_precision(options.precision);
  Json j;
  j["toolkit_version"] = std::string(kToolkitVersion);
  j["protocol"] = std::string(to_string(config.protocol));
  j["best"] = {{"mu", result.best.signal_mu},
               {"nu", result.best.decoy_nu},
               {"omega", result.best.vacuum_omega},
               {"usage_fractions", result.best.usage_fractions}};
  j["best_rate"] = result.best_rate;
  j["best_signed_rate"] = result.best_signed_rate;
  j["evaluations"] = result.evaluations;
  j["config"] = config.doc;
  round_numbers(j, options.precision);
  return j;
}

Json sweep_to_json(const std::vector<SweepPoint>& curve, std::string_view variable, const SerializeOptions& options) {
  Json points = Json::array();
  for (const auto& p : curve) points.push_back({{"value", p.value}, {"report", report_to_json(p.report, options)}});
  Json j{{"toolkit_version", std::string(kToolkitVersion)}, {"variable", std::string(variable)}, {"points", points}};
  round_numbers(j, options.precision);
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> csv_columns(Protocol protocol) {
  std::vector<std::string> cols{"value", "rate_per_pulse", "rate_bps", "qber", "aborted"};
  std::vector<std::string> extra;
  switch (protocol) {
    case Protocol::bb84: extra = {"sift_fraction", "qber_lower", "qber_upper", "final_len"}; break;
    case Protocol::bb84_decoy: extra = {"Y0", "Y1", "e1", "Q1", "final_len"}; break;
    case Protocol::e91: extra = {"S", "final_len"}; break;
    case Protocol::mdi: extra = {"S11", "e11", "final_len"}; break;
    case Protocol::tf: extra = {"final_len"}; break;
    case Protocol::dps:
    case Protocol::cow: extra = {"p_click", "final_len"}; break;
    case Protocol::rrdps: extra = {"p_click", "adversary_info", "final_len"}; break;
    case Protocol::cv: extra = {"I_AB", "chi_BE", "estimated_T", "estimated_xi", "final_len"}; break;
  }
  cols.insert(cols.end(), extra.begin(), extra.end());
  return cols;
}

std::string csv_header(Protocol protocol) {
  std::string out;
  for (const auto& c : csv_columns(protocol)) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + "\n";
}

std::string csv_row(const SweepPoint& point, int precision) {
  check_precision(precision);
  const Report& r = point.report;
  std::string out;
  bool first = true;
  for (const auto& col : csv_columns(r.protocol)) {
    Json v;
    if (col == "value") {
      v = std::isnan(point.value) ? Json(nullptr) : Json(point.value);
    } else if (col == "rate_per_pulse") {
      v = optional_number(r.rate_per_pulse);
    } else if (col == "rate_bps") {
      v = optional_number(r.rate_bps);
    } else if (col == "qber") {
      v = optional_number(r.qber);
    } else if (col == "aborted") {
      v = r.aborted;
    } else if (col == "sift_fraction") {
      v = optional_number(r.sift_fraction);
    } else if (col == "qber_lower") {
      v = r.qber_interval ? Json(r.qber_interval->lower) : Json(nullptr);
    } else if (col == "qber_upper") {
      v = r.qber_interval ? Json(r.qber_interval->upper) : Json(nullptr);
    } else if (col == "final_len") {
      v = r.final_len;
    } else {
      v = detail(r, col.c_str());
    }
    if (!first) out += ',';
    first = false;
    out += cell(v, precision);
  }
  return out + "\n";
}

std::string sweep_to_csv(const std::vector<SweepPoint>& curve, Protocol protocol, int precision) {
  std::string out = csv_header(protocol);
  for (const auto& p : curve) out += csv_row(p, precision);
  return out;
}

}  // namespace qkd
