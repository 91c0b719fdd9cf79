#include <doctest.h>

#include <fstream>
#include <optional>

#include "qkd/config.hpp"
#include "qkd/error.hpp"
#include "support.hpp"

using namespace qkd;

namespace {

std::optional<Errc> code_of(const Json& user) {
  try {
    parse_config(user);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

Json mdi_block() {
  return {{"gains", Json::array({{{"alice", 0.0}, {"bob", 0.0}, {"gain", 1e-6}, {"qber", 0.5}},
                                 {{"alice", 0.1}, {"bob", 0.1}, {"gain", 0.01}, {"qber", 0.02}},
                                 {{"alice", 0.5}, {"bob", 0.1}, {"gain", 0.008}, {"qber", 0.03}},
                                 {{"alice", 0.5}, {"bob", 0.5}, {"gain", 0.012}, {"qber", 0.02}}})}};
}

Json tf_block() {
  return {{"total_N", 1e9},
          {"slices", Json::array({{{"N_k", 1e9}, {"Y11", 0.01}, {"e11_phase", 0.03}, {"Q_mumu", 0.012},
                                   {"E_mumu", 0.02}}})}};
}

}  // namespace

TEST_CASE("defaults fill every field") {
  const RunConfig c = parse_config({{"protocol", "bb84-decoy"}});
  CHECK(c.protocol == Protocol::bb84_decoy);
  CHECK(c.mode == Mode::analytic);
  CHECK_FALSE(c.seed.has_value());
  CHECK(c.pulses == 1000000);
  CHECK(c.link.fiber.attenuation_db_per_km == 0.2);
  CHECK(c.link.detector.efficiency.value() == 0.2);
  CHECK(c.reconciliation.efficiency_f == 1.16);
  CHECK(c.estimator == EstimatorId::lmc_reference);
  REQUIRE(c.intensities.has_value());
  CHECK(c.intensities->signal_mu == 0.5);
  CHECK(c.intensities->decoy_nu == 0.1);
  CHECK_FALSE(c.e91.has_value());
  CHECK(c.doc["intensities"]["usage_fractions"].size() == 3);
  CHECK(c.doc["wdm_coexistence"].is_null());
  CHECK(c.doc == parse_config(c.doc).doc);

  for (const char* name : {"bb84", "bb84-decoy", "e91", "dps", "cow", "rrdps", "cv"}) {
    const RunConfig d = parse_config({{"protocol", name}});
    CHECK(to_string(d.protocol) == name);
    CHECK(d.doc == default_config(d.protocol));
  }
}

TEST_CASE("example config files parse") {
  const RunConfig c = load_config_file(QKD_SOURCE_DIR "/configs/decoy-default.json");
  CHECK(c.seed == 20240601u);
  CHECK(c.pulses == 10000000000ull);
  CHECK(c.link.fiber.length_km == 50.0);
  CHECK(c.link.optics.visibility.value() == 0.99);
  for (const char* f : {"bb84", "e91", "mdi", "tf", "dps", "cow", "rrdps", "cv"}) {
    CAPTURE(f);
    CHECK_NOTHROW(load_config_file(std::string(QKD_SOURCE_DIR "/configs/") + f + ".json"));
  }
}

TEST_CASE("rejections") {
  CHECK(code_of({{"protocol", "bb84"}, {"colour", 1}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"fiber", {{"lenght_km", 5}}}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb85"}}) == Errc::invalid_config);
  CHECK(code_of(Json::object()) == Errc::invalid_config);
  CHECK(code_of(Json::array()) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"intensities", {{"mu", 0.5}}}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84-decoy"}, {"cv", Json::object()}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "mdi"}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "tf"}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "mdi"}, {"mdi", mdi_block()}}) == std::nullopt);
  CHECK(code_of({{"protocol", "tf"}, {"tf", tf_block()}}) == std::nullopt);

  Json degenerate = mdi_block();
  degenerate["nu"] = 0.5;
  CHECK(code_of({{"protocol", "mdi"}, {"mdi", degenerate}}) == Errc::degenerate_intensities);

  CHECK(code_of({{"protocol", "bb84"}, {"wdm_coexistence", {{"channels", 4}}}}) == Errc::unimplemented);
  CHECK(code_of({{"protocol", "bb84"}, {"pulses", 0}}) == Errc::zero_trials);
  CHECK(code_of({{"protocol", "bb84"}, {"pulses", 1.5}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"pulses", -3}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"seed", -1}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"seed", "7"}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"seed", 1.5}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"mode", "quantum"}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"detector", {{"efficiency", 1.2}}}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"fiber", 3}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"sample_fraction", 1.0}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"estimator", "best"}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"reconciliation", {{"efficiency_f", 0.9}}}}).has_value());
  CHECK(code_of({{"protocol", "bb84-decoy"}, {"intensities", {{"usage_fractions", {0.5, 0.5}}}}}) ==
        Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84-decoy"}, {"intensities", {{"mu", 0.05}}}}).has_value());
  CHECK(code_of({{"protocol", "rrdps"}, {"rrdps", {{"block_length", 1}}}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "cow"}, {"cow", {{"monitor_fraction", 1.0}}}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "cv"}, {"cv", {{"convention", "other"}}}}) == Errc::invalid_config);

  try {
    parse_config({{"protocol", "bb84"}, {"fiber", {{"length_km", "far"}}}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("fiber.length_km") != std::string::npos);
  }
}

TEST_CASE("closed-form protocols are analytic only") {
  CHECK(code_of({{"protocol", "dps"}, {"mode", "monte-carlo"}, {"seed", 1}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "cow"}, {"mode", "monte-carlo"}, {"seed", 1}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "rrdps"}, {"mode", "monte-carlo"}, {"seed", 1}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "mdi"}, {"mode", "monte-carlo"}, {"mdi", mdi_block()}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "tf"}, {"mode", "monte-carlo"}, {"tf", tf_block()}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "bb84"}, {"mode", "monte-carlo"}, {"seed", 1}}) == std::nullopt);
  CHECK(code_of({{"protocol", "bb84"}, {"mode", "monte-carlo"}, {"pulses", 50}}) == Errc::invalid_config);
  CHECK(code_of({{"protocol", "cv"}, {"mode", "monte-carlo"}, {"pulses", 5000}}) == Errc::invalid_config);
}

TEST_CASE("cv transmittance source") {
  const RunConfig fiber = parse_config({{"protocol", "cv"}, {"fiber", {{"length_km", 25}}}});
  CHECK(fiber.cv->transmittance_from_fiber);
  CHECK(fiber.cv->params.transmittance == doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-15));
  const RunConfig fixed = parse_config({{"protocol", "cv"}, {"cv", {{"transmittance", 0.3}}}});
  CHECK_FALSE(fixed.cv->transmittance_from_fiber);
  CHECK(fixed.cv->params.transmittance == 0.3);
}

TEST_CASE("paths and overrides") {
  const RunConfig c = parse_config({{"protocol", "bb84-decoy"}});
  CHECK(get_path(c.doc, "fiber.length_km") == 0.0);
  CHECK(get_path(c.doc, "intensities.mu") == 0.5);
  for (const char* bad : {"fiber.length", "fiber..length_km", "", "fiber.length_km.x", "nothing"}) {
    CAPTURE(bad);
    try {
      get_path(c.doc, bad);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unresolvable_path);
    }
  }

  Json doc = c.doc;
  set_path(doc, "detector.efficiency", 0.3);
  CHECK(doc["detector"]["efficiency"] == 0.3);
  CHECK_THROWS_AS(set_path(doc, "detector.gain", 1), Error);

  const RunConfig o = apply_overrides(c, {{"fiber.length_km", "75"}, {"seed", "9"}, {"estimator", "paper-alg3"}});
  CHECK(o.link.fiber.length_km == 75.0);
  CHECK(o.seed == 9u);
  CHECK(o.estimator == EstimatorId::paper_alg3);
  CHECK(c.link.fiber.length_km == 0.0);

  const RunConfig later = apply_overrides(c, {{"fiber.length_km", "10"}, {"fiber.length_km", "20"}});
  CHECK(later.link.fiber.length_km == 20.0);

  try {
    apply_overrides(c, {{"fiber.length_km", "far"}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_config);
  }
  try {
    apply_overrides(c, {{"fibre.length_km", "1"}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unresolvable_path);
  }

  CHECK(with_value(c, "intensities.nu", 0.2).intensities->decoy_nu == 0.2);
}

TEST_CASE("override values") {
  CHECK(parse_override_value("75") == 75);
  CHECK(parse_override_value("0.25") == 0.25);
  CHECK(parse_override_value("true") == true);
  CHECK(parse_override_value("null").is_null());
  CHECK(parse_override_value("[0.7,0.2,0.1]").size() == 3);
  CHECK(parse_override_value("lmc-reference") == "lmc-reference");
  CHECK(parse_override_value("\"quoted\"") == "quoted");
  CHECK(parse_override_value("") == "");
}

TEST_CASE("config files") {
  const std::string path = testutil::scratch("config_bad.json");
  {
    std::ofstream f(path);
    f << "{\"protocol\": \"bb84\",";
  }
  CHECK_THROWS_AS(load_config_file(path), Error);
  CHECK_THROWS_AS(load_config_file(testutil::scratch("does_not_exist.json")), Error);
}
