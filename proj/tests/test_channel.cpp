#include <doctest.h>

#include <cmath>

#include "qkd/channel.hpp"
#include "qkd/error.hpp"
#include "qkd/rng.hpp"
#include "support.hpp"

using namespace qkd;

namespace {

// 50 km at 0.2 dB/km gives η = 0.1.
LinkModel fixture_link() {
  LinkModel link;
  link.fiber = {0.2, 50.0, 0.0};
  link.detector = {0.2, 1e-5};
  link.optics = {0.98, 0.005};
  link.mean_photon_number = 0.5;
  return link;
}

}  // namespace

TEST_CASE("transmissivity") {
  CHECK(transmissivity({0.2, 50.0, 0.0}).value() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(transmissivity({0.2, 0.0, 0.0}).value() == 1.0);
  CHECK(transmissivity({0.2, 100.0, 0.0}).value() == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(transmissivity({0.2, 40.0, 2.0}).value() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(FiberLink({0.2, -1.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS(FiberLink({0.0, 1.0, 0.0}).validate(), Error);
}

TEST_CASE("transmissivity strictly decreases with length and extra loss") {
  double prev = 2.0;
  for (double L = 0.0; L <= 400.0; L += 5.0) {
    const double t = transmissivity({0.2, L, 0.0}).value();
    CHECK(t < prev);
    CHECK(t > 0.0);
    prev = t;
  }
  prev = 2.0;
  for (double x = 0.0; x <= 30.0; x += 0.5) {
    const double t = transmissivity({0.2, 10.0, x}).value();
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("p_signal") {
  CHECK(p_signal(0.0, 0.1, 0.2).value() == 0.0);
  CHECK(p_signal(0.5, 0.1, 0.2).value() == doctest::Approx(0.00995016625).epsilon(1e-9));
  const double x = 1e-4 * 0.3 * 0.5;
  CHECK(std::abs(p_signal(1e-4, 0.3, 0.5).value() - x) / x < 0.01);
  double prev = -1.0;
  for (double mu = 0.0; mu < 2.0; mu += 0.1) {
    const double p = p_signal(mu, 0.4, 0.3).value();
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("qber model fixture") {
  // mpmath evaluation of the printed decomposition.
  const QberModel m = qber_model(fixture_link());
  CHECK(m.p_sig.value() == doctest::Approx(0.00995016625).epsilon(1e-9));
  CHECK(m.qber.value() == doctest::Approx(0.01549195966).epsilon(1e-9));
  CHECK(m.p_det.value() == doctest::Approx(0.00996016625).epsilon(1e-9));
}

TEST_CASE("qber model limits") {
  LinkModel link = fixture_link();
  link.detector.dark_count_prob = 0.0;
  link.optics.misalignment_qber = 0.0;
  CHECK(qber_model(link).qber.value() == doctest::Approx(0.01).epsilon(1e-12));

  LinkModel dark = fixture_link();
  dark.optics = {1.0, 0.0};
  dark.mean_photon_number = 1e-12;
  CHECK(qber_model(dark).qber.value() == doctest::Approx(0.5).epsilon(1e-5));

  LinkModel dead = fixture_link();
  dead.detector.dark_count_prob = 0.0;
  dead.mean_photon_number = 0.0;
  try {
    qber_model(dead);
    FAIL("expected dead link");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dead_link);
  }
}

TEST_CASE("qber model properties over random links") {
  Rng rng(2024);
  for (int i = 0; i < 2000; ++i) {
    LinkModel link;
    link.fiber = {0.15 + 0.2 * rng.uniform(), 300.0 * rng.uniform(), 5.0 * rng.uniform()};
    link.detector = {0.01 + 0.99 * rng.uniform(), 1e-3 * rng.uniform()};
    link.optics = {rng.uniform(), 0.2 * rng.uniform()};
    link.mean_photon_number = 2.0 * rng.uniform() + 1e-6;
    const QberModel m = qber_model(link);
    CHECK(m.qber.value() >= 0.0);
    CHECK(m.qber.value() <= 0.5);
    CHECK(m.p_det.value() >= m.p_sig.value());
    CHECK(m.p_det.value() >= link.detector.dark_count_prob.value() * (1.0 - m.p_sig.value()));
  }
}

TEST_CASE("qber approaches the optical error as background vanishes") {
  LinkModel link = fixture_link();
  link.detector.dark_count_prob = 1e-15;
  link.optics.misalignment_qber = 0.0;
  CHECK(std::abs(qber_model(link).qber.value() - link.optics.optical_qber()) < 1e-9);
}

TEST_CASE("photon yield and error model") {
  CHECK(photon_yield(0, 0.3, 1e-5) == doctest::Approx(1e-5));
  CHECK(photon_yield(1, 0.02, 1e-5) == doctest::Approx(0.0200098).epsilon(1e-12));
  CHECK(photon_yield(5, 1.0, 0.0) == 1.0);
  for (unsigned n = 0; n < 20; ++n) {
    const double eff = 0.037, y0 = 3e-4, e_opt = 0.021;
    CHECK(photon_yield(n, eff, y0) == doctest::Approx(static_cast<double>(oracle::yield(n, eff, y0))).epsilon(1e-13));
    const double en = photon_error(n, eff, y0, e_opt);
    const double yn = photon_yield(n, eff, y0);
    CHECK(en * yn == doctest::Approx(0.5 * y0 + e_opt * (yn - y0)).epsilon(1e-13));
  }
  CHECK(photon_error(0, 0.5, 0.0, 0.01) == 0.5);
}
