// Acceptance gates. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "cv_oracle.hpp"
#include "qkd/advanced_rates.hpp"
#include "qkd/core_math.hpp"
#include "qkd/cv.hpp"
#include "qkd/decoy.hpp"
#include "qkd/dv_protocols.hpp"
#include "qkd/postprocessing.hpp"
#include "qkd/report.hpp"
#include "support.hpp"

using namespace qkd;

namespace {

struct Gate {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

LinkModel fixture_link() {
  LinkModel link;
  link.fiber = {0.2, 50.0, 0.0};
  link.detector = {0.2, 1e-5};
  link.optics = {0.98, 0.005};
  link.mean_photon_number = 0.5;
  return link;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::pair<int, std::string> run_tool(const std::string& args, const std::string& tag) {
  const std::string out = testutil::scratch("acceptance_" + tag);
  const std::string cmd = std::string("\"") + QKDSIM_PATH + "\" " + args + " >" + out + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out)};
}

void bb84_threshold(Gate& g) {
  double lo = 0.01, hi = 0.4;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - 2.0 * binary_entropy(mid) > 0.0 ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);
  g.detail << "Q* = " << q;
  g.expect(std::abs(q - 0.1100) <= 0.0005, "Q* within 0.1100 +- 0.0005");
}

void chsh_maximum(Gate& g) {
  const ChshAngles angles{0.0, 45.0, 22.5, 157.5};
  const double s = simulate_e91(angles, 1.0, 100000, 1, Mode::analytic).stats.S;
  const double mc = simulate_e91(angles, 1.0, 100000, 20240601, Mode::monte_carlo).stats.S;
  g.detail << "analytic S = " << s << ", Monte Carlo S = " << mc;
  g.expect(std::abs(s - 2.8284) <= 0.001, "analytic S within 2.8284 +- 0.001");
  g.expect(std::abs(mc - 2.828) <= 0.03, "Monte Carlo |S - 2.828| <= 0.03");

  double worst = 0.0;
  for (unsigned code = 0; code < 256; ++code) {
    auto out = [&](int party, int setting, int lambda) -> std::int8_t {
      return ((code >> (party * 4 + setting * 2 + lambda)) & 1u) ? 1 : -1;
    };
    ChshStats st;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const std::array<std::int8_t, 2> a{out(0, x, 0), out(0, x, 1)};
        const std::array<std::int8_t, 2> b{out(1, y, 0), out(1, y, 1)};
        st.set(x, y, correlation(a, b));
      }
    }
    worst = std::max(worst, std::abs(chsh_S(st)));
  }
  g.detail << ", max local |S| = " << worst;
  g.expect(worst <= 2.0, "local strategies |S| <= 2");
}

void decoy_soundness(Gate& g) {
  Rng rng(20240601);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const double eff = std::pow(10.0, -4.0 * rng.uniform());
    const double y0 = 1e-3 * rng.uniform();
    const double e_opt = 0.05 * rng.uniform();
    const double nu = 0.05 + 0.15 * rng.uniform();
    double mu = 0.3 + 0.4 * rng.uniform();
    if (mu <= nu) mu = nu + 0.1;
    GainTable t;
    for (double lambda : {mu, nu, 0.0}) {
      const auto gain = oracle::gain(lambda, eff, y0, e_opt);
      t.entries.push_back({lambda, static_cast<double>(gain.Q), static_cast<double>(gain.E), 0});
    }
    const long double y1 = oracle::yield(1, eff, y0);
    const double true_y1 = static_cast<double>(y1);
    const double true_e1 = static_cast<double>((0.5L * y0 + e_opt * (y1 - y0)) / y1);
    const Bound lo = estimate_y1_lmc(t.at(mu).gain, t.at(nu).gain, mu, nu, t.at(0.0).gain);
    if (lo.clamped > true_y1 + 1e-12) ++violations;
    if (lo.clamped > 0.0) {
      const Bound e1 = estimate_e1_lmc(t.at(nu).qber, t.at(nu).gain, nu, t.at(0.0).gain, lo.clamped);
      if (e1.clamped < true_e1 - 1e-12) ++violations;
    }
  }
  GainTable unit;
  unit.entries = {{0.5, 1.0, 0.0, 0}, {0.1, 1.0, 0.0, 0}, {0.0, 1.0, 0.0, 0}};
  const DecoyEstimate paper = estimate_decoy(unit, IntensitySet{}, EstimatorId::paper_two_decoy);
  g.detail << "violations over 200 links = " << violations << ", two-decoy raw Y1 on unit table = " << paper.Y1_raw
           << (paper.sound_flag ? " (sound)" : " (flagged unsound)");
  g.expect(violations == 0, "no soundness violations");
  g.expect(std::abs(paper.Y1_raw - 15.69) <= 0.01, "two-decoy raw Y1 within 15.69 +- 0.01");
  g.expect(!paper.sound_flag, "two-decoy estimate flagged unsound");
}

void monte_carlo_agreement(Gate& g) {
  const LinkModel link = fixture_link();
  const QberModel model = qber_model(link);
  const Bb84Options defaults;
  double worst_z = 0.0, worst_sift = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SessionResult r = run_bb84(link, 1000000, seed, Mode::monte_carlo);
    const double sample = std::ceil(defaults.sample_fraction.value() *
                                    (r.raw_key_bits / (1.0 - defaults.sample_fraction.value())));
    const double sd = std::sqrt(model.qber.value() * (1.0 - model.qber.value()) / sample);
    worst_z = std::max(worst_z, std::abs(r.qber_estimate.value() - model.qber.value()) / sd);
    worst_sift = std::max(worst_sift, std::abs(r.sift_fraction.value() - 0.5));
  }
  g.detail << "max |Q - Q_model| = " << worst_z << " sd, max |sift - 0.5| = " << worst_sift;
  g.expect(worst_z <= 4.0, "QBER within 4 sd for all seeds");
  g.expect(worst_sift <= 0.01, "sift fraction within 0.5 +- 0.01");
}

void finite_key(Gate& g) {
  const double d = finite_key_penalty(1e6, 1e-9);
  const double oracle = static_cast<double>(std::sqrt(std::log(2.0L / 1e-9L) / 1e6L));
  g.detail << "penalty = " << d;
  g.expect(std::abs(d - 4.628e-3) <= 1e-5, "penalty within 4.628e-3 +- 1e-5");
  g.expect(std::abs(d - oracle) <= 1e-15, "penalty equals direct evaluation");
}

void rrdps(Gate& g) {
  const RrdpsRate a = rrdps_rate(0.02, 0.2, 0.05, 1e-6, 128);
  const RrdpsRate b = rrdps_rate(0.02, 0.2, 0.08, 1e-6, 1024);
  const double bracket = b.signed_rate / b.p_click;
  g.detail << "adversary_info(128) = " << a.adversary_info << ", bracket(Q=0.08, L=1024) = " << bracket;
  g.expect(a.adversary_info == 1.0 / 127.0, "adversary_info = 1/127");
  g.expect(std::abs(bracket - 0.596) <= 0.01, "bracket within 0.596 +- 0.01");
  g.expect(b.signed_rate > 0.0, "rate positive");
}

void cv_sanity(Gate& g) {
  const CvRateReport ideal = cv_key_rate({4.0, 1.0, 0.0, 1.0});
  double worst = 0.0;
  bool monotone = true;
  for (double va : {0.5, 2.0, 4.0, 10.0, 30.0}) {
    for (double t : {0.02, 0.1, 0.35, 0.7, 1.0}) {
      double prev = INFINITY;
      for (double xi : {0.0, 0.01, 0.05, 0.1, 0.2}) {
        const CvParams p{va, t, xi, 0.95};
        worst = std::max(worst, std::abs(cv_holevo(p) - cv_oracle::holevo_oracle(p)));
        const double k = cv_key_rate(p).K;
        monotone = monotone && k <= prev;
        prev = k;
      }
    }
  }
  g.detail << "ideal chi = " << ideal.chi_BE << ", max |closed - oracle| on 125 points = " << worst;
  g.expect(std::abs(ideal.chi_BE) <= 1e-9, "ideal chi_BE = 0 within 1e-9");
  g.expect(std::abs(ideal.K - ideal.I_AB) <= 1e-9, "ideal K = I_AB");
  g.expect(worst <= 1e-9, "closed form matches oracle within 1e-9");
  g.expect(monotone, "K non-increasing in xi");
}

void universality(Gate& g) {
  const std::size_t n = 10, m = 5;
  Rng rng(13);
  std::uint64_t collisions = 0, pairs = 0;
  for (int t = 0; t < 100; ++t) {
    const ToeplitzSeed seed = ToeplitzSeed::random(n, m, rng);
    std::vector<std::uint64_t> bucket(1u << m, 0);
    for (unsigned v = 0; v < (1u << n); ++v) {
      Bits in(n);
      for (std::size_t i = 0; i < n; ++i) in[i] = (v >> i) & 1u;
      const Bits h = toeplitz_hash(in, seed);
      unsigned code = 0;
      for (std::size_t j = 0; j < m; ++j) code |= static_cast<unsigned>(h[j]) << j;
      ++bucket[code];
    }
    for (auto k : bucket) collisions += k * (k - 1) / 2;
    pairs += (1u << n) * ((1u << n) - 1) / 2;
  }
  const double p = std::ldexp(1.0, -static_cast<int>(m));
  const double rate = static_cast<double>(collisions) / static_cast<double>(pairs);
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(pairs));

  int broken = 0;
  for (int t = 0; t < 10000; ++t) {
    const ToeplitzSeed seed = ToeplitzSeed::random(64, 24, rng);
    Bits x(64), y(64), xy(64);
    for (std::size_t i = 0; i < 64; ++i) {
      x[i] = rng.bit();
      y[i] = rng.bit();
      xy[i] = x[i] ^ y[i];
    }
    const Bits hx = toeplitz_hash(x, seed), hy = toeplitz_hash(y, seed), hxy = toeplitz_hash(xy, seed);
    for (std::size_t j = 0; j < hx.size(); ++j) broken += hxy[j] != (hx[j] ^ hy[j]);
  }
  g.detail << "collision rate = " << rate << " (bound " << p + 3.0 * sigma << "), linearity failures = " << broken;
  g.expect(rate <= p + 3.0 * sigma, "collision probability <= 2^-5 + 3 sigma");
  g.expect(broken == 0, "linear on 10^4 triples");
}

void end_to_end(Gate& g) {
  const std::string decoy = std::string("--config ") + QKD_SOURCE_DIR + "/configs/decoy-default.json";
  const std::string bb84 = std::string("--config ") + QKD_SOURCE_DIR + "/configs/bb84.json";
  const auto run1 = run_tool("run " + bb84, "run1");
  const auto run2 = run_tool("run " + bb84, "run2");
  const std::string sweep_args = "sweep " + decoy + " --var fiber.length_km --range 10:200:20";
  const auto sweep1 = run_tool(sweep_args, "sweep1");
  const auto sweep2 = run_tool(sweep_args, "sweep2");
  g.expect(run1.first == 0 && sweep1.first == 0, "commands succeed");
  g.expect(run1.second == run2.second && !run1.second.empty(), "run output byte-identical");
  g.expect(sweep1.second == sweep2.second && !sweep1.second.empty(), "sweep output byte-identical");

  const auto far = run_tool("sweep " + decoy + " --var fiber.length_km --range 10:300:30 --format json", "far");
  bool monotone = true;
  double prev = INFINITY, abort_at = NAN;
  std::size_t points = 0;
  try {
    const Json doc = Json::parse(far.second);
    for (const Json& p : doc["points"]) {
      const Json& r = p["report"]["rate_per_pulse"];
      const double rate = r.is_null() ? 0.0 : r.get<double>();
      const double km = p["value"].get<double>();
      if (km <= 200.0) monotone = monotone && rate <= prev;
      if (std::isnan(abort_at) && p["report"]["aborted"].get<bool>()) abort_at = km;
      prev = rate;
      ++points;
    }
  } catch (const std::exception&) {
    points = 0;
  }
  g.detail << points << " sweep points, first abort at " << abort_at << " km";
  g.expect(points == 30, "sweep parsed");
  g.expect(monotone, "R(L) non-increasing over 10..200 km");
  g.expect(abort_at < 300.0, "abort before 300 km");
}

void ledger(Gate& g) {
  const std::uint64_t leak = reconciliation_leakage(100000, 0.03, ReconciliationModel{1.16});
  KeyAccounting acct;
  acct.sifted_len = 100000;
  acct.phase_error = 0.03;
  acct.leak_ec = leak;
  acct.leak_auth = 128;
  acct.budget = SecurityBudget(1e-9, 1e-10, 1e-10, 1e-10);
  const std::uint64_t len = final_key_length(acct);
  const long double h = oracle::h2(0.03L);
  const auto direct_leak = static_cast<std::uint64_t>(std::ceil(1.16L * 100000.0L * h));
  const auto direct_len = static_cast<std::uint64_t>(
      std::floor(100000.0L * (1.0L - h) - direct_leak - 128.0L - 2.0L * std::log2(1.0L / 1e-9L)));
  g.detail << "leak_EC = " << leak << ", final_len = " << len;
  g.expect(leak == 22550 && direct_leak == 22550, "leak_EC = 22550");
  g.expect(len == 57823 && direct_len == 57823, "final_len = 57823");
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 means no runtime gate
  std::function<void(Gate&)> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "BB84 threshold", 1.0, bb84_threshold},
      {2, "CHSH maximum", 5.0, chsh_maximum},
      {3, "Decoy soundness", 5.0, decoy_soundness},
      {4, "Monte Carlo vs analytic", 30.0, monte_carlo_agreement},
      {5, "Finite-key penalty", 0.0, finite_key},
      {6, "RRDPS", 0.0, rrdps},
      {7, "CV sanity", 5.0, cv_sanity},
      {8, "Privacy amplification", 10.0, universality},
      {9, "End-to-end determinism", 60.0, end_to_end},
      {10, "Post-processing ledger", 0.0, ledger},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Gate g;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.check(g);
    } catch (const std::exception& e) {
      g.ok = false;
      g.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && secs > c.limit_seconds) {
      g.ok = false;
      g.detail << " [runtime over " << c.limit_seconds << " s]";
    }
    failed += !g.ok;
    std::printf("%s %2d %-26s %s (%.3f s)\n", g.ok ? "PASS" : "FAIL", c.id, c.name, g.detail.str().c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
