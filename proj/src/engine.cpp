#include "qkd/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace qkd {

namespace {

constexpr const char* kNoteLength =
    "final_len = floor(n(1 - h2(phase_error)) - leak_ec - leak_auth - 2 log2(1/eps_sec)), capped at the sifted length";
constexpr const char* kNoteFormulaLength =
    "final_len = floor(N rate - leak_auth - 2 log2(1/eps_sec)); leak_ec is the error-correction term already inside "
    "the rate";

void abort_with(Report& r, std::string_view reason) {
  r.aborted = true;
  r.abort_reason = std::string(reason);
}

bool abortable(Errc code) {
  return code == Errc::dead_link || code == Errc::insufficient_single_photon_yield || code == Errc::no_pair_yield ||
         code == Errc::too_few_samples;
}

std::uint64_t ceil_bits(double x) {
  if (!(x > 0.0)) return 0;
  return static_cast<std::uint64_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

std::uint64_t round_count(double x) { return x > 0.0 ? static_cast<std::uint64_t>(std::llround(x)) : 0; }

std::uint64_t formula_final_len(double blocks, double rate, std::uint64_t leak_auth, double eps_sec,
                                std::uint64_t cap) {
  const double raw = std::floor(blocks * rate - static_cast<double>(leak_auth) - 2.0 * std::log2(1.0 / eps_sec));
  if (!(raw > 0.0)) return 0;
  return std::min(cap, static_cast<std::uint64_t>(raw));
}

void set_rate(Report& r, const RunConfig& c, double signed_rate, std::string_view reason_if_nonpositive) {
  r.signed_rate = signed_rate;
  if (r.aborted) return;
  if (!(signed_rate > 0.0)) {
    abort_with(r, reason_if_nonpositive);
    return;
  }
  r.rate_per_pulse = signed_rate;
  r.rate_bps = signed_rate * c.repetition_rate_hz;
}

// --- protocol branches ---------------------------------------------------------

void run_bb84_branch(const RunConfig& c, Report& r) {
  const SessionResult s = run_bb84(c.link, c.pulses, c.seed.value_or(0), c.mode, {c.sample_fraction, c.confidence});
  r.qber = s.qber_estimate.value();
  r.qber_interval = s.qber_interval;
  r.sift_fraction = s.sift_fraction.value();
  r.detection_probability = s.detection_probability.value();
  if (s.aborted) abort_with(r, s.abort_reason);
  set_rate(r, c, s.detection_probability.value() * s.signed_rate, kAbortInsecureChannel);

  KeyAccounting acct;
  acct.sifted_len = s.raw_key_bits;
  acct.leak_ec = reconciliation_leakage(acct.sifted_len, s.qber_estimate, c.reconciliation);
  acct.leak_auth = c.leak_auth_bits;
  acct.phase_error = std::min(0.5, s.qber_interval.upper);
  acct.budget = c.budget;
  r.sifted_len = acct.sifted_len;
  r.leak_ec = acct.leak_ec;
  r.leak_auth = acct.leak_auth;
  r.phase_error = acct.phase_error.value();
  r.final_len = r.aborted ? 0 : final_key_length(acct);

  r.details["detected"] = s.detected;
  r.details["asymptotic_rate_per_sifted_slot"] = s.signed_rate;
  r.notes.emplace_back("phase_error is the upper confidence bound of the sampled QBER");
  r.notes.emplace_back(kNoteLength);
}

Json estimate_json(const DecoyEstimate& e) {
  return {{"Y0", e.Y0.value()}, {"Y1_raw", e.Y1_raw}, {"Y1", e.Y1.value()}, {"Q1", e.Q1.value()},
          {"e1_raw", e.e1_raw}, {"e1", e.e1.value()}, {"sound_flag", e.sound_flag}};
}

void run_decoy_branch(const RunConfig& c, Report& r) {
  const IntensitySet& ints = *c.intensities;
  const GainTable table =
      c.mode == Mode::analytic ? gains_from_model(c.link, ints) : sample_gains(c.link, ints, c.pulses, *c.seed);

  Json gains = Json::array();
  for (const auto& g : table.entries) {
    gains.push_back({{"intensity", g.intensity}, {"gain", g.gain.value()}, {"qber", g.qber.value()},
                     {"trials", g.trials}});
  }
  r.details["gains"] = gains;

  const GainEntry& sig = table.at(ints.signal_mu);
  r.qber = sig.qber.value();
  r.sift_fraction = 0.5;
  double p_click = 0.0;
  for (std::size_t k = 0; k < table.entries.size(); ++k) p_click += ints.usage_fractions[k] * table.entries[k].gain.value();
  r.detection_probability = p_click;
  if (c.mode == Mode::monte_carlo) {
    const std::uint64_t clicks = round_count(sig.gain.value() * static_cast<double>(sig.trials));
    if (clicks > 0) {
      const std::uint64_t errors = round_count(sig.qber.value() * static_cast<double>(clicks));
      r.qber_interval = hoeffding_interval(errors, clicks, c.confidence);
    }
  }

  Json estimates = Json::object();
  std::optional<DecoyEstimate> selected;
  std::optional<Error> selected_error;
  for (auto id : {EstimatorId::lmc_reference, EstimatorId::paper_two_decoy, EstimatorId::paper_alg3}) {
    try {
      const DecoyEstimate e = estimate_decoy(table, ints, id);
      estimates[std::string(to_string(id))] = estimate_json(e);
      if (id == c.estimator) selected = e;
    } catch (const Error& err) {
      if (!abortable(err.code())) throw;
      estimates[std::string(to_string(id))] = {{"error", std::string(to_string(err.code()))}};
      if (id == c.estimator) selected_error = err;
    }
  }
  r.details["estimator"] = std::string(to_string(c.estimator));
  r.details["estimates"] = estimates;
  r.notes.emplace_back("rate uses the selected estimator; the other variants are reported for comparison");
  r.notes.emplace_back("rate per pulse = signal fraction x q [-Q_mu f h2(E_mu) + Q1 (1 - h2(e1))], q = 1/2");
  r.notes.emplace_back(kNoteLength);

  if (!selected) {
    abort_with(r, to_string(selected_error->code()));
    r.signed_rate = -std::numeric_limits<double>::infinity();
    return;
  }
  r.details["Y0"] = selected->Y0.value();
  r.details["Y1"] = selected->Y1.value();
  r.details["e1"] = selected->e1.value();
  r.details["Q1"] = selected->Q1.value();

  const double rate = ints.usage_fractions[0] * decoy_key_rate(0.5, sig.gain, sig.qber, selected->Q1, selected->e1,
                                                               c.reconciliation.efficiency_f);
  set_rate(r, c, rate, kAbortInsufficientRate);

  KeyAccounting acct;
  const double sifted = static_cast<double>(c.pulses) * ints.usage_fractions[0] * sig.gain.value() * 0.5;
  acct.sifted_len = round_count(sifted);
  acct.single_photon_len = sig.gain.value() > 0.0 ? static_cast<double>(acct.sifted_len) * selected->Q1.value() / sig.gain.value() : 0.0;
  acct.leak_ec = reconciliation_leakage(acct.sifted_len, sig.qber, c.reconciliation);
  acct.leak_auth = c.leak_auth_bits;
  acct.phase_error = selected->e1;
  acct.budget = c.budget;
  r.sifted_len = acct.sifted_len;
  r.leak_ec = acct.leak_ec;
  r.leak_auth = acct.leak_auth;
  r.phase_error = selected->e1.value();
  r.final_len = r.aborted ? 0 : final_key_length(acct);
  r.details["single_photon_len"] = *acct.single_photon_len;
}

void run_e91_branch(const RunConfig& c, Report& r) {
  const E91Config& e = *c.e91;
  const std::uint64_t per_cell = c.pulses / 4;
  const E91Result res = simulate_e91(e.angles, c.link.optics.visibility, per_cell, c.seed.value_or(0), c.mode);
  const QberModel model = qber_model(c.link);

  Json cells = Json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) cells.push_back(res.stats.at(i, j)->value);
  r.details["S"] = res.stats.S;
  r.details["correlations"] = cells;
  r.details["pairs_per_cell"] = per_cell;
  r.details["key_fraction"] = e.key_fraction;
  r.qber = model.qber.value();
  r.detection_probability = model.p_det.value();
  r.sift_fraction = e.key_fraction;
  r.notes.emplace_back("rate per pair = p_det x key_fraction x (1 - 2 h2(Q)) with Q from the link model");
  r.notes.emplace_back(kNoteLength);

  if (res.aborted) abort_with(r, kAbortNoBellViolation);
  if (!r.aborted && model.qber.value() > kBb84QberThreshold) abort_with(r, kAbortInsecureChannel);
  const double signed_rate = model.p_det.value() * e.key_fraction * (1.0 - 2.0 * binary_entropy(model.qber));
  set_rate(r, c, signed_rate, kAbortInsecureChannel);

  KeyAccounting acct;
  acct.sifted_len = round_count(static_cast<double>(c.pulses) * model.p_det.value() * e.key_fraction);
  acct.leak_ec = reconciliation_leakage(acct.sifted_len, model.qber, c.reconciliation);
  acct.leak_auth = c.leak_auth_bits;
  acct.phase_error = model.qber;
  acct.budget = c.budget;
  r.sifted_len = acct.sifted_len;
  r.leak_ec = acct.leak_ec;
  r.leak_auth = acct.leak_auth;
  r.phase_error = model.qber.value();
  r.final_len = r.aborted ? 0 : final_key_length(acct);
}

void run_mdi_branch(const RunConfig& c, Report& r) {
  const MdiConfig& m = *c.mdi;
  const MdiEstimate est = mdi_bounds(m.gains, m.mu, m.nu, m.omega);
  const GainCell& mm = m.gains.at(m.mu, m.mu);
  r.details["S11_raw"] = est.S11_raw;
  r.details["S11"] = est.S11.value();
  r.details["e11_raw"] = est.e11_available ? Json(est.e11_raw) : Json(nullptr);
  r.details["e11"] = est.e11_available ? Json(est.e11.value()) : Json(nullptr);
  r.details["sound_flag"] = est.sound_flag;
  r.qber = mm.qber.value();
  r.detection_probability = mm.gain.value();
  r.notes.emplace_back("MDI bounds are used as printed, with clamping and sound_flag");
  r.notes.emplace_back(kNoteFormulaLength);

  const double N = static_cast<double>(c.pulses);
  r.sifted_len = round_count(N * mm.gain.value());
  r.leak_ec = ceil_bits(N * mm.gain.value() * c.reconciliation.efficiency_f * binary_entropy(mm.qber));
  r.leak_auth = c.leak_auth_bits;
  if (!est.e11_available) {
    abort_with(r, to_string(Errc::no_pair_yield));
    r.signed_rate = -std::numeric_limits<double>::infinity();
    return;
  }
  r.phase_error = est.e11.value();
  const double rate = mdi_rate(est, mm.gain, mm.qber, c.reconciliation.efficiency_f, N, c.budget.eps_sec());
  set_rate(r, c, rate, kAbortInsufficientRate);
  r.final_len = r.aborted ? 0 : formula_final_len(N, rate, r.leak_auth, c.budget.eps_sec(), r.sifted_len);
}

void run_tf_branch(const RunConfig& c, Report& r) {
  const TfSliceData& d = *c.tf;
  const double f = c.reconciliation.efficiency_f;
  const double rate = tf_rate(d, f, c.budget.eps_sec());

  double clicks = 0.0, errors = 0.0, leak = 0.0;
  for (const auto& s : d.slices) {
    clicks += s.N_k * s.Q_mumu.value();
    errors += s.N_k * s.Q_mumu.value() * s.E_mumu.value();
    leak += s.N_k * s.Q_mumu.value() * f * binary_entropy(s.E_mumu);
  }
  if (clicks > 0.0) r.qber = errors / clicks;
  r.details["slices"] = d.M();
  r.details["total_N"] = d.total_N;
  r.notes.emplace_back("per-slice Y11 and phase error are inputs, not estimated");
  r.notes.emplace_back(kNoteFormulaLength);

  r.sifted_len = round_count(clicks);
  r.leak_ec = ceil_bits(leak);
  r.leak_auth = c.leak_auth_bits;
  set_rate(r, c, rate, kAbortInsufficientRate);
  r.final_len = r.aborted ? 0 : formula_final_len(d.total_N, rate, r.leak_auth, c.budget.eps_sec(), r.sifted_len);
}

void finish_click_rate(const RunConfig& c, Report& r, const ClickRate& cr, double sifted_clicks,
                       std::string_view reason) {
  const double N = static_cast<double>(c.pulses);
  r.qber = cr.qber;
  r.detection_probability = cr.p_click;
  r.details["p_click"] = cr.p_click;
  r.notes.emplace_back(kNoteFormulaLength);
  r.sifted_len = round_count(N * sifted_clicks);
  r.leak_ec = ceil_bits(N * sifted_clicks * binary_entropy(cr.qber));
  r.leak_auth = c.leak_auth_bits;
  r.phase_error = cr.qber;
  set_rate(r, c, cr.signed_rate, reason);
  r.final_len = r.aborted ? 0 : formula_final_len(N, cr.signed_rate, r.leak_auth, c.budget.eps_sec(), r.sifted_len);
}

double link_eta(const RunConfig& c) {
  return transmissivity(c.link.fiber).value() * c.link.detector.efficiency.value();
}

void run_dps_branch(const RunConfig& c, Report& r) {
  const ClickRate cr =
      dps_rate(link_eta(c), c.link.mean_photon_number, c.link.optics.visibility, c.link.detector.dark_count_prob);
  if (cr.qber > kBb84QberThreshold) abort_with(r, kAbortInsecureChannel);
  finish_click_rate(c, r, cr, cr.p_click, kAbortInsecureChannel);
}

void run_cow_branch(const RunConfig& c, Report& r) {
  const ClickRate cr = cow_rate(link_eta(c), c.link.mean_photon_number, c.link.optics.visibility,
                                c.link.detector.dark_count_prob, c.cow->monitor_fraction);
  r.details["monitor_fraction"] = c.cow->monitor_fraction.value();
  finish_click_rate(c, r, cr, cr.p_click, kAbortInsufficientRate);
}

void run_rrdps_branch(const RunConfig& c, Report& r) {
  const QberModel model = qber_model(c.link);
  const RrdpsRate rr = rrdps_rate(link_eta(c), c.link.mean_photon_number, model.qber,
                                  c.link.detector.dark_count_prob, c.rrdps->block_length);
  r.details["block_length"] = c.rrdps->block_length;
  r.details["adversary_info"] = rr.adversary_info;
  r.details["p_click_per_block"] = rr.p_click;
  r.details["rate_per_block"] = rr.signed_rate;
  // The bound counts one round per block of L pulses.
  const double L = static_cast<double>(c.rrdps->block_length);
  ClickRate per_pulse = rr;
  per_pulse.p_click = rr.p_click / L;
  per_pulse.signed_rate = rr.signed_rate / L;
  per_pulse.rate = rr.rate / L;
  finish_click_rate(c, r, per_pulse, per_pulse.p_click, kAbortInsufficientRate);
}

void run_cv_branch(const RunConfig& c, Report& r) {
  const CvConfig& cv = *c.cv;
  CvParams params = cv.params;
  if (c.mode == Mode::monte_carlo) {
    const CvSimulation sim = simulate_cv_session(params, c.pulses, *c.seed);
    params.transmittance = std::clamp(sim.estimated_T, 1e-300, 1.0);
    params.excess_noise = std::max(0.0, sim.estimated_xi);
    r.details["raw_estimated_T"] = sim.estimated_T;
    r.details["raw_estimated_xi"] = sim.estimated_xi;
  }
  CvRateReport k = cv_key_rate(params, cv.convention);
  const SymplecticSpectrum spec = cv_symplectic_spectrum(params);
  r.details["I_AB"] = k.I_AB;
  r.details["chi_BE"] = k.chi_BE;
  r.details["K"] = k.K;
  r.details["estimated_T"] = k.estimated_T;
  r.details["estimated_xi"] = k.estimated_xi;
  r.details["symplectic_eigenvalues"] = {spec.lambda1, spec.lambda2, spec.lambda3};
  r.details["convention"] = cv.convention == CvConvention::paper ? "paper" : "consistent";
  r.details["transmittance_source"] = cv.transmittance_from_fiber ? "fiber" : "config";
  if (cv.convention == CvConvention::paper) {
    r.notes.emplace_back("I_AB normalizes by chi_tot = 1 + chi_line while chi_BE uses chi_line");
  }
  r.notes.emplace_back("leak_ec is folded into the reconciliation efficiency beta");
  r.notes.emplace_back(kNoteFormulaLength);

  const double N = static_cast<double>(c.pulses);
  r.sifted_len = c.pulses;
  r.leak_ec = 0;
  r.leak_auth = c.leak_auth_bits;
  set_rate(r, c, k.K, kAbortCvNoisy);
  r.final_len = r.aborted ? 0 : formula_final_len(N, k.K, r.leak_auth, c.budget.eps_sec(), r.sifted_len);
}

}  // namespace

Report run_pipeline(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.mode == Mode::monte_carlo && !config.seed) fail(Errc::invalid_config, "run_pipeline: a seed is required");

  Report r;
  r.config = config.doc;
  r.protocol = config.protocol;
  r.mode = config.mode;
  r.eps_tot = epsilon_total(config.budget);
  r.leak_auth = config.leak_auth_bits;

  try {
    switch (config.protocol) {
      case Protocol::bb84: run_bb84_branch(config, r); break;
      case Protocol::bb84_decoy: run_decoy_branch(config, r); break;
      case Protocol::e91: run_e91_branch(config, r); break;
      case Protocol::mdi: run_mdi_branch(config, r); break;
      case Protocol::tf: run_tf_branch(config, r); break;
      case Protocol::dps: run_dps_branch(config, r); break;
      case Protocol::cow: run_cow_branch(config, r); break;
      case Protocol::rrdps: run_rrdps_branch(config, r); break;
      case Protocol::cv: run_cv_branch(config, r); break;
    }
  } catch (const Error& e) {
    if (!abortable(e.code())) throw;
    abort_with(r, to_string(e.code()));
    r.rate_per_pulse.reset();
    r.rate_bps.reset();
    r.signed_rate = -std::numeric_limits<double>::infinity();
    r.final_len = 0;
  }
  if (r.aborted) {
    r.rate_per_pulse.reset();
    r.rate_bps.reset();
  }
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::uint64_t sweep_point_seed(std::uint64_t base, std::size_t index) {
  if (index == 0) return base;
  return splitmix64(base ^ (static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ull));
}

std::vector<SweepPoint> sweep(const RunConfig& config, std::string_view variable, const std::vector<double>& values) {
  const Json& target = get_path(config.doc, variable);
  if (!target.is_number() && !target.is_null()) {
    fail(Errc::unresolvable_path, "sweep variable '" + std::string(variable) + "' is not a numeric field");
  }
  if (values.empty()) return {};

  // Validate every point up front so config errors surface before any work.
  std::vector<RunConfig> points;
  points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    RunConfig point = with_value(config, variable, values[i]);
    if (config.seed) {
      point.seed = sweep_point_seed(*config.seed, i);
      point.doc["seed"] = *point.seed;
    }
    points.push_back(std::move(point));
  }
  std::vector<Report> reports = parallel_map(points, [](const RunConfig& c, std::size_t) { return run_pipeline(c); });

  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back({values[i], std::move(reports[i])});
  return out;
}

namespace {

struct Candidate {
  double mu = 0.0;
  double nu = 0.0;
  double rate = -std::numeric_limits<double>::infinity();
  bool valid = false;
};

bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.rate != b.rate) return a.rate > b.rate;
  if (a.mu != b.mu) return a.mu > b.mu;
  return a.nu > b.nu;
}

std::vector<double> axis(const Interval& iv, std::size_t n) {
  if (iv.lo == iv.hi || n <= 1) return {iv.lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = i + 1 == n ? iv.hi : iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace

OptimizeResult optimize_intensities(const RunConfig& config, const OptimizeBounds& bounds,
                                    const OptimizeOptions& options) {
  if (config.protocol != Protocol::bb84_decoy || !config.intensities) {
    fail(Errc::invalid_config, "optimize_intensities: protocol has no decoy intensities to optimize");
  }
  for (const Interval* iv : {&bounds.mu, &bounds.nu}) {
    if (!(iv->lo <= iv->hi) || !std::isfinite(iv->lo) || !std::isfinite(iv->hi) || iv->lo < 0.0) {
      fail(Errc::invalid_config, "optimize_intensities: bounds must be finite with lo <= hi");
    }
  }
  if (config.mode == Mode::monte_carlo &&
      (!options.allow_monte_carlo || config.pulses < options.min_monte_carlo_pulses)) {
    fail(Errc::invalid_config, "optimize_intensities: Monte Carlo optimization is unstable; use analytic mode");
  }
  if (options.grid_points == 0) fail(Errc::invalid_config, "optimize_intensities: grid needs at least one point");

  const double omega = config.intensities->vacuum_omega;
  auto feasible = [&](double mu, double nu) { return mu > nu && nu > omega; };
  if (!feasible(bounds.mu.hi, bounds.nu.lo)) {
    fail(Errc::infeasible_region, "optimize_intensities: no point in bounds satisfies mu > nu > omega");
  }

  std::size_t evaluations = 0;
  auto evaluate = [&config, &feasible](double mu, double nu) {
    Candidate cand{mu, nu};
    if (!feasible(mu, nu)) return cand;
    RunConfig c = config;
    c.intensities->signal_mu = mu;
    c.intensities->decoy_nu = nu;
    c.doc["intensities"]["mu"] = mu;
    c.doc["intensities"]["nu"] = nu;
    cand.rate = run_pipeline(c).signed_rate;
    cand.valid = true;
    return cand;
  };

  std::vector<std::pair<double, double>> grid;
  for (double mu : axis(bounds.mu, options.grid_points))
    for (double nu : axis(bounds.nu, options.grid_points))
      if (feasible(mu, nu)) grid.emplace_back(mu, nu);
  const double mu0 = config.intensities->signal_mu;
  const double nu0 = config.intensities->decoy_nu;
  if (mu0 >= bounds.mu.lo && mu0 <= bounds.mu.hi && nu0 >= bounds.nu.lo && nu0 <= bounds.nu.hi) {
    grid.emplace_back(mu0, nu0);
  }

  Candidate best;
  const auto scored =
      parallel_map(grid, [&](const std::pair<double, double>& p, std::size_t) { return evaluate(p.first, p.second); });
  for (const Candidate& cand : scored) {
    if (better(cand, best)) best = cand;
  }
  evaluations += grid.size();

  const auto steps = [&](const Interval& iv) {
    return options.grid_points > 1 ? (iv.hi - iv.lo) / static_cast<double>(options.grid_points - 1) : 0.0;
  };
  double step_mu = steps(bounds.mu);
  double step_nu = steps(bounds.nu);
  for (std::size_t round = 0; round < options.refinement_rounds; ++round) {
    step_mu *= options.shrink;
    step_nu *= options.shrink;
    for (int dim = 0; dim < 2; ++dim) {
      const double step = dim == 0 ? step_mu : step_nu;
      const Interval& iv = dim == 0 ? bounds.mu : bounds.nu;
      if (step <= 0.0) continue;
      for (double dir : {1.0, -1.0}) {
        const double base = dim == 0 ? best.mu : best.nu;
        const double x = std::clamp(base + dir * step, iv.lo, iv.hi);
        if (x == base) continue;
        const Candidate cand = dim == 0 ? evaluate(x, best.nu) : evaluate(best.mu, x);
        if (cand.valid) ++evaluations;
        if (better(cand, best)) best = cand;
      }
    }
  }

  OptimizeResult out;
  out.best = *config.intensities;
  out.best.signal_mu = best.mu;
  out.best.decoy_nu = best.nu;
  out.best_signed_rate = best.rate;
  out.best_rate = std::max(0.0, best.rate);
  out.evaluations = evaluations;
  return out;
}

}  // namespace qkd
