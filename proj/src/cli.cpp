#include "qkd/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>

#include "qkd/format.hpp"
#include "qkd/report.hpp"

namespace qkd {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string format;
  std::string out_path = "-";
  int precision = 9;
  std::optional<std::uint64_t> seed;
  bool ephemeral_seed = false;
  bool timing = false;
};

void add_common(CLI::App& cmd, Common& c, const char* default_format) {
  c.format = default_format;
  cmd.add_option("--config", c.config_path, "JSON configuration file")->required();
  cmd.add_option("overrides", c.overrides, "field overrides, e.g. fiber.length_km=75");
  cmd.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  cmd.add_option("--out", c.out_path, "output path, '-' for standard output");
  cmd.add_option("--precision", c.precision, "significant digits in numeric output")->check(CLI::Range(1, 17));
  cmd.add_option("--seed", c.seed, "seed overriding the configuration");
  cmd.add_flag("--ephemeral-seed", c.ephemeral_seed, "draw a fresh seed and print it to standard error");
  cmd.add_flag("--timing", c.timing, "include elapsed time in JSON reports");
}

RunConfig prepare(const Common& c, std::ostream& err) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) fail(Errc::invalid_config, "override '" + o + "' is not key=value");
    pairs.emplace_back(o.substr(0, eq), o.substr(eq + 1));
  }
  RunConfig config = apply_overrides(load_config_file(c.config_path), pairs);
  if (c.seed) {
    config = with_value(config, "seed", *c.seed);
  } else if (c.ephemeral_seed) {
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "ephemeral seed: " << s << "\n";
    config = with_value(config, "seed", s);
  }
  if (!config.seed) {
    fail(Errc::invalid_config, "no seed given: set 'seed' in the config, pass --seed, or use --ephemeral-seed");
  }
  return config;
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary | std::ios::trunc);
  if (!file) fail(Errc::invalid_config, "cannot open output file '" + c.out_path + "'");
  file << text;
  if (!file) fail(Errc::invalid_config, "failed writing output file '" + c.out_path + "'");
}

}  // namespace

std::vector<double> parse_range(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) fail(Errc::invalid_config, "range must be start:stop:steps");
  const double start = parse_number(parts[0]);
  const double stop = parse_number(parts[1]);
  const double steps = parse_number(parts[2]);
  if (steps < 1 || steps != std::floor(steps) || steps > 1e7) {
    fail(Errc::invalid_config, "range steps must be a positive whole number");
  }
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? start
             : i + 1 == n ? stop
                          : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> parse_values(std::string_view spec) {
  std::vector<double> out;
  if (spec.empty()) return out;
  for (auto part : split(spec, ',')) out.push_back(parse_number(part));
  return out;
}

OptimizeBounds parse_bounds(std::string_view spec, const IntensitySet& current) {
  OptimizeBounds b{{current.signal_mu, current.signal_mu}, {current.decoy_nu, current.decoy_nu}};
  if (spec.empty()) fail(Errc::invalid_config, "bounds must look like mu=a:b,nu=c:d");
  bool seen_mu = false, seen_nu = false;
  for (auto item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) fail(Errc::invalid_config, "bounds must look like mu=a:b,nu=c:d");
    const auto name = item.substr(0, eq);
    const auto range = split(item.substr(eq + 1), ':');
    if (range.size() != 2) fail(Errc::invalid_config, "bounds must look like mu=a:b,nu=c:d");
    const Interval iv{parse_number(range[0]), parse_number(range[1])};
    if (!(iv.lo <= iv.hi)) fail(Errc::invalid_config, "bounds need lo <= hi");
    if (name == "mu" && !seen_mu) {
      b.mu = iv;
      seen_mu = true;
    } else if (name == "nu" && !seen_nu) {
      b.nu = iv;
      seen_nu = true;
    } else {
      fail(Errc::invalid_config, "bounds accept mu and nu once each");
    }
  }
  return b;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum key distribution simulator", "qkdsim"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, opt_opts;
  CLI::App* run = app.add_subcommand("run", "run one pipeline and write its report");
  add_common(*run, run_opts, "json");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run the pipeline over a range of one field");
  add_common(*sweep_cmd, sweep_opts, "csv");
  std::string var, values, range;
  sweep_cmd->add_option("--var", var, "dotted field path to vary")->required();
  auto* values_opt = sweep_cmd->add_option("--values", values, "comma-separated values");
  auto* range_opt = sweep_cmd->add_option("--range", range, "start:stop:steps, inclusive");
  values_opt->excludes(range_opt);

  CLI::App* optimize = app.add_subcommand("optimize", "optimize decoy intensities");
  add_common(*optimize, opt_opts, "json");
  std::string bounds;
  optimize->add_option("--bounds", bounds, "mu=a:b,nu=c:d")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << app.help();
    return kExitUsage;
  }

  try {
    if (run->parsed()) {
      const RunConfig config = prepare(run_opts, err);
      const Report report = run_pipeline(config);
      std::string text;
      if (run_opts.format == "json") {
        text = dump_json(report_to_json(report, {run_opts.precision, run_opts.timing}));
      } else {
        text = csv_header(config.protocol) +
               csv_row({std::numeric_limits<double>::quiet_NaN(), report}, run_opts.precision);
      }
      emit(run_opts, text, out);
      if (report.aborted) {
        err << "aborted: " << report.abort_reason << "\n";
        return kExitAbort;
      }
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      if (values_opt->count() == 0 && range_opt->count() == 0) {
        fail(Errc::invalid_config, "sweep needs --values or --range");
      }
      const RunConfig config = prepare(sweep_opts, err);
      const std::vector<double> points = range_opt->count() ? parse_range(range) : parse_values(values);
      const auto curve = qkd::sweep(config, var, points);
      const std::string text = sweep_opts.format == "csv"
                                   ? sweep_to_csv(curve, config.protocol, sweep_opts.precision)
                                   : dump_json(sweep_to_json(curve, var, {sweep_opts.precision, sweep_opts.timing}));
      emit(sweep_opts, text, out);
      return kExitOk;
    }

    const RunConfig config = prepare(opt_opts, err);
    if (opt_opts.format != "json") fail(Errc::invalid_config, "optimize writes JSON only");
    if (!config.intensities) fail(Errc::invalid_config, "optimize needs a bb84-decoy configuration");
    const OptimizeResult result = optimize_intensities(config, parse_bounds(bounds, *config.intensities));
    emit(opt_opts, dump_json(optimize_to_json(result, config, {opt_opts.precision, false})), out);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qkd
