#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "qwalk/errors.hpp"
#include "qwalk/io.hpp"
#include "qwalk/localization.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::cli {

using nlohmann::json;
using std::numbers::pi;

namespace {

double parse_number(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(value)) {
    throw ConfigError("cannot parse " + std::string(what) + " '" + s + "'");
  }
  return value;
}

Coin read_coin_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coin file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("coin file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("family")) j["family"] = "custom";
  try {
    return coin_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("coin file '" + path + "' is malformed: " + e.what());
  }
}

Format resolve_format(const RunConfig& config, Format fallback) { return config.format.value_or(fallback); }

long resolve_steps(const RunConfig& config, long fallback) {
  const long steps = config.steps.value_or(fallback);
  if (steps < 0) throw ConfigError("--steps must be non-negative");
  if (steps > kMaxSteps) throw ConfigError("--steps exceeds the cap of " + std::to_string(kMaxSteps));
  return steps;
}

int resolve_grid(const RunConfig& config) {
  if (config.grid < 16) throw ConfigError("--grid must be at least 16");
  return config.grid;
}

CoinState resolve_state(const RunConfig& config, std::ostream& log) {
  if (config.state.empty()) {
    const double a = 1.0 / std::sqrt(3.0);
    return CoinState(a, -a, a);
  }
  return parse_initial_state(config.state, log);
}

// Writes `content` to the configured path, or to `out` without one.
void emit(const RunConfig& config, const std::string& content, std::ostream& out) {
  if (config.output_path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + config.output_path + "' for writing");
  file << content;
  file.flush();
  if (!file) throw IoError("failed writing '" + config.output_path + "'");
}

// Summary lines go to stdout when the artifact goes to a file, else to the log.
std::ostream& summary_stream(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return config.output_path.empty() ? log : out;
}

}  // namespace

Command command_from_string(std::string_view name) {
  if (name == "simulate") return Command::Simulate;
  if (name == "dispersion") return Command::Dispersion;
  if (name == "velocity") return Command::Velocity;
  if (name == "sweep") return Command::Sweep;
  if (name == "localize") return Command::Localize;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

Format format_from_string(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("unknown format '" + std::string(name) + "'");
}

Coin parse_coin_spec(std::string_view spec) {
  try {
    if (spec == "grover") return grover_coin();
    if (spec == "pi") return permutation_coin();
    if (spec.starts_with("c1:")) return coin_c1(parse_number(spec.substr(3), "c1 parameter"));
    if (spec.starts_with("c2:")) return coin_c2(parse_number(spec.substr(3), "c2 parameter"));
    if (spec.starts_with("matrix:")) return read_coin_file(std::string(spec.substr(7)));
  } catch (const InvariantError& e) {
    throw ConfigError(std::string("coin violates an invariant: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid coin parameter: ") + e.what());
  }
  throw ConfigError("unrecognized coin spec '" + std::string(spec) +
                    "' (expected grover, pi, c1:<phi>, c2:<rho> or matrix:<path>)");
}

CoinState parse_initial_state(std::span<const double> values, std::ostream& warnings) {
  if (values.size() != 6) throw ConfigError("--state takes six numbers: re/im of the L, S and R amplitudes");
  const CoinState raw(Complex(values[0], values[1]), Complex(values[2], values[3]), Complex(values[4], values[5]));
  const double norm = raw.norm();
  if (!std::isfinite(norm) || norm == 0.0) throw ConfigError("initial state has zero or non-finite norm");
  if (std::abs(norm - 1.0) > 1e-9) {
    warnings << "warning: initial state norm " << format_double(norm) << " differs from 1; normalizing\n";
  }
  return raw.normalized();
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("QWALK_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(CoinFamily family, std::span<const double> parameters, int grid, unsigned threads) {
  if (family != CoinFamily::C1 && family != CoinFamily::C2) throw ConfigError("sweep supports the c1 and c2 families");
  std::vector<SweepRow> rows(parameters.size());
  std::vector<std::exception_ptr> errors(parameters.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < parameters.size(); i = next++) {
      try {
        const double p = parameters[i];
        SweepRow& row = rows[i];
        row.parameter = p;
        if (family == CoinFamily::C1) {
          row.v_analytic = peak_velocity_c1(p);
          row.v_numeric = peak_velocities_numeric(coin_c1(p), grid).v_right;
          row.deviation_from_linear = linear_approx_deviation(p);
        } else {
          row.v_analytic = peak_velocity_c2(p);
          row.v_numeric = peak_velocities_numeric(coin_c2(p), grid).v_right;
          row.deviation_from_linear = row.v_analytic - p;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(parameters.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const Coin coin = parse_coin_spec(config.coin_spec);
  const CoinState psi = resolve_state(config, log);
  const long steps = resolve_steps(config, 50);
  const int grid = resolve_grid(config);

  const WalkState final_state = evolve(initial_state(psi), coin, steps);
  const ProbabilityDistribution dist = probability_distribution(final_state);

  std::ostringstream body;
  if (resolve_format(config, Format::Csv) == Format::Csv) {
    write_distribution_csv(body, dist);
  } else {
    body << json(dist).dump() << '\n';
  }
  emit(config, body.str(), out);

  const PeakVelocityResult velocity = peak_velocities_numeric(coin, std::max(grid, 256));
  const SidePeaks peaks = side_peaks(dist);
  std::ostream& summary = summary_stream(config, out, log);
  summary << "side peaks: left " << peaks.left << ", right " << peaks.right << '\n';
  summary << "predicted t*v: left " << format_double(static_cast<double>(steps) * velocity.v_left) << ", right "
          << format_double(static_cast<double>(steps) * velocity.v_right) << '\n';
}

void cmd_dispersion(const RunConfig& config, std::ostream& out, std::ostream& /*log*/) {
  const Coin coin = parse_coin_spec(config.coin_spec);
  const DispersionTable table = dispersion_numeric(coin, resolve_grid(config));
  std::ostringstream body;
  if (resolve_format(config, Format::Csv) == Format::Csv) {
    write_dispersion_csv(body, table);
  } else {
    body << dispersion_to_json(table).dump() << '\n';
  }
  emit(config, body.str(), out);
}

void cmd_velocity(const RunConfig& config, std::ostream& out, std::ostream& /*log*/) {
  const Coin coin = parse_coin_spec(config.coin_spec);
  const int grid = resolve_grid(config);
  if (resolve_format(config, Format::Json) != Format::Json) throw ConfigError("velocity reports are JSON only");
  const PeakVelocityResult result = config.analytic ? peak_velocities_analytic(coin) : peak_velocities_numeric(coin, grid);
  emit(config, json(result).dump() + "\n", out);
}

void cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& /*log*/) {
  CoinFamily family;
  double lo = 0.0;
  double hi = 0.0;
  int points = config.points;
  if (config.coin_spec == "c1") {
    family = CoinFamily::C1;
    hi = pi / 2.0;
    if (points == 0) points = 50;
  } else if (config.coin_spec == "c2") {
    family = CoinFamily::C2;
    hi = 1.0;
    if (points == 0) points = 11;
  } else {
    throw ConfigError("sweep needs --coin c1 or --coin c2");
  }
  lo = config.range_min.value_or(lo);
  hi = config.range_max.value_or(hi);
  if (points < 1) throw ConfigError("--points must be positive");
  if (!(lo <= hi)) throw ConfigError("--min must not exceed --max");

  std::vector<double> parameters(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    parameters[static_cast<std::size_t>(i)] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  }
  if (points > 1) parameters.back() = hi;

  std::vector<SweepRow> rows;
  try {
    rows = run_sweep(family, parameters, resolve_grid(config), config.threads ? config.threads : default_thread_count());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sweep range outside the family domain: ") + e.what());
  }

  std::ostringstream body;
  if (resolve_format(config, Format::Csv) == Format::Csv) {
    body << "parameter,v_analytic,v_numeric,deviation_from_linear\n";
    for (const auto& r : rows) {
      body << format_double(r.parameter) << ',' << format_double(r.v_analytic) << ','
           << format_double(r.v_numeric) << ',' << format_double(r.deviation_from_linear) << '\n';
    }
  } else {
    json table = json::array();
    for (const auto& r : rows) {
      table.push_back({{"parameter", r.parameter},
                       {"v_analytic", r.v_analytic},
                       {"v_numeric", r.v_numeric},
                       {"deviation_from_linear", r.deviation_from_linear}});
    }
    body << json{{"family", to_string(family)}, {"rows", table}}.dump() << '\n';
  }
  emit(config, body.str(), out);
}

void cmd_localize(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const Coin coin = parse_coin_spec(config.coin_spec);
  const CoinState psi = resolve_state(config, log);
  const long steps = resolve_steps(config, 1000);
  if (steps < 199) throw ConfigError("localize needs --steps >= 199 (at least 200 samples of p(0,t))");
  const int grid = resolve_grid(config);
  if (grid < 256) throw ConfigError("localize needs --grid >= 256");

  const LocalizationReport report = analyze_localization(coin, psi, steps, grid);
  std::ostringstream body;
  if (resolve_format(config, Format::Json) == Format::Json) {
    body << json(report).dump() << '\n';
  } else {
    write_origin_series_csv(body, report.series);
  }
  emit(config, body.str(), out);
  if (report.trapping_absent_despite_flat_band) {
    log << "note: flat band present but this initial state shows no trapping at the origin\n";
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto fail = [&err](int code, std::string_view kind, const std::string& message) {
    err << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
    return code;
  };
  try {
    switch (config.command) {
      case Command::Simulate: cmd_simulate(config, out, err); break;
      case Command::Dispersion: cmd_dispersion(config, out, err); break;
      case Command::Velocity: cmd_velocity(config, out, err); break;
      case Command::Sweep: cmd_sweep(config, out, err); break;
      case Command::Localize: cmd_localize(config, out, err); break;
    }
    return 0;
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const DomainError& e) {
    return fail(2, "config", e.what());
  } catch (const UnsupportedFamilyError& e) {
    return fail(2, "config", e.what());
  } catch (const IoError& e) {
    return fail(4, "io", e.what());
  } catch (const BranchTrackingError& e) {
    return fail(3, "numeric", e.what());
  } catch (const InvariantError& e) {
    return fail(3, "invariant", e.what());
  } catch (const std::exception& e) {
    return fail(3, "numeric", e.what());
  }
}

}  // namespace qwalk::cli
