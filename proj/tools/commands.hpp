#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/coin.hpp"

namespace qwalk::cli {

enum class Command { Simulate, Dispersion, Velocity, Sweep, Localize };
enum class Format { Csv, Json };

Command command_from_string(std::string_view name);
Format format_from_string(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr long kMaxSteps = 100000;

struct RunConfig {
  Command command = Command::Simulate;
  // "grover" | "c1:<phi>" | "c2:<rho>" | "pi" | "matrix:<path>"; sweep takes "c1" or "c2".
  std::string coin_spec = "grover";
  // (re, im) of the L, S and R amplitudes.
  std::vector<double> state;
  std::optional<long> steps;
  int grid = 4096;
  std::string output_path;
  std::optional<Format> format;
  unsigned threads = 0;
  int points = 0;
  std::optional<double> range_min;
  std::optional<double> range_max;
  bool analytic = false;
};

Coin parse_coin_spec(std::string_view spec);

// Normalizes the state, warning on `warnings` when the norm is off by more than 1e-9.
CoinState parse_initial_state(std::span<const double> values, std::ostream& warnings);

// QWALK_THREADS when set, otherwise the hardware concurrency.
unsigned default_thread_count();

struct SweepRow {
  double parameter = 0.0;
  double v_analytic = 0.0;
  double v_numeric = 0.0;
  double deviation_from_linear = 0.0;
};

// Grid points run concurrently; rows come back in parameter order.
std::vector<SweepRow> run_sweep(CoinFamily family, std::span<const double> parameters, int grid, unsigned threads);

// Each command writes its artifact to config.output_path, or to `out` when no
// path is given. Errors propagate as exceptions.
void cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_dispersion(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_velocity(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& log);
void cmd_localize(const RunConfig& config, std::ostream& out, std::ostream& log);

// Dispatches and maps failures onto exit codes: 0 success, 2 configuration,
// 3 numeric or invariant failure, 4 I/O. Failures print a JSON error object on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qwalk::cli
