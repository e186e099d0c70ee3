#pragma once

// Batch experiment runner: JSON config in, report.json and CSV files out.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efgp/lattice.hpp"
#include "efgp/report.hpp"

namespace efgp {

inline constexpr const char* kToolkitName = "efgp-toolkit";
inline constexpr const char* kToolkitVersion = "0.1.0";

enum class Command { Spectrum, Prufer, BoundCheck, LemmaSums, Construct };

std::string_view to_string(Command c) noexcept;

enum class GammaRule { Zero, Log };

struct OscillatoryConfig {
  double alpha = 1.0;
  GammaRule rule = GammaRule::Zero;
  double coef = 0.0;  // gamma_n = coef * ln n for GammaRule::Log
  std::int64_t N_max = 1000;
};

struct Tolerances {
  double eigen_tol = 1e-13;
  double distinct_tol = 1e-8;
  double stabilization = 0.05;
};

struct ExperimentConfig {
  Command command = Command::Spectrum;
  Potential potential = Potential::zero();
  double phi = std::numbers::pi / 2;
  std::int64_t N = 1000;
  double window_lo = -2.0;
  double window_hi = 2.0;
  std::vector<double> x_values;
  std::vector<std::int64_t> checkpoints;  // empty: default_checkpoints(N)
  std::string output_dir = "out";
  std::optional<double> construct_x;
  std::optional<double> construct_c;
  std::string candidates = "x_values";  // bound-check: "x_values" or "truncation"
  bool certified_only = true;
  std::optional<double> C;              // bound-check override of the envelope constant
  bool classify = true;                 // spectrum: attach decay certificates
  std::int64_t csv_stride = 1;
  std::vector<OscillatoryConfig> oscillatory;
  Tolerances tolerance;

  Json echo;                 // the parsed document, minus output_dir
  std::string config_hash;   // fingerprint of echo

  std::vector<std::int64_t> effective_checkpoints() const;
};

/// Strict parse: unknown fields and out-of-range values raise
/// ValidationError naming the field. Relative table paths resolve against
/// base_dir.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");

struct RunOptions {
  std::optional<std::string> output_dir;
  unsigned threads = 1;
  bool quiet = true;
};

struct RunReport {
  Json report;
  int exit_status = 0;  // 0 ok, 2 bound violated
};

/// Executes the configured pipeline and writes report.json plus the
/// per-command files. Errors propagate as Error with the stage name prefixed.
RunReport run(const ExperimentConfig& config, const RunOptions& options = {});

// Full CLI entry point; returns the process exit status (0, 1 or 2).
int cli_main(int argc, char** argv);

}  // namespace efgp
