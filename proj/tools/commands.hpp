#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "depletion/depletion.hpp"

namespace depletion::cli {

/// Everything a subcommand needs; filled from the command line.
struct ExperimentConfig {
  std::string instance_path;
  std::string app;
  std::string params_path;
  std::optional<double> epsilon;
  std::vector<std::string> policies;
  std::vector<std::string> properties;
  std::string policy = "myopic";
  std::uint64_t seed = 0;
  std::uint64_t seed_begin = 0;
  std::uint64_t seed_end = 0;
  std::size_t reps = 1000;
  Limits limits;
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
  std::string dump_table;
  bool strict = false;
  unsigned threads = 1;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitCapExceeded = 3;

/// Builds an instance for a named application from a parameter file.
Instance generate_instance(const std::string& app, const std::string& params_text, std::uint64_t seed,
                           const Limits& limits, std::optional<double> epsilon = std::nullopt);

int run_generate(const ExperimentConfig& config, std::ostream& out);
int run_solve(const ExperimentConfig& config, std::ostream& out);
int run_simulate(const ExperimentConfig& config, std::ostream& out);
int run_check(const ExperimentConfig& config, std::ostream& out);

struct PolicyColumn {
  std::string policy;
  double j_policy = 0.0;
  double ratio = 0.0;
  double max_ratio = 0.0;
};

struct BatchRow {
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::string family;
  double j_star = 0.0;
  std::vector<PolicyColumn> policies;
  bool vfm = false;
  bool ir = false;
  double seconds = 0.0;
  std::string error;
};

struct BatchReport {
  std::vector<std::string> policies;
  std::vector<BatchRow> rows;

  /// Columns: seed, fingerprint, family, j_star, then j_<p>, ratio_<p>,
  /// max_ratio_<p> per policy, then vfm, ir, error. Timing is JSON-only so the
  /// CSV is byte-identical across runs.
  std::string to_csv() const;
  std::string to_json() const;
};

BatchReport run_batch_report(const ExperimentConfig& config);
int run_batch(const ExperimentConfig& config, std::ostream& out);

/// Maps a library exception to an exit code and writes {"error", "message"} to `err`.
int report_error(const std::exception& e, std::ostream& err);

}  // namespace depletion::cli
