#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbdo/problems.hpp"
#include "rbdo/swarm.hpp"
#include "rbdo/verify.hpp"

namespace rbdo {

struct VerificationOptions {
  bool form = true;
  bool sorm = true;
  bool mcs = true;
  std::size_t mcs_samples = 100000;
};

/// One experiment: a benchmark, a swarm configuration and a trial count.
/// Trial k runs with seed base_seed + k.
struct RunConfig {
  std::string benchmark;
  problems::BenchmarkOptions options;
  SwarmConfig swarm;
  std::size_t trials = 25;
  std::uint64_t base_seed = 1;
  std::string output_dir;  // empty: caller decides
  VerificationOptions verification;

  /// Throws ConfigError on any invariant violation, including an unknown
  /// benchmark id.
  void validate() const;
  ProblemDefinition make_problem() const;
};

/// Parses the JSON config format documented in README.md. Unknown keys are
/// rejected.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

struct StatsSummary {
  double best = 0.0;
  double median = 0.0;  // lower-middle order statistic for even counts
  double worst = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;  // n - 1 denominator; 0 for a single trial
  double mean_violation = 0.0;
  std::size_t best_trial = 0;
  std::vector<std::vector<double>> designs;
};

StatsSummary summarize(std::span<const TrialResult> trials);

struct ExperimentResult {
  RunConfig config;
  std::vector<std::string> variable_names;
  std::vector<TrialResult> trials;  // ordered by trial index
  StatsSummary summary;
};

/// Runs config.trials independent trials, at most `jobs` at a time. The
/// result does not depend on `jobs`.
ExperimentResult run_experiment(const RunConfig& config, std::size_t jobs = 1);

/// 7 significant digits; "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double value);

inline constexpr std::string_view kSummaryHeader =
    "benchmark,algorithm,trials,base_seed,best,median,worst,mean,sd,mean_nu";
inline constexpr std::string_view kTraceHeader = "iteration,best_f,best_nu,epsilon";
inline constexpr std::string_view kVerificationHeader = "constraint,method,constraint_value,beta,pf,mcs_stderr,note";

std::string summary_csv(const ExperimentResult& result);
std::string trials_csv(const ExperimentResult& result);
std::string trace_csv(const TrialResult& trial);

/// Writes summary.csv, trials.csv and trace_<k>.csv into `dir`.
void write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);

struct VerificationRow {
  std::string constraint;
  bool probabilistic = true;
  double value_at_mean = 0.0;
  std::optional<ReliabilityMethod> method;  // unset for deterministic constraints
  std::optional<ReliabilityReport> report;  // unset when the method failed
  std::string note;                         // failure message or flag
};

/// Raw constraint values at the mean point plus one reliability row per
/// probabilistic constraint and requested method. A failing method is
/// recorded in its row and does not stop the remaining rows.
std::vector<VerificationRow> verify_design(const ProblemDefinition& problem, std::span<const double> y,
                                           const VerificationOptions& options, std::uint64_t seed);

std::string verification_csv(std::span<const VerificationRow> rows);

/// Reads a design vector from a CSV file: the first row of numbers, one
/// value per column (a non-numeric header row is skipped).
std::vector<double> read_design_csv(const std::filesystem::path& path);

} // namespace rbdo
