#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rbdo/problem.hpp"
#include "rbdo/rds.hpp"

namespace rbdo {

enum class Algorithm { DirectionalBat, StandardBat };

std::string_view to_string(Algorithm algorithm);
/// "dba" or "ba".
Algorithm parse_algorithm(std::string_view name);

/// Condition deciding whether a random peer pulls the moving bat.
enum class PeerRule {
  Epsilon,     // peer is epsilon-better in (f, nu)
  RawFitness,  // peer has lower f, violation ignored
};

/// Point the directional-bat random walk starts from.
enum class LocalSearchOrigin {
  Best,     // current global best
  Moved,    // the bat's position after the directional move
  Current,  // the bat's position before the move
};

std::string_view to_string(LocalSearchOrigin origin);
/// "best", "moved" or "current".
LocalSearchOrigin parse_local_search_origin(std::string_view name);

struct SwarmConfig {
  std::size_t population = 50;
  std::size_t max_iterations = 1000;
  double r0 = 0.1;
  double r_inf = 0.7;
  double loudness0 = 0.9;
  double loudness_inf = 0.6;
  double phi_min = 0.0;
  double phi_max = 2.0;
  double cp = 5.0;
  double tc_fraction = 0.95;
  double theta_fraction = 0.2;
  double violation_power = 2.0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::DirectionalBat;
  PeerRule peer_rule = PeerRule::Epsilon;
  LocalSearchOrigin local_search_origin = LocalSearchOrigin::Best;
  // standard bat algorithm only
  double alpha = 0.9;
  double gamma = 0.9;

  void validate() const;
};

struct BatState {
  EvaluatedSolution solution;
  double pulse_rate = 0.0;
  double loudness = 0.0;
  std::vector<double> width;
  std::vector<double> velocity;  // standard bat algorithm only
};

struct TraceEntry {
  std::size_t iteration = 0;
  double best_f = 0.0;
  double best_nu = 0.0;
  double epsilon = 0.0;
};

struct TrialResult {
  EvaluatedSolution best;
  std::vector<TraceEntry> trace;
  std::size_t evaluations = 0;
  std::size_t local_searches = 0;
  std::uint64_t seed = 0;
};

/// Directional echolocation move:
///   y + (best - y) phi1 + (peer - y) phi2   when the peer is better,
///   y + (best - y) phi1                     otherwise,
/// clamped to the box.
std::vector<double> dba_move(std::span<const double> y, std::span<const double> best,
                             std::span<const double> peer, bool peer_better,
                             std::span<const double> phi1, std::span<const double> phi2, const Box& box);

/// Random walk y + <A> eta w with eta in [-1, 1] per component, clamped.
std::vector<double> local_search(std::span<const double> y, double mean_loudness,
                                 std::span<const double> width, std::span<const double> eta, const Box& box);

/// Linear schedule through (1, initial) and (t_max, final). t_max = 1 returns final.
double linear_schedule(double t, double t_max, double initial, double final_value) noexcept;
inline double schedule_r(double t, double t_max, double r0, double r_inf) noexcept {
  return linear_schedule(t, t_max, r0, r_inf);
}
inline double schedule_A(double t, double t_max, double a0, double a_inf) noexcept {
  return linear_schedule(t, t_max, a0, a_inf);
}
inline double schedule_w(double t, double t_max, double w0, double w_inf) noexcept {
  return linear_schedule(t, t_max, w0, w_inf);
}
/// Local-search width endpoints: a quarter of the range, and 1% of that.
inline double initial_width(double lower, double upper) noexcept { return (upper - lower) / 4.0; }
inline double final_width(double w0) noexcept { return w0 / 100.0; }

/// Standard BA loudness decay A <- alpha A.
inline double ba_loudness(double loudness, double alpha) noexcept { return alpha * loudness; }
/// Standard BA pulse-rate growth r0 (1 - exp(-gamma t)).
double ba_pulse_rate(double r0, double gamma, double t) noexcept;

/// Replaces each component that has a value set by its nearest member;
/// exact midpoints go to the lower member.
void snap_discrete(std::span<double> y, const std::vector<std::vector<double>>& value_sets);

/// Directional bat algorithm with epsilon-level comparisons on the
/// reliable-design-space problem.
TrialResult run(const ProblemDefinition& problem, const SwarmConfig& config);

/// Standard bat algorithm under the same constraint handling. A move is
/// accepted only when it is epsilon-better than the global best.
TrialResult run_standard_ba(const ProblemDefinition& problem, const SwarmConfig& config);

/// Dispatches on config.algorithm.
TrialResult run_trial(const ProblemDefinition& problem, const SwarmConfig& config);

} // namespace rbdo
