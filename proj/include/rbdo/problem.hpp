#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbdo/stats.hpp"

namespace rbdo {

/// One joint realization of the problem quantities handed to a response
/// function: deterministic design values, random design values, parameters.
struct Realization {
  std::span<const double> d;
  std::span<const double> x;
  std::span<const double> p;
};

/// Limit state g: g > 0 safe, g < 0 failed.
using LimitState = std::function<double(const Realization&)>;
/// Deterministic constraint h: h <= 0 feasible. Evaluated at the means.
using DeterministicConstraintFn = std::function<double(const Realization&)>;
/// Objective f(d, mu_x); parameters are passed at their means.
using Objective = std::function<double(const Realization&)>;

struct DeterministicVariable {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> discrete_values;  // sorted; empty = continuous
};

/// Random design variable whose mean is the decision value.
struct RandomVariable {
  std::string name;
  Family family = Family::Normal;
  double lower = 0.0;
  double upper = 0.0;
  double std = 0.0;           // used when cov is unset
  std::optional<double> cov;  // std = cov * mean, recomputed per candidate
  std::vector<double> discrete_values;

  double std_at(double mean) const { return cov ? *cov * mean : std; }
  Distribution at(double mean) const { return {family, mean, std_at(mean)}; }
};

struct RandomParameter {
  std::string name;
  Distribution dist;
};

struct ProbabilisticConstraint {
  std::string name;
  LimitState g;
  double target_pf = 0.0;
};

struct DeterministicConstraint {
  std::string name;
  DeterministicConstraintFn h;
};

/// Design box as flat vectors over y = [d..., x...].
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const noexcept { return lower.size(); }
  void clamp(std::span<double> y) const;
};

struct ProblemDefinition {
  std::string name;
  Objective objective;
  std::vector<DeterministicVariable> deterministic_vars;
  std::vector<RandomVariable> random_vars;
  std::vector<RandomParameter> params;
  std::vector<ProbabilisticConstraint> probabilistic;
  std::vector<DeterministicConstraint> deterministic;

  std::size_t nd() const noexcept { return deterministic_vars.size(); }
  std::size_t nx() const noexcept { return random_vars.size(); }
  std::size_t np() const noexcept { return params.size(); }
  /// Length of the design vector y = [d..., mu_x...].
  std::size_t dimension() const noexcept { return nd() + nx(); }

  Box box() const;
  /// Discrete value set per component of y; empty entries are continuous.
  std::vector<std::vector<double>> discrete_sets() const;
  std::vector<double> param_means() const;
  /// Marginals of the random design variables at the candidate means.
  std::vector<Distribution> random_var_dists(std::span<const double> y) const;

  /// Objective at y with parameters at their means.
  double evaluate_objective(std::span<const double> y) const;

  /// Sets every probabilistic constraint's target to Phi(-beta).
  void set_target_beta(double beta);

  /// Throws ConfigError on inconsistent bounds, discrete sets, or targets.
  void validate() const;
};

} // namespace rbdo
