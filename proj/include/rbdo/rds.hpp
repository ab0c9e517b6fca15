#pragma once

#include <compare>
#include <span>
#include <vector>

#include "rbdo/problem.hpp"

namespace rbdo {

/// beta = -Phi^-1(pf). Requires 0 < pf < 0.5.
double target_beta(double pf);

struct DirectionalCosines {
  std::vector<double> x;
  std::vector<double> p;
  /// All sigma-scaled partials vanished; cosines are returned as zero.
  bool degenerate = false;
};

/// Unit vector of sigma-weighted partial derivatives of g at the mean point.
/// The sigmas are the (equivalent-normal) standard deviations; a zero sigma
/// removes that component. Partials use central differences with step
/// 1e-6 * max(1, |z|).
DirectionalCosines directional_cosines(const LimitState& g, std::span<const double> d,
                                       std::span<const double> x_means,
                                       std::span<const double> p_means,
                                       std::span<const double> x_sigmas,
                                       std::span<const double> p_sigmas);

/// Normal shift: mean - alpha * std * beta.
double normal_shift(double mean, double std, double alpha, double beta) noexcept;

/// Rosenblatt shift: F^-1(Phi(-beta * alpha)) with the probability clamped
/// into [1e-15, 1 - 1e-15]. `clamped` is set when the guard engaged.
double rosenblatt_shift(const Distribution& dist, double alpha, double beta, bool* clamped = nullptr);

struct ShiftedPoint {
  std::size_t constraint_index = 0;
  std::vector<double> x;  // shifted random design values
  std::vector<double> p;  // shifted parameter values
  DirectionalCosines alpha;
  bool clamped = false;
};

/// Point at which probabilistic constraint `i` is evaluated for the design
/// y = [d..., mu_x...]. Normal marginals use the closed-form normal shift,
/// others the Rosenblatt shift with cosines weighted by equivalent-normal
/// standard deviations taken at the means.
ShiftedPoint shift_point(const ProblemDefinition& problem, std::size_t i, std::span<const double> y);

struct ConstraintEvaluation {
  std::vector<double> shifted_g;      // g_i at its own shifted point
  std::vector<double> deterministic_h;
  double violation = 0.0;
  std::size_t degenerate_gradients = 0;
  std::size_t clamped_shifts = 0;
};

/// Full constraint picture at y; violation is
///   sum min(0, g_i(shifted))^s + sum max(0, h_j)^s
/// with non-finite terms mapped to +infinity.
ConstraintEvaluation evaluate_constraints(const ProblemDefinition& problem, std::span<const double> y,
                                          double power = 2.0);

/// nu(y) >= 0, zero exactly on the reliable design space.
double constraint_violation(const ProblemDefinition& problem, std::span<const double> y, double power = 2.0);

struct EvaluatedSolution {
  std::vector<double> y;
  double f = 0.0;
  double nu = 0.0;
};

EvaluatedSolution evaluate(const ProblemDefinition& problem, std::vector<double> y, double power = 2.0);

/// Strict epsilon-level comparison (f1, nu1) <_eps (f2, nu2).
bool epsilon_less(double f1, double nu1, double f2, double nu2, double eps) noexcept;
/// Non-strict epsilon-level comparison (f1, nu1) <=_eps (f2, nu2).
bool epsilon_less_equal(double f1, double nu1, double f2, double nu2, double eps) noexcept;

inline bool epsilon_less(const EvaluatedSolution& a, const EvaluatedSolution& b, double eps) noexcept {
  return epsilon_less(a.f, a.nu, b.f, b.nu, eps);
}

/// less: a better; greater: b better; equivalent: neither strictly better.
std::weak_ordering epsilon_compare(double f1, double nu1, double f2, double nu2, double eps) noexcept;

struct EpsilonSchedule {
  double eps0 = 0.0;
  double control_iteration = 0.0;  // T_c
  double cp = 5.0;
};

/// eps0 at t = 0, eps0 * (1 - t/Tc)^cp for 0 < t < Tc, zero afterwards.
double epsilon_update(const EpsilonSchedule& schedule, double t) noexcept;

/// Violation of the ceil(theta * n)-th smallest-violation individual.
double init_epsilon(std::span<const EvaluatedSolution> population, double theta);

} // namespace rbdo
