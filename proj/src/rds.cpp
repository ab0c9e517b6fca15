#include "rbdo/rds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rbdo {

// ---------------------------------------------------------------------------
// ProblemDefinition

void Box::clamp(std::span<double> y) const {
  for (std::size_t j = 0; j < y.size(); ++j)
    y[j] = std::clamp(y[j], lower[j], upper[j]);
}

Box ProblemDefinition::box() const {
  Box b;
  b.lower.reserve(dimension());
  b.upper.reserve(dimension());
  for (const auto& v : deterministic_vars) {
    b.lower.push_back(v.lower);
    b.upper.push_back(v.upper);
  }
  for (const auto& v : random_vars) {
    b.lower.push_back(v.lower);
    b.upper.push_back(v.upper);
  }
  return b;
}

std::vector<std::vector<double>> ProblemDefinition::discrete_sets() const {
  std::vector<std::vector<double>> sets;
  sets.reserve(dimension());
  for (const auto& v : deterministic_vars) sets.push_back(v.discrete_values);
  for (const auto& v : random_vars) sets.push_back(v.discrete_values);
  return sets;
}

std::vector<double> ProblemDefinition::param_means() const {
  std::vector<double> means;
  means.reserve(params.size());
  for (const auto& p : params) means.push_back(p.dist.mean());
  return means;
}

std::vector<Distribution> ProblemDefinition::random_var_dists(std::span<const double> y) const {
  std::vector<Distribution> dists;
  dists.reserve(nx());
  for (std::size_t j = 0; j < nx(); ++j) dists.push_back(random_vars[j].at(y[nd() + j]));
  return dists;
}

double ProblemDefinition::evaluate_objective(std::span<const double> y) const {
  const auto pm = param_means();
  return objective(Realization{y.first(nd()), y.subspan(nd()), pm});
}

void ProblemDefinition::set_target_beta(double beta) {
  for (auto& c : probabilistic) c.target_pf = std_normal_cdf(-beta);
}

namespace {

void check_variable(const std::string& name, double lower, double upper, const std::vector<double>& set) {
  if (!(lower < upper))
    throw ConfigError("variable '" + name + "': lower bound must be below upper bound");
  if (set.empty()) return;
  if (!std::ranges::is_sorted(set))
    throw ConfigError("variable '" + name + "': discrete values must be sorted");
  if (set.front() < lower || set.back() > upper)
    throw ConfigError("variable '" + name + "': discrete values outside bounds");
}

} // namespace

void ProblemDefinition::validate() const {
  if (!objective) throw ConfigError("problem '" + name + "' has no objective");
  if (dimension() == 0) throw ConfigError("problem '" + name + "' has no design variables");
  for (const auto& v : deterministic_vars) check_variable(v.name, v.lower, v.upper, v.discrete_values);
  for (const auto& v : random_vars) {
    check_variable(v.name, v.lower, v.upper, v.discrete_values);
    if (v.family == Family::Deterministic)
      throw ConfigError("random variable '" + v.name + "' needs a stochastic family");
    if (v.cov ? !(*v.cov > 0.0) : !(v.std > 0.0))
      throw ConfigError("random variable '" + v.name + "' needs std > 0 or cov > 0");
  }
  for (const auto& c : probabilistic) {
    if (!c.g) throw ConfigError("constraint '" + c.name + "' has no limit state");
    if (!(c.target_pf > 0.0 && c.target_pf < 0.5))
      throw ConfigError("constraint '" + c.name + "': target pf must lie in (0, 0.5)");
  }
  for (const auto& c : deterministic)
    if (!c.h) throw ConfigError("constraint '" + c.name + "' has no function");
}

// ---------------------------------------------------------------------------
// Reliable design space transform

double target_beta(double pf) {
  if (!(pf > 0.0 && pf < 0.5))
    throw DomainError("target_beta: pf must lie in (0, 0.5), got " + std::to_string(pf));
  return -std_normal_quantile(pf);
}

DirectionalCosines directional_cosines(const LimitState& g, std::span<const double> d,
                                       std::span<const double> x_means, std::span<const double> p_means,
                                       std::span<const double> x_sigmas, std::span<const double> p_sigmas) {
  const std::size_t nx = x_means.size();
  const std::size_t np = p_means.size();
  std::vector<double> z(nx + np);
  std::ranges::copy(x_means, z.begin());
  std::ranges::copy(p_means, z.begin() + static_cast<std::ptrdiff_t>(nx));
  const std::span<const double> zs(z);
  const Realization at{d, zs.first(nx), zs.subspan(nx)};

  std::vector<double> weighted(nx + np, 0.0);
  double norm2 = 0.0;
  for (std::size_t j = 0; j < nx + np; ++j) {
    const double sigma = j < nx ? x_sigmas[j] : p_sigmas[j - nx];
    if (sigma == 0.0) continue;
    const double z0 = z[j];
    const double h = 1e-6 * std::max(1.0, std::abs(z0));
    z[j] = z0 + h;
    const double up = g(at);
    z[j] = z0 - h;
    const double down = g(at);
    z[j] = z0;
    weighted[j] = sigma * (up - down) / (2.0 * h);
    norm2 += weighted[j] * weighted[j];
  }

  DirectionalCosines out;
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    out.degenerate = true;
    out.x.assign(nx, 0.0);
    out.p.assign(np, 0.0);
    return out;
  }
  for (auto& w : weighted) w /= norm;
  out.x.assign(weighted.begin(), weighted.begin() + static_cast<std::ptrdiff_t>(nx));
  out.p.assign(weighted.begin() + static_cast<std::ptrdiff_t>(nx), weighted.end());
  return out;
}

double normal_shift(double mean, double std, double alpha, double beta) noexcept {
  return mean - alpha * std * beta;
}

double rosenblatt_shift(const Distribution& dist, double alpha, double beta, bool* clamped) {
  constexpr double kFloor = 1e-15;
  double prob = std_normal_cdf(-beta * alpha);
  const double guarded = std::clamp(prob, kFloor, 1.0 - kFloor);
  if (clamped) *clamped = guarded != prob;
  return dist.quantile(guarded);
}

ShiftedPoint shift_point(const ProblemDefinition& problem, std::size_t i, std::span<const double> y) {
  const std::size_t nd = problem.nd();
  const auto d = y.first(nd);
  const auto x_means = y.subspan(nd, problem.nx());
  const auto x_dists = problem.random_var_dists(y);
  const auto p_means = problem.param_means();
  const double beta = target_beta(problem.probabilistic.at(i).target_pf);

  std::vector<double> x_sigmas(problem.nx());
  for (std::size_t j = 0; j < x_sigmas.size(); ++j)
    x_sigmas[j] = equivalent_normal_std(x_dists[j], x_means[j]);
  std::vector<double> p_sigmas(problem.np(), 0.0);
  for (std::size_t j = 0; j < p_sigmas.size(); ++j) {
    const auto& dist = problem.params[j].dist;
    if (dist.stochastic()) p_sigmas[j] = equivalent_normal_std(dist, dist.mean());
  }

  ShiftedPoint out;
  out.constraint_index = i;
  out.alpha = directional_cosines(problem.probabilistic[i].g, d, x_means, p_means, x_sigmas, p_sigmas);

  auto shift_one = [&](const Distribution& dist, double alpha) {
    switch (dist.family()) {
    case Family::Deterministic: return dist.mean();
    case Family::Normal: return normal_shift(dist.mean(), dist.std(), alpha, beta);
    default: {
      bool clamped = false;
      const double v = rosenblatt_shift(dist, alpha, beta, &clamped);
      out.clamped = out.clamped || clamped;
      return v;
    }
    }
  };

  out.x.resize(problem.nx());
  for (std::size_t j = 0; j < out.x.size(); ++j) out.x[j] = shift_one(x_dists[j], out.alpha.x[j]);
  out.p.resize(problem.np());
  for (std::size_t j = 0; j < out.p.size(); ++j) out.p[j] = shift_one(problem.params[j].dist, out.alpha.p[j]);
  return out;
}

namespace {

double violation_term(double excess, double power) {
  if (std::isnan(excess)) return std::numeric_limits<double>::infinity();
  if (excess <= 0.0) return 0.0;
  return power == 2.0 ? excess * excess : std::pow(excess, power);
}

} // namespace

ConstraintEvaluation evaluate_constraints(const ProblemDefinition& problem, std::span<const double> y,
                                          double power) {
  ConstraintEvaluation out;
  const std::size_t nd = problem.nd();
  const auto d = y.first(nd);

  out.shifted_g.reserve(problem.probabilistic.size());
  for (std::size_t i = 0; i < problem.probabilistic.size(); ++i) {
    const auto sp = shift_point(problem, i, y);
    if (sp.alpha.degenerate) ++out.degenerate_gradients;
    if (sp.clamped) ++out.clamped_shifts;
    const double g = problem.probabilistic[i].g(Realization{d, sp.x, sp.p});
    out.shifted_g.push_back(g);
    out.violation += violation_term(-g, power);
  }

  const auto pm = problem.param_means();
  const Realization at_means{d, y.subspan(nd), pm};
  out.deterministic_h.reserve(problem.deterministic.size());
  for (const auto& c : problem.deterministic) {
    const double h = c.h(at_means);
    out.deterministic_h.push_back(h);
    out.violation += violation_term(h, power);
  }
  if (std::isnan(out.violation)) out.violation = std::numeric_limits<double>::infinity();
  return out;
}

double constraint_violation(const ProblemDefinition& problem, std::span<const double> y, double power) {
  return evaluate_constraints(problem, y, power).violation;
}

EvaluatedSolution evaluate(const ProblemDefinition& problem, std::vector<double> y, double power) {
  EvaluatedSolution s;
  s.nu = constraint_violation(problem, y, power);
  s.f = problem.evaluate_objective(y);
  if (std::isnan(s.f)) s.f = std::numeric_limits<double>::infinity();
  s.y = std::move(y);
  return s;
}

// ---------------------------------------------------------------------------
// Epsilon-level comparison

bool epsilon_less(double f1, double nu1, double f2, double nu2, double eps) noexcept {
  if ((nu1 <= eps && nu2 <= eps) || nu1 == nu2) return f1 < f2;
  return nu1 < nu2;
}

bool epsilon_less_equal(double f1, double nu1, double f2, double nu2, double eps) noexcept {
  if ((nu1 <= eps && nu2 <= eps) || nu1 == nu2) return f1 <= f2;
  return nu1 <= nu2;
}

std::weak_ordering epsilon_compare(double f1, double nu1, double f2, double nu2, double eps) noexcept {
  if (epsilon_less(f1, nu1, f2, nu2, eps)) return std::weak_ordering::less;
  if (epsilon_less(f2, nu2, f1, nu1, eps)) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

double epsilon_update(const EpsilonSchedule& schedule, double t) noexcept {
  if (t <= 0.0) return schedule.eps0;
  if (t >= schedule.control_iteration) return 0.0;
  return schedule.eps0 * std::pow(1.0 - t / schedule.control_iteration, schedule.cp);
}

double init_epsilon(std::span<const EvaluatedSolution> population, double theta) {
  if (population.empty()) throw DomainError("init_epsilon: empty population");
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("init_epsilon: theta must lie in (0, 1]");
  std::vector<double> nus;
  nus.reserve(population.size());
  for (const auto& s : population) nus.push_back(s.nu);
  std::ranges::sort(nus);
  const auto n = static_cast<double>(nus.size());
  auto rank = static_cast<std::size_t>(std::ceil(theta * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, nus.size());
  return nus[rank - 1];
}

} // namespace rbdo
