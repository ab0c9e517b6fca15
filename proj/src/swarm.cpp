#include "rbdo/swarm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rbdo {

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::DirectionalBat ? "dba" : "ba";
}

std::string_view to_string(LocalSearchOrigin origin) {
  switch (origin) {
    case LocalSearchOrigin::Best: return "best";
    case LocalSearchOrigin::Moved: return "moved";
    case LocalSearchOrigin::Current: return "current";
  }
  return "?";
}

LocalSearchOrigin parse_local_search_origin(std::string_view name) {
  if (name == "best") return LocalSearchOrigin::Best;
  if (name == "moved") return LocalSearchOrigin::Moved;
  if (name == "current") return LocalSearchOrigin::Current;
  throw ConfigError("unknown local_search_origin '" + std::string(name) + "' (expected best, moved or current)");
}

Algorithm parse_algorithm(std::string_view name) {
  std::string s(name);
  std::ranges::transform(s, s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "dba" || s == "directional") return Algorithm::DirectionalBat;
  if (s == "ba" || s == "standard") return Algorithm::StandardBat;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected dba or ba)");
}

void SwarmConfig::validate() const {
  if (population < 2) throw ConfigError("population must be at least 2");
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (!(0.0 <= r0 && r0 <= r_inf && r_inf <= 1.0))
    throw ConfigError("pulse rates must satisfy 0 <= r0 <= r_inf <= 1");
  // A_inf = 0 is allowed so that acceptance can be switched off entirely.
  if (!(0.0 <= loudness_inf && loudness_inf <= loudness0))
    throw ConfigError("loudness must satisfy 0 <= A_inf <= A0");
  if (!(phi_min < phi_max)) throw ConfigError("phi_min must be below phi_max");
  if (!(cp > 0.0)) throw ConfigError("cp must be positive");
  if (!(tc_fraction > 0.0 && tc_fraction <= 1.0)) throw ConfigError("tc_fraction must lie in (0, 1]");
  if (!(theta_fraction > 0.0 && theta_fraction <= 1.0))
    throw ConfigError("theta_fraction must lie in (0, 1]");
  if (!(violation_power > 0.0)) throw ConfigError("violation_power must be positive");
  if (algorithm == Algorithm::StandardBat) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  }
}

std::vector<double> dba_move(std::span<const double> y, std::span<const double> best,
                             std::span<const double> peer, bool peer_better,
                             std::span<const double> phi1, std::span<const double> phi2, const Box& box) {
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] += (best[j] - y[j]) * phi1[j];
    if (peer_better) out[j] += (peer[j] - y[j]) * phi2[j];
  }
  box.clamp(out);
  return out;
}

std::vector<double> local_search(std::span<const double> y, double mean_loudness,
                                 std::span<const double> width, std::span<const double> eta, const Box& box) {
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += mean_loudness * eta[j] * width[j];
  box.clamp(out);
  return out;
}

double linear_schedule(double t, double t_max, double initial, double final_value) noexcept {
  if (t_max <= 1.0) return final_value;
  return (initial - final_value) / (1.0 - t_max) * (t - t_max) + final_value;
}

double ba_pulse_rate(double r0, double gamma, double t) noexcept {
  return r0 * (1.0 - std::exp(-gamma * t));
}

void snap_discrete(std::span<double> y, const std::vector<std::vector<double>>& value_sets) {
  for (std::size_t j = 0; j < y.size() && j < value_sets.size(); ++j) {
    const auto& set = value_sets[j];
    if (set.empty()) continue;
    auto hi = std::ranges::lower_bound(set, y[j]);
    if (hi == set.end()) {
      y[j] = set.back();
    } else if (hi == set.begin()) {
      y[j] = set.front();
    } else {
      const auto lo = std::prev(hi);
      y[j] = (*hi - y[j]) < (y[j] - *lo) ? *hi : *lo;
    }
  }
}

namespace {

/// State shared by both bat variants: population, global best, feasible
/// archive, epsilon schedule and trace.
class SwarmRun {
public:
  SwarmRun(const ProblemDefinition& problem, const SwarmConfig& config)
      : problem_(problem), config_(config), rng_(config.seed), box_(problem.box()),
        sets_(problem.discrete_sets()) {
    problem.validate();
    config.validate();
    result_.seed = config.seed;
    result_.trace.reserve(config.max_iterations);
  }

  void initialize(double r0, double loudness0) {
    const std::size_t n = box_.size();
    bats_.resize(config_.population);
    std::vector<EvaluatedSolution> initial;
    initial.reserve(bats_.size());
    for (auto& bat : bats_) {
      std::vector<double> y(n);
      for (std::size_t j = 0; j < n; ++j) y[j] = rng_.uniform(box_.lower[j], box_.upper[j]);
      snap_discrete(y, sets_);
      bat.solution = evaluate_candidate(std::move(y));
      bat.pulse_rate = r0;
      bat.loudness = loudness0;
      bat.velocity.assign(n, 0.0);
      initial.push_back(bat.solution);
    }
    schedule_.eps0 = init_epsilon(initial, config_.theta_fraction);
    schedule_.control_iteration = config_.tc_fraction * static_cast<double>(config_.max_iterations);
    schedule_.cp = config_.cp;

    best_ = bats_.front().solution;
    for (const auto& bat : bats_) consider_for_best(bat.solution, schedule_.eps0);
  }

  EvaluatedSolution evaluate_candidate(std::vector<double> y) {
    ++result_.evaluations;
    auto s = evaluate(problem_, std::move(y), config_.violation_power);
    if (s.nu == 0.0 && (!has_feasible_ || s.f < feasible_.f)) {
      feasible_ = s;
      has_feasible_ = true;
    }
    return s;
  }

  void consider_for_best(const EvaluatedSolution& s, double eps) {
    if (epsilon_less(s, best_, eps)) best_ = s;
  }

  double epsilon_at(std::size_t t) const { return epsilon_update(schedule_, static_cast<double>(t)); }

  double mean_loudness() const {
    double sum = 0.0;
    for (const auto& bat : bats_) sum += bat.loudness;
    return sum / static_cast<double>(bats_.size());
  }

  std::size_t random_peer(std::size_t i) {
    std::size_t k = rng_.index(bats_.size() - 1);
    return k >= i ? k + 1 : k;
  }

  void record(std::size_t t, double eps) { result_.trace.push_back({t, best_.f, best_.nu, eps}); }

  TrialResult finish() {
    result_.best = (best_.nu > 0.0 && has_feasible_) ? feasible_ : best_;
    return std::move(result_);
  }

  const ProblemDefinition& problem_;
  const SwarmConfig& config_;
  Rng rng_;
  Box box_;
  std::vector<std::vector<double>> sets_;
  std::vector<BatState> bats_;
  EvaluatedSolution best_;
  EvaluatedSolution feasible_;
  bool has_feasible_ = false;
  EpsilonSchedule schedule_;
  TrialResult result_;
};

} // namespace

TrialResult run(const ProblemDefinition& problem, const SwarmConfig& config) {
  SwarmRun s(problem, config);
  s.initialize(config.r0, config.loudness0);

  const std::size_t n = s.box_.size();
  std::vector<double> w0(n), w_inf(n);
  for (std::size_t j = 0; j < n; ++j) {
    w0[j] = initial_width(s.box_.lower[j], s.box_.upper[j]);
    w_inf[j] = final_width(w0[j]);
  }
  for (auto& bat : s.bats_) bat.width = w0;

  const auto t_max = static_cast<double>(config.max_iterations);
  const double phi_span = config.phi_max - config.phi_min;
  std::vector<double> phi1(n), phi2(n), eta(n);
  double loudness_sum = config.loudness0 * static_cast<double>(config.population);

  for (std::size_t t = 1; t <= config.max_iterations; ++t) {
    const double eps = s.epsilon_at(t);
    const auto td = static_cast<double>(t);
    for (std::size_t i = 0; i < s.bats_.size(); ++i) {
      auto& bat = s.bats_[i];
      for (std::size_t j = 0; j < n; ++j) {
        phi1[j] = config.phi_min + phi_span * s.rng_.uniform01();
        phi2[j] = config.phi_min + phi_span * s.rng_.uniform01();
      }
      const std::size_t k = s.random_peer(i);
      const auto& peer = s.bats_[k].solution;
      const bool peer_better = config.peer_rule == PeerRule::Epsilon
                                   ? epsilon_less(peer, bat.solution, eps)
                                   : peer.f < bat.solution.f;
      auto candidate = dba_move(bat.solution.y, s.best_.y, peer.y, peer_better, phi1, phi2, s.box_);

      if (s.rng_.uniform01() > bat.pulse_rate) {
        for (std::size_t j = 0; j < n; ++j) {
          bat.width[j] = schedule_w(td, t_max, w0[j], w_inf[j]);
          eta[j] = 2.0 * s.rng_.uniform01() - 1.0;
        }
        const double mean_a = loudness_sum / static_cast<double>(s.bats_.size());
        switch (config.local_search_origin) {
          case LocalSearchOrigin::Best: candidate = local_search(s.best_.y, mean_a, bat.width, eta, s.box_); break;
          case LocalSearchOrigin::Moved: candidate = local_search(candidate, mean_a, bat.width, eta, s.box_); break;
          case LocalSearchOrigin::Current:
            candidate = local_search(bat.solution.y, mean_a, bat.width, eta, s.box_);
            break;
        }
        ++s.result_.local_searches;
      }
      snap_discrete(candidate, s.sets_);
      auto trial = s.evaluate_candidate(std::move(candidate));

      const bool loud_enough = s.rng_.uniform01() < bat.loudness;
      if (loud_enough && epsilon_less(trial, bat.solution, eps)) {
        bat.solution = trial;
        bat.pulse_rate = schedule_r(td, t_max, config.r0, config.r_inf);
        const double a = schedule_A(td, t_max, config.loudness0, config.loudness_inf);
        loudness_sum += a - bat.loudness;
        bat.loudness = a;
      }
      s.consider_for_best(trial, eps);
    }
    s.record(t, eps);
  }
  return s.finish();
}

TrialResult run_standard_ba(const ProblemDefinition& problem, const SwarmConfig& config) {
  SwarmRun s(problem, config);
  s.initialize(config.r0, config.loudness0);

  const std::size_t n = s.box_.size();
  const double phi_span = config.phi_max - config.phi_min;

  for (std::size_t t = 1; t <= config.max_iterations; ++t) {
    const double eps = s.epsilon_at(t);
    const auto td = static_cast<double>(t);
    for (auto& bat : s.bats_) {
      std::vector<double> candidate(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double phi = config.phi_min + phi_span * s.rng_.uniform01();
        bat.velocity[j] += (s.best_.y[j] - bat.solution.y[j]) * phi;
        candidate[j] = bat.solution.y[j] + bat.velocity[j];
      }
      s.box_.clamp(candidate);

      if (s.rng_.uniform01() > bat.pulse_rate) {
        // Random walk around the current global best.
        const double mean_a = s.mean_loudness();
        for (std::size_t j = 0; j < n; ++j)
          candidate[j] = s.best_.y[j] + (2.0 * s.rng_.uniform01() - 1.0) * mean_a;
        s.box_.clamp(candidate);
        ++s.result_.local_searches;
      }
      snap_discrete(candidate, s.sets_);
      auto trial = s.evaluate_candidate(std::move(candidate));

      // The original algorithm only accepts moves that beat the global best,
      // and the global best only changes through an accepted move.
      const bool loud_enough = s.rng_.uniform01() < bat.loudness;
      if (loud_enough && epsilon_less(trial, s.best_, eps)) {
        bat.solution = trial;
        bat.loudness = ba_loudness(bat.loudness, config.alpha);
        bat.pulse_rate = ba_pulse_rate(config.r0, config.gamma, td);
        s.best_ = bat.solution;
      }
    }
    s.record(t, eps);
  }
  return s.finish();
}

TrialResult run_trial(const ProblemDefinition& problem, const SwarmConfig& config) {
  return config.algorithm == Algorithm::DirectionalBat ? run(problem, config) : run_standard_ba(problem, config);
}

} // namespace rbdo
