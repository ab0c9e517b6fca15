#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "rbdo/errors.hpp"

namespace rbdo {

enum class Family { Normal, LogNormal, Gumbel, Deterministic };

std::string_view to_string(Family family);
/// Accepts "normal", "lognormal", "gumbel", "deterministic" (case-insensitive).
Family parse_family(std::string_view name);

double std_normal_pdf(double u);
/// Phi(u). Computed from erfc, so both tails keep full relative precision.
double std_normal_cdf(double u);
/// Phi^-1(p) for 0 < p < 1; throws DomainError otherwise.
double std_normal_quantile(double p);

/// Marginal distribution of one random quantity, specified by its first two
/// moments. Shape parameters are moment-matched:
///   LogNormal: zeta^2 = ln(1 + (std/mean)^2), lambda = ln(mean) - zeta^2/2
///   Gumbel (largest value): scale = std*sqrt(6)/pi, location = mean - gamma_E*scale
class Distribution {
public:
  Distribution() = default;
  Distribution(Family family, double mean, double std);

  static Distribution normal(double mean, double std) { return {Family::Normal, mean, std}; }
  static Distribution lognormal(double mean, double std) { return {Family::LogNormal, mean, std}; }
  static Distribution gumbel(double mean, double std) { return {Family::Gumbel, mean, std}; }
  static Distribution deterministic(double value) { return {Family::Deterministic, value, 0.0}; }

  Family family() const noexcept { return family_; }
  double mean() const noexcept { return mean_; }
  double std() const noexcept { return std_; }
  bool stochastic() const noexcept { return family_ != Family::Deterministic; }

  /// lambda / location for LogNormal / Gumbel; mean otherwise.
  double location() const noexcept { return location_; }
  /// zeta / scale for LogNormal / Gumbel; std otherwise.
  double scale() const noexcept { return scale_; }

  /// Moments recomputed from the derived shape parameters.
  double analytic_mean() const;
  double analytic_std() const;

  double cdf(double x) const;
  double quantile(double p) const;
  double pdf(double x) const;

  /// Marginal Rosenblatt map u -> x = F^-1(Phi(u)), evaluated without
  /// passing through Phi where a closed form exists (tails stay exact).
  double from_standard_normal(double u) const;
  /// Inverse map x -> u = Phi^-1(F(x)).
  double to_standard_normal(double x) const;

private:
  void check_support(double x) const;

  Family family_ = Family::Deterministic;
  double mean_ = 0.0;
  double std_ = 0.0;
  double location_ = 0.0;
  double scale_ = 0.0;
};

/// Standard deviation of the normal distribution tangent to `dist` at x:
/// phi(Phi^-1(F(x))) / f(x). Equals dist.std() exactly for Normal.
double equivalent_normal_std(const Distribution& dist, double x);

/// Seeded 64-bit stream with platform-independent conversions (the
/// std::*_distribution adaptors are implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform01() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) noexcept {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
  }
  double standard_normal() { return std_normal_quantile(uniform01()); }

private:
  std::mt19937_64 engine_;
};

/// Inverse-transform draw; Deterministic returns the mean without consuming
/// the stream.
double sample(const Distribution& dist, Rng& rng);

} // namespace rbdo
