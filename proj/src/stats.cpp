#include "rbdo/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

namespace rbdo {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSqrt6OverPi = 0.7796968012336761;  // sqrt(6)/pi

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::ranges::transform(out, out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

} // namespace

std::string_view to_string(Family family) {
  switch (family) {
  case Family::Normal: return "normal";
  case Family::LogNormal: return "lognormal";
  case Family::Gumbel: return "gumbel";
  case Family::Deterministic: return "deterministic";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  const auto s = lowercase(name);
  if (s == "normal") return Family::Normal;
  if (s == "lognormal" || s == "log-normal") return Family::LogNormal;
  if (s == "gumbel") return Family::Gumbel;
  if (s == "deterministic") return Family::Deterministic;
  throw ConfigError("unknown distribution family '" + std::string(name) + "'");
}

double std_normal_pdf(double u) {
  return std::exp(-0.5 * u * u) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double std_normal_cdf(double u) {
  return 0.5 * std::erfc(-u * (0.5 * std::numbers::sqrt2));
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("std_normal_quantile: probability must lie in (0, 1), got " + std::to_string(p));
  // erfc_inv is accurate near both ends; 2p loses nothing for p < 0.5.
  if (p < 0.5)
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
}

Distribution::Distribution(Family family, double mean, double std)
    : family_(family), mean_(mean), std_(family == Family::Deterministic ? 0.0 : std) {
  if (!std::isfinite(mean))
    throw DomainError("distribution mean must be finite");
  switch (family_) {
  case Family::Deterministic:
    location_ = mean_;
    scale_ = 0.0;
    return;
  case Family::Normal:
  case Family::LogNormal:
  case Family::Gumbel:
    if (!(std > 0.0) || !std::isfinite(std))
      throw DomainError("stochastic distribution requires std > 0, got " + std::to_string(std));
    break;
  }
  if (family_ == Family::Normal) {
    location_ = mean_;
    scale_ = std_;
  } else if (family_ == Family::LogNormal) {
    if (!(mean_ > 0.0))
      throw DomainError("lognormal distribution requires mean > 0, got " + std::to_string(mean_));
    const double cov = std_ / mean_;
    const double zeta2 = std::log1p(cov * cov);
    scale_ = std::sqrt(zeta2);
    location_ = std::log(mean_) - 0.5 * zeta2;
  } else {
    scale_ = std_ * kSqrt6OverPi;
    location_ = mean_ - kEulerGamma * scale_;
  }
}

double Distribution::analytic_mean() const {
  switch (family_) {
  case Family::LogNormal: return std::exp(location_ + 0.5 * scale_ * scale_);
  case Family::Gumbel: return location_ + kEulerGamma * scale_;
  default: return location_;
  }
}

double Distribution::analytic_std() const {
  switch (family_) {
  case Family::LogNormal: {
    const double z2 = scale_ * scale_;
    return std::exp(location_ + 0.5 * z2) * std::sqrt(std::expm1(z2));
  }
  case Family::Gumbel: return scale_ / kSqrt6OverPi;
  default: return scale_;
  }
}

void Distribution::check_support(double x) const {
  if (!std::isfinite(x))
    throw DomainError("distribution argument must be finite");
  if (family_ == Family::LogNormal && !(x > 0.0))
    throw DomainError("lognormal support is x > 0, got " + std::to_string(x));
}

double Distribution::cdf(double x) const {
  check_support(x);
  switch (family_) {
  case Family::Deterministic: return x < mean_ ? 0.0 : 1.0;
  case Family::Normal: return std_normal_cdf((x - location_) / scale_);
  case Family::LogNormal: return std_normal_cdf((std::log(x) - location_) / scale_);
  case Family::Gumbel: return std::exp(-std::exp(-(x - location_) / scale_));
  }
  return 0.0;
}

double Distribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("quantile: probability must lie in (0, 1), got " + std::to_string(p));
  switch (family_) {
  case Family::Deterministic: return mean_;
  case Family::Normal: return location_ + scale_ * std_normal_quantile(p);
  case Family::LogNormal: return std::exp(location_ + scale_ * std_normal_quantile(p));
  case Family::Gumbel: return location_ - scale_ * std::log(-std::log(p));
  }
  return 0.0;
}

double Distribution::pdf(double x) const {
  check_support(x);
  switch (family_) {
  case Family::Deterministic:
    throw DomainError("pdf is undefined for a deterministic quantity");
  case Family::Normal: return std_normal_pdf((x - location_) / scale_) / scale_;
  case Family::LogNormal: return std_normal_pdf((std::log(x) - location_) / scale_) / (scale_ * x);
  case Family::Gumbel: {
    const double z = (x - location_) / scale_;
    return std::exp(-z - std::exp(-z)) / scale_;
  }
  }
  return 0.0;
}

double Distribution::from_standard_normal(double u) const {
  switch (family_) {
  case Family::Deterministic: return mean_;
  case Family::Normal: return location_ + scale_ * u;
  case Family::LogNormal: return std::exp(location_ + scale_ * u);
  case Family::Gumbel: {
    // -ln F = -ln Phi(u); for the upper tail use log1p on the complement.
    const double neg_log_cdf = u < 0.0 ? -std::log(std_normal_cdf(u)) : -std::log1p(-std_normal_cdf(-u));
    return location_ - scale_ * std::log(neg_log_cdf);
  }
  }
  return 0.0;
}

double Distribution::to_standard_normal(double x) const {
  check_support(x);
  switch (family_) {
  case Family::Deterministic:
    throw DomainError("deterministic quantity has no standard-normal image");
  case Family::Normal: return (x - location_) / scale_;
  case Family::LogNormal: return (std::log(x) - location_) / scale_;
  case Family::Gumbel: {
    const double e = std::exp(-(x - location_) / scale_);
    const double lower = std::exp(-e);
    if (lower < 0.5) return std_normal_quantile(lower);
    return -std_normal_quantile(-std::expm1(-e));
  }
  }
  return 0.0;
}

double equivalent_normal_std(const Distribution& dist, double x) {
  if (dist.family() == Family::Normal) return dist.std();
  const double density = dist.pdf(x);
  if (!(density > 0.0))
    throw DomainError("equivalent_normal_std: zero density at x = " + std::to_string(x));
  return std_normal_pdf(dist.to_standard_normal(x)) / density;
}

double sample(const Distribution& dist, Rng& rng) {
  if (!dist.stochastic()) return dist.mean();
  return dist.quantile(rng.uniform01());
}

} // namespace rbdo
