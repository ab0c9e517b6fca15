#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rbdo/stats.hpp"

using namespace rbdo;

namespace {

double simpson(auto f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double phi(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

} // namespace

TEST_CASE("standard normal cdf") {
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(std_normal_cdf(-3.0) - 0.00135) < 1e-5);

  // brute-force quadrature of the density
  const double quad = simpson(phi, -40.0, -1.28, 400000);
  CHECK(std::abs(std_normal_cdf(-1.28) - quad) < 1e-12);

  for (double u = -8.0; u <= 8.0; u += 0.37) CHECK(std::abs(std_normal_cdf(-u) - (1.0 - std_normal_cdf(u))) < 1e-15);

  double prev = 0.0;
  for (double u = -10.0; u <= 10.0; u += 0.01) {
    const double p = std_normal_cdf(u);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("standard normal quantile") {
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(std::abs(std_normal_quantile(0.00135) + 3.0) < 0.005);
  CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(-0.2), DomainError);

  Rng rng(7);
  for (int k = 0; k < 1000; ++k) {
    const double p = 1e-9 + (1.0 - 2e-9) * rng.uniform01();
    CHECK(std::abs(std_normal_cdf(std_normal_quantile(p)) - p) < 1e-10);
  }
}

TEST_CASE("family names") {
  CHECK(parse_family("LogNormal") == Family::LogNormal);
  CHECK(parse_family("gumbel") == Family::Gumbel);
  CHECK(to_string(Family::Normal) == "normal");
  CHECK_THROWS_AS(parse_family("weibull"), ConfigError);
}

TEST_CASE("cdf, quantile and pdf of the marginals") {
  CHECK(Distribution::normal(5, 1).cdf(5.0) == doctest::Approx(0.5));

  const auto gum = Distribution::gumbel(3.44, 0.3);
  CHECK(std::abs(gum.quantile(gum.cdf(3.0)) - 3.0) < 1e-9);

  const std::vector<Distribution> dists{Distribution::normal(2, 0.5), Distribution::lognormal(26680, 2668),
                                        Distribution::gumbel(3.3, 0.3), Distribution::lognormal(1, 0.1)};
  for (const auto& d : dists) {
    for (double z = -3.0; z <= 3.0; z += 0.25) {
      const double x = d.mean() + z * d.std();
      if (d.family() == Family::LogNormal && x <= 0) continue;
      const double F = d.cdf(x);
      CHECK(std::abs(d.cdf(d.quantile(F)) - F) < 1e-9);
      const double h = 1e-5 * d.std();
      const double numeric = (d.cdf(x + h) - d.cdf(x - h)) / (2 * h);
      CHECK(d.pdf(x) == doctest::Approx(numeric).epsilon(1e-6));
    }
    CHECK(d.analytic_mean() == doctest::Approx(d.mean()).epsilon(1e-12));
    CHECK(d.analytic_std() == doctest::Approx(d.std()).epsilon(1e-12));
  }
}

TEST_CASE("lognormal cdf against empirical cdf") {
  const auto load = Distribution::lognormal(26680, 2668);
  Rng rng(2024);
  const int n = 1000000;
  std::vector<double> draws(n);
  for (auto& v : draws) v = sample(load, rng);
  std::ranges::sort(draws);
  for (double p : {0.01, 0.1, 0.5, 0.9, 0.99}) {
    const double x = load.quantile(p);
    const double empirical =
        static_cast<double>(std::ranges::upper_bound(draws, x) - draws.begin()) / static_cast<double>(n);
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(empirical - load.cdf(x)) < 3 * se);
  }
}

TEST_CASE("support and deterministic quantities") {
  const auto ln = Distribution::lognormal(1, 0.1);
  CHECK_THROWS_AS(ln.cdf(0.0), DomainError);
  CHECK_THROWS_AS(ln.pdf(-1.0), DomainError);
  CHECK_THROWS_AS(Distribution::normal(0, 0), DomainError);

  const auto c = Distribution::deterministic(6.74e-5);
  CHECK(c.quantile(0.3) == 6.74e-5);
  CHECK(c.cdf(6.0e-5) == 0.0);
  CHECK(c.cdf(7.0e-5) == 1.0);
  CHECK_THROWS_AS(c.pdf(6.74e-5), DomainError);
  Rng rng(1);
  CHECK(sample(c, rng) == 6.74e-5);
}

TEST_CASE("equivalent normal standard deviation") {
  const auto nrm = Distribution::normal(5, 0.3);
  for (double x : {3.0, 4.2, 5.0, 6.1}) CHECK(equivalent_normal_std(nrm, x) == 0.3);

  // Gumbel: explicit evaluation of phi, Phi^-1 and the largest-value density
  const double mean = 3.3, sd = 0.3, x = 3.3;
  const double b = sd * std::sqrt(6.0) / std::numbers::pi;
  const double a = mean - std::numbers::egamma * b;
  const double z = (x - a) / b;
  const double F = std::exp(-std::exp(-z));
  const double f = std::exp(-z - std::exp(-z)) / b;
  const double expected = phi(std_normal_quantile(F)) / f;
  CHECK(equivalent_normal_std(Distribution::gumbel(mean, sd), x) == doctest::Approx(expected).epsilon(1e-12));

  const auto ln = Distribution::lognormal(1, 0.1);
  const double zeta = std::sqrt(std::log(1.0 + 0.01));
  CHECK(equivalent_normal_std(ln, 1.0) == doctest::Approx(1.0 * zeta).epsilon(1e-10));
  CHECK(equivalent_normal_std(ln, 1.2) == doctest::Approx(1.2 * zeta).epsilon(1e-10));
}

TEST_CASE("standard-normal maps") {
  for (const auto& d : {Distribution::gumbel(2, 0.5), Distribution::lognormal(10, 3), Distribution::normal(-1, 2)}) {
    for (double u = -6.0; u <= 6.0; u += 0.5) CHECK(d.to_standard_normal(d.from_standard_normal(u)) == doctest::Approx(u).epsilon(1e-8));
    CHECK(d.from_standard_normal(1.1) == doctest::Approx(d.quantile(std_normal_cdf(1.1))).epsilon(1e-12));
  }
}

TEST_CASE("sampling") {
  Rng rng(11);
  const int n = 1000000;
  double s = 0;
  for (int k = 0; k < n; ++k) s += sample(Distribution::normal(0, 1), rng);
  CHECK(std::abs(s / n) < 0.004);

  // Gumbel moments: mean within 3 standard errors, variance within 3 of its
  // standard errors (fourth central moment of the Gumbel is 5.4 sigma^4).
  const auto g = Distribution::gumbel(2, 0.5);
  double s1 = 0, s2 = 0;
  for (int k = 0; k < n; ++k) {
    const double v = sample(g, rng);
    s1 += v;
    s2 += v * v;
  }
  const double m = s1 / n;
  const double var = s2 / n - m * m;
  CHECK(std::abs(m - 2.0) < 3 * 0.5 / std::sqrt(n));
  CHECK(std::abs(var - 0.25) < 3 * std::sqrt((5.4 - 1.0) * std::pow(0.5, 4) / n));

  Rng a(99), b(99);
  for (int k = 0; k < 100; ++k) CHECK(sample(g, a) == sample(g, b));
}

TEST_CASE("rng conversions") {
  Rng rng(5);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(rng.index(7) < 7);
  }
}
