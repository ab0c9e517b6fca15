#include <doctest.h>

#include <cmath>
#include <vector>

#include "rbdo/problems.hpp"
#include "rbdo/rds.hpp"

using namespace rbdo;
using namespace rbdo::problems;

namespace {

std::vector<double> values_at_mean(const ProblemDefinition& p, const std::vector<double>& y) {
  const std::vector<double> d(y.begin(), y.begin() + static_cast<long>(p.nd()));
  const std::vector<double> x(y.begin() + static_cast<long>(p.nd()), y.end());
  const auto q = p.param_means();
  std::vector<double> out;
  for (const auto& c : p.probabilistic) out.push_back(c.g({d, x, q}));
  for (const auto& c : p.deterministic) out.push_back(c.h({d, x, q}));
  return out;
}

// Second implementation of a few side-impact responses, written with one
// flat numbering z1..z7 = x, z8..z11 = p.
struct SideImpactOracle {
  double z[12];  // 1-based
  double abdomen() const { return 1.16 - 0.3717 * z[2] * z[4] - 0.00931 * z[2] * z[10] - 0.484 * z[3] * z[9] + 0.01343 * z[6] * z[11]; }
  double rib_low() const { return 46.36 - 9.9 * z[2] - 12.9 * z[1] * z[8] + 0.1107 * z[3] * z[10]; }
  double pubic() const {
    return 4.72 - 0.5 * z[4] - 0.19 * z[2] * z[3] - 0.0122 * z[4] * z[10] + 0.009325 * z[6] * z[10] +
           0.000191 * z[11] * z[11];
  }
  double door() const {
    return 16.45 - 0.489 * z[3] * z[7] - 0.843 * z[5] * z[6] + 0.0432 * z[9] * z[10] - 0.0556 * z[9] * z[11] -
           0.000786 * z[11] * z[11];
  }
  double weight() const {
    return 1.98 + 4.9 * z[1] + 6.67 * z[2] + 6.98 * z[3] + 4.01 * z[4] + 1.78 * z[5] + 2.73 * z[7];
  }
};

} // namespace

TEST_CASE("registry") {
  const auto ids = benchmark_ids();
  CHECK(ids.size() == 5);
  for (const auto& id : ids) {
    const auto p = make_benchmark(id);
    CHECK_NOTHROW(p.validate());
    CHECK(p.name == id);
    CHECK_FALSE(benchmark_description(id).empty());
  }
  CHECK_THROWS_AS(make_benchmark("rosenbrock"), ConfigError);
  BenchmarkOptions both;
  both.beta = 3;
  both.pf = 0.01;
  CHECK_THROWS_AS(make_benchmark("math-2d", both), ConfigError);
  CHECK(parse_math2d_variant("lognormal-normal") == Math2DVariant::LogNormalNormal);
  CHECK(parse_welded_preset("imperial") == WeldedBeamPreset::Imperial);
  CHECK_THROWS_AS(parse_welded_preset("metric"), ConfigError);

  BenchmarkOptions pf;
  pf.pf = 0.05;
  const auto sr = make_benchmark("speed-reducer", pf);
  CHECK(sr.probabilistic[0].target_pf == doctest::Approx(0.05));
  BenchmarkOptions beta;
  beta.beta = 2.0;
  CHECK(make_benchmark("math-2d", beta).probabilistic[1].target_pf == doctest::Approx(std_normal_cdf(-2.0)));
}

TEST_CASE("rosters") {
  const auto side = vehicle_side_impact();
  CHECK(side.nx() == 7);
  CHECK(side.np() == 4);
  CHECK(side.probabilistic.size() == 10);
  const auto sr = speed_reducer();
  CHECK(sr.nd() == 2);
  CHECK(sr.nx() == 5);
  CHECK(sr.np() == 15);
  CHECK(sr.deterministic.size() == 1);
  const auto wb = welded_beam(true, true);
  CHECK(wb.nx() == 4);
  CHECK(wb.np() == 7);
  CHECK(wb.discrete_sets()[3].size() == 16);
  CHECK(wb.params[0].dist.family() == Family::LogNormal);
  CHECK(wb.params[1].dist.family() == Family::Deterministic);
  CHECK(welded_beam(true, true, WeldedBeamPreset::Rounded, 3.0, true).params[1].dist.family() == Family::Normal);
  CHECK(welded_beam(false, false).params[0].dist.family() == Family::Deterministic);
  CHECK(math_2d(Math2DVariant::LogNormalNormal).random_vars[0].family == Family::LogNormal);
  CHECK(math_2d(Math2DVariant::Gumbel).random_vars[1].family == Family::Gumbel);
}

TEST_CASE("side impact against an independent evaluator") {
  const auto p = vehicle_side_impact();
  Rng rng(5);
  const auto box = p.box();
  for (int k = 0; k < 200; ++k) {
    SideImpactOracle o{};
    std::vector<double> x(7), q(4);
    for (int j = 0; j < 7; ++j) x[j] = o.z[j + 1] = rng.uniform(box.lower[j], box.upper[j]);
    q = {rng.uniform(0.3, 0.4), rng.uniform(0.15, 0.25), rng.uniform(-30, 30), rng.uniform(-30, 30)};
    for (int j = 0; j < 4; ++j) o.z[j + 8] = q[j];
    const Realization r{{}, x, q};
    CHECK(p.objective(r) == doctest::Approx(o.weight()).epsilon(1e-13));
    CHECK(p.probabilistic[0].g(r) == doctest::Approx(1.01 - o.abdomen()).epsilon(1e-12));
    CHECK(p.probabilistic[1].g(r) == doctest::Approx(32.0 - o.rib_low()).epsilon(1e-12));
    CHECK(p.probabilistic[7].g(r) == doctest::Approx(4.0 - o.pubic()).epsilon(1e-12));
    CHECK(p.probabilistic[9].g(r) == doctest::Approx(15.69 - o.door()).epsilon(1e-12));
  }

  std::vector<double> lower = box.lower;
  CHECK(p.evaluate_objective(lower) == doctest::Approx(15.576).epsilon(1e-12));
  auto bumped = lower;
  bumped[5] += 0.3;
  CHECK(p.evaluate_objective(bumped) == p.evaluate_objective(lower));

  const std::vector<double> best{0.8008490, 1.35, 0.7133922, 1.5, 0.875, 1.2, 0.4};
  CHECK(p.evaluate_objective(best) == doctest::Approx(28.552637656).epsilon(1e-9));
  CHECK(1.01 - values_at_mean(p, best)[0] == doctest::Approx(0.3410134).epsilon(1e-6));
}

TEST_CASE("two-variable problem") {
  const auto p = math_2d();
  const std::vector<double> y{3.4405576, 3.2799744};
  CHECK(p.evaluate_objective(y) == doctest::Approx(6.720532));
  const auto g = values_at_mean(p, y);
  const double a = y[0] + y[1] - 5, b = y[0] - y[1] - 12;
  CHECK(g[0] == doctest::Approx(y[0] * y[0] * y[1] / 20 - 1));
  CHECK(g[1] == doctest::Approx(a * a / 30 + b * b / 120 - 1));
  CHECK(g[2] == doctest::Approx(80 / (y[0] * y[0] + 8 * y[1] + 5) - 1));
}

TEST_CASE("speed reducer reproduces the published constraint values") {
  const auto p = speed_reducer();
  const std::vector<double> y{0.7, 17, 3.860190, 7, 7, 2.932511, 5};
  CHECK(p.evaluate_objective(y) == doctest::Approx(2856.5467).epsilon(1e-7));
  const double expected[] = {0.1603, 0.2728, 0.2478, 0.9110, 0.2548, 0.4091, 0.5467, 0.7748, 0.5501, 0.4714};
  const auto g = values_at_mean(p, y);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(g[i] - expected[i]) < 1e-4);
  CHECK(std::abs(-g[10] - 0.8513) < 1e-4);
}

TEST_CASE("welded beam") {
  const auto p = welded_beam(true, true);
  const std::vector<double> y{6, 233, 232, 7};
  const auto g = values_at_mean(p, y);
  const double expected[] = {0.3118, 0.3107, 0.1429, 0.9649, 0.6843};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(g[i] - expected[i]) < 1e-4);
  CHECK(g[2] == doctest::Approx(1.0 - 6.0 / 7.0));
  CHECK(p.evaluate_objective(y) == doctest::Approx(3.27997).epsilon(1e-5));

  const auto c = welded_beam(false, false, WeldedBeamPreset::Imperial);
  CHECK(c.evaluate_objective(std::vector<double>{5.730402, 200.8925, 210.5900, 6.239425}) ==
        doctest::Approx(2.59144).epsilon(1e-5));
  const auto k = welded_beam_constants(WeldedBeamPreset::Rounded);
  CHECK(k.beam_length == 335.56);
  CHECK(k.weld_cost == 6.74e-5);
}

TEST_CASE("speed reducer against an independent evaluator") {
  const auto p = speed_reducer();
  Rng rng(8);
  const auto box = p.box();
  for (int k = 0; k < 5; ++k) {
    std::vector<double> y(7);
    for (std::size_t j = 0; j < 7; ++j) y[j] = rng.uniform(box.lower[j], box.upper[j]);
    const double m = y[0], z = y[1], b = y[2], l1 = y[3], l2 = y[4], s1 = y[5], s2 = y[6];
    const auto q = p.param_means();
    const std::vector<double> d(y.begin(), y.begin() + 2), x(y.begin() + 2, y.end());
    const Realization r{d, x, q};
    const double f = 0.7854 * b * m * m * (3.3333 * z * z + 14.9334 * z - 43.0934) - 1.5079 * b * (s1 * s1 + s2 * s2) +
                     7.477 * (s1 * s1 * s1 + s2 * s2 * s2) + 0.7854 * (l1 * s1 * s1 + l2 * s2 * s2);
    CHECK(p.objective(r) == doctest::Approx(f).epsilon(1e-12));
    CHECK(p.probabilistic[0].g(r) == doctest::Approx(1 - 27.0 / (b * m * m * z)).epsilon(1e-12));
    CHECK(p.probabilistic[1].g(r) == doctest::Approx(1 - 397.5 / (b * m * m * z * z)).epsilon(1e-12));
    const double load = 745.0 * l1 / (m * z);
    CHECK(p.probabilistic[4].g(r) ==
          doctest::Approx(1 - std::sqrt(load * load + 1.69e7) / (2 * 1100.0 * 0.1 * s1 * s1 * s1)).epsilon(1e-12));
    CHECK(p.probabilistic[8].g(r) == doctest::Approx(1 - (1.5 * s1 + 1.9) / (2 * l1)).epsilon(1e-12));
  }
}

TEST_CASE("welded beam against an independent evaluator") {
  const auto p = welded_beam(false, false);
  const auto q = p.param_means();
  Rng rng(13);
  for (int k = 0; k < 5; ++k) {
    const std::vector<double> x{rng.uniform(4, 12), rng.uniform(50, 250), rng.uniform(100, 250), rng.uniform(5, 25)};
    const Realization r{{}, x, q};
    const double P = 26680, L = 335.56, E = 206850, G = 82740;
    const double t1 = P / (std::sqrt(2.0) * x[0] * x[1]);
    const double R = std::sqrt(x[1] * x[1] / 4 + (x[0] + x[2]) * (x[0] + x[2]) / 4);
    const double J = std::sqrt(2.0) * x[0] * x[1] * (x[1] * x[1] / 12 + (x[0] + x[2]) * (x[0] + x[2]) / 4);
    const double t2 = P * (L + x[1] / 2) * R / J;
    const double tau = std::sqrt(t1 * t1 + t1 * t2 * x[1] / R + t2 * t2);
    CHECK(p.probabilistic[0].g(r) == doctest::Approx(1 - tau / 93.77).epsilon(1e-12));
    CHECK(p.probabilistic[1].g(r) == doctest::Approx(1 - 6 * P * L / (x[3] * x[2] * x[2]) / 206.85).epsilon(1e-12));
    const double delta = 4 * P * L * L * L / (E * x[3] * x[2] * x[2] * x[2]);
    CHECK(p.probabilistic[3].g(r) == doctest::Approx(1 - delta / 6.35).epsilon(1e-12));
    const double pc = 4.013 * x[2] * std::pow(x[3], 3) * std::sqrt(E * G) / (6 * L * L) *
                      (1 - x[2] / (4 * L) * std::sqrt(E / G));
    CHECK(p.probabilistic[4].g(r) == doctest::Approx(pc / P - 1).epsilon(1e-12));
    CHECK(p.objective(r) == doctest::Approx(6.74e-5 * x[0] * x[0] * x[1] + 2.94e-6 * x[2] * x[3] * (L + x[1])));
  }
}
