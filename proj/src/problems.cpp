#include "rbdo/problems.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rbdo/rds.hpp"

namespace rbdo::problems {

namespace {

void expect_counts(const ProblemDefinition& p, std::size_t nd, std::size_t nx, std::size_t np,
                   std::size_t n_prob, std::size_t n_det) {
  if (p.nd() != nd || p.nx() != nx || p.np() != np || p.probabilistic.size() != n_prob ||
      p.deterministic.size() != n_det)
    throw std::logic_error("benchmark '" + p.name + "' does not match its variable/constraint roster");
}

void add_limit(ProblemDefinition& p, std::string name, LimitState g, double pf) {
  p.probabilistic.push_back({std::move(name), std::move(g), pf});
}

std::vector<double> integer_range(int lo, int hi) {
  std::vector<double> v(static_cast<std::size_t>(hi - lo + 1));
  std::iota(v.begin(), v.end(), static_cast<double>(lo));
  return v;
}

} // namespace

// ---------------------------------------------------------------------------
// Vehicle side impact

ProblemDefinition vehicle_side_impact(double beta) {
  ProblemDefinition p;
  p.name = "vehicle-side-impact";
  const double pf = std_normal_cdf(-beta);

  struct Thickness { const char* name; double lo, hi, sd; };
  constexpr Thickness xs[] = {
      {"b_pillar_inner", 0.5, 1.5, 0.03},   {"b_pillar_reinforcement", 0.45, 1.35, 0.03},
      {"floor_side_inner", 0.5, 1.5, 0.03}, {"cross_member", 0.5, 1.5, 0.03},
      {"door_beam", 0.875, 2.625, 0.05},    {"door_belt_line", 0.4, 1.2, 0.03},
      {"roof_rail", 0.4, 1.2, 0.03},
  };
  for (const auto& x : xs) p.random_vars.push_back({x.name, Family::Normal, x.lo, x.hi, x.sd, {}, {}});
  p.params = {
      {"b_pillar_material", Distribution::normal(0.345, 0.006)},
      {"floor_side_material", Distribution::normal(0.192, 0.006)},
      {"barrier_height", Distribution::normal(0.0, 10.0)},
      {"barrier_position", Distribution::normal(0.0, 10.0)},
  };

  p.objective = [](const Realization& r) {
    const auto& x = r.x;
    return 1.98 + 4.90 * x[0] + 6.67 * x[1] + 6.98 * x[2] + 4.01 * x[3] + 1.78 * x[4] + 2.73 * x[6];
  };

  // Responses must stay below their limits; g = limit - response.
  add_limit(p, "abdomen_load", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    const double f_al = 1.16 - 0.3717 * x[1] * x[3] - 0.00931 * x[1] * q[2] - 0.484 * x[2] * q[1] +
                        0.01343 * x[5] * q[3];
    return 1.01 - f_al;
  }, pf);
  add_limit(p, "rib_deflection_low", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 32.0 - (46.36 - 9.9 * x[1] - 12.9 * x[0] * q[0] + 0.1107 * x[2] * q[2]);
  }, pf);
  add_limit(p, "rib_deflection_middle", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 32.0 - (33.86 + 2.95 * x[2] + 0.1792 * q[2] - 5.057 * x[0] * x[1] - 11.0 * x[1] * q[0] -
                   0.0215 * x[4] * q[2] - 9.98 * x[6] * q[0] + 22.0 * q[0] * q[1]);
  }, pf);
  add_limit(p, "rib_deflection_up", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 32.0 - (28.98 + 3.818 * x[2] - 4.2 * x[0] * x[1] + 0.0207 * x[4] * q[2] + 6.63 * x[5] * q[1] -
                   7.7 * x[6] * q[0] + 0.32 * q[1] * q[2]);
  }, pf);
  add_limit(p, "viscous_criterion_low", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 0.32 - (0.74 - 0.61 * x[1] - 0.163 * x[2] * q[0] + 0.001232 * x[2] * q[2] - 0.166 * x[6] * q[1] +
                   0.227 * x[1] * x[1]);
  }, pf);
  add_limit(p, "viscous_criterion_middle", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 0.32 - (0.214 + 0.00817 * x[4] - 0.131 * x[0] * q[0] - 0.0704 * x[0] * q[1] + 0.03099 * x[1] * x[5] -
                   0.018 * x[1] * x[6] + 0.0208 * x[2] * q[0] + 0.121 * x[2] * q[1] - 0.00364 * x[4] * x[5] +
                   0.0007715 * x[4] * q[2] - 0.0005354 * x[5] * q[2] + 0.00121 * q[0] * q[3]);
  }, pf);
  add_limit(p, "viscous_criterion_up", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 0.32 - (0.261 - 0.0159 * x[0] * x[1] - 0.188 * x[0] * q[0] - 0.019 * x[1] * x[6] +
                   0.0144 * x[2] * x[4] + 0.0008757 * x[4] * q[2] + 0.08045 * x[5] * q[1] +
                   0.00139 * q[0] * q[3] + 0.00001575 * q[2] * q[3]);
  }, pf);
  add_limit(p, "pubic_symphysis_force", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 4.0 - (4.72 - 0.5 * x[3] - 0.19 * x[1] * x[2] - 0.0122 * x[3] * q[2] + 0.009325 * x[5] * q[2] +
                  0.000191 * q[3] * q[3]);
  }, pf);
  // B-pillar velocity limit is 9.9 m/s.
  add_limit(p, "b_pillar_velocity", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 9.9 - (10.58 - 0.674 * x[0] * x[1] - 1.95 * x[1] * q[0] + 0.02054 * x[2] * q[2] -
                  0.0198 * x[3] * q[2] + 0.028 * x[5] * q[2]);
  }, pf);
  add_limit(p, "door_velocity", [](const Realization& r) {
    const auto& x = r.x; const auto& q = r.p;
    return 15.69 - (16.45 - 0.489 * x[2] * x[6] - 0.843 * x[4] * x[5] + 0.0432 * q[1] * q[2] -
                    0.0556 * q[1] * q[3] - 0.000786 * q[3] * q[3]);
  }, pf);

  expect_counts(p, 0, 7, 4, 10, 0);
  return p;
}

// ---------------------------------------------------------------------------
// Two-variable mathematical problem

ProblemDefinition math_2d(Math2DVariant variant, double beta) {
  ProblemDefinition p;
  p.name = "math-2d";
  const double pf = std_normal_cdf(-beta);
  Family f1 = Family::Normal, f2 = Family::Normal;
  if (variant == Math2DVariant::Gumbel) f1 = f2 = Family::Gumbel;
  if (variant == Math2DVariant::LogNormalNormal) f1 = Family::LogNormal;
  p.random_vars = {
      {"x1", f1, 0.1, 10.0, 0.3, {}, {}},
      {"x2", f2, 0.1, 10.0, 0.3, {}, {}},
  };
  p.objective = [](const Realization& r) { return r.x[0] + r.x[1]; };
  add_limit(p, "g1", [](const Realization& r) {
    return r.x[0] * r.x[0] * r.x[1] / 20.0 - 1.0;
  }, pf);
  add_limit(p, "g2", [](const Realization& r) {
    const double a = r.x[0] + r.x[1] - 5.0;
    const double b = r.x[0] - r.x[1] - 12.0;
    return a * a / 30.0 + b * b / 120.0 - 1.0;
  }, pf);
  add_limit(p, "g3", [](const Realization& r) {
    return 80.0 / (r.x[0] * r.x[0] + 8.0 * r.x[1] + 5.0) - 1.0;
  }, pf);
  expect_counts(p, 0, 2, 0, 3, 0);
  return p;
}

// ---------------------------------------------------------------------------
// Speed reducer

ProblemDefinition speed_reducer(double pf) {
  ProblemDefinition p;
  p.name = "speed-reducer";
  p.deterministic_vars = {
      {"module", 0.7, 0.8, {}},
      {"teeth", 17.0, 28.0, {}},
  };
  struct Shaft { const char* name; double lo, hi, cov; };
  constexpr Shaft xs[] = {
      {"face_width", 2.6, 4.2, 0.05}, {"shaft1_length", 7.0, 8.3, 0.05}, {"shaft2_length", 7.0, 9.3, 0.05},
      {"shaft1_diameter", 2.9, 3.95, 0.02}, {"shaft2_diameter", 5.0, 6.0, 0.02},
  };
  for (const auto& x : xs) p.random_vars.push_back({x.name, Family::Normal, x.lo, x.hi, 0.0, x.cov, {}});

  // p9 kept unrounded at 157.5e6.
  constexpr double kP9 = 1.575e8;
  const double means[15] = {27.0, 397.5, 1.93, 1.93, 1100.0, 745.0, 1.69e7, 0.1, kP9, 850.0, 5.0, 12.0, 1.5, 1.1, 1.9};
  const double sds[15] = {2.7, 39.8, 0.0965, 0.0965, 110.0, 74.5, 1.69e6, 0.005, kP9 / 10.0, 34.0, 0.25, 0.6, 0.75, 0.11, 0.19};
  for (int k = 0; k < 15; ++k)
    p.params.push_back({"p" + std::to_string(k + 1), Distribution::normal(means[k], sds[k])});

  p.objective = [](const Realization& r) {
    const double d1 = r.d[0], d2 = r.d[1];
    const auto& x = r.x;
    return 0.7854 * x[0] * d1 * d1 * (3.3333 * d2 * d2 + 14.9334 * d2 - 43.0934) -
           1.5079 * x[0] * (x[3] * x[3] + x[4] * x[4]) + 7.477 * (std::pow(x[3], 3) + std::pow(x[4], 3)) +
           0.7854 * (x[1] * x[3] * x[3] + x[2] * x[4] * x[4]);
  };

  // Parameter indices below are zero-based (q[0] is p1).
  add_limit(p, "bending_stress", [](const Realization& r) {
    return 1.0 - r.p[0] / (r.x[0] * r.d[0] * r.d[0] * r.d[1]);
  }, pf);
  add_limit(p, "contact_stress", [](const Realization& r) {
    return 1.0 - r.p[1] / (r.x[0] * r.d[0] * r.d[0] * r.d[1] * r.d[1]);
  }, pf);
  add_limit(p, "shaft1_deflection", [](const Realization& r) {
    return 1.0 - r.p[2] * std::pow(r.x[1], 3) / (std::pow(r.x[3], 4) * r.d[0] * r.d[1]);
  }, pf);
  add_limit(p, "shaft2_deflection", [](const Realization& r) {
    return 1.0 - r.p[3] * std::pow(r.x[2], 3) / (std::pow(r.x[4], 4) * r.d[0] * r.d[1]);
  }, pf);
  add_limit(p, "shaft1_stress", [](const Realization& r) {
    const double a = r.p[5] * r.x[1] / (r.d[0] * r.d[1]);
    return 1.0 - 0.5 * std::sqrt(a * a + r.p[6]) / (std::pow(r.x[3], 3) * r.p[4] * r.p[7]);
  }, pf);
  add_limit(p, "shaft2_stress", [](const Realization& r) {
    const double a = r.p[5] * r.x[2] / (r.d[0] * r.d[1]);
    return 1.0 - 0.5 * std::sqrt(a * a + r.p[8]) / (std::pow(r.x[4], 3) * r.p[9] * r.p[7]);
  }, pf);
  add_limit(p, "face_width_min", [](const Realization& r) {
    return 1.0 - 0.5 * r.p[10] * r.d[0] / r.x[0];
  }, pf);
  add_limit(p, "face_width_max", [](const Realization& r) {
    return 1.0 - r.x[0] * r.d[0] / r.p[11];
  }, pf);
  add_limit(p, "shaft1_design", [](const Realization& r) {
    return 1.0 - (r.p[12] * r.x[3] + r.p[14]) / (2.0 * r.x[1]);
  }, pf);
  add_limit(p, "shaft2_design", [](const Realization& r) {
    return 1.0 - (r.p[13] * r.x[4] + r.p[14]) / (2.0 * r.x[2]);
  }, pf);
  // g11 = 1 - d1 d2 / 80 >= 0, stored as h = d1 d2 / 80 - 1 <= 0.
  p.deterministic.push_back({"pinion_size", [](const Realization& r) { return r.d[0] * r.d[1] / 80.0 - 1.0; }});

  expect_counts(p, 2, 5, 15, 10, 1);
  return p;
}

// ---------------------------------------------------------------------------
// Welded beam

WeldedBeamConstants welded_beam_constants(WeldedBeamPreset preset) {
  if (preset == WeldedBeamPreset::Imperial) {
    constexpr double in3 = 25.4 * 25.4 * 25.4;
    return {355.6, 1.10471 / in3, 0.04811 / in3};
  }
  return {335.56, 6.74e-5, 2.94e-6};
}

namespace {

// x = (weld height, weld length, bar height, bar thickness);
// q = (load, length, E, G, max deflection, max shear, max normal stress).
double weld_shear_stress(std::span<const double> x, std::span<const double> q) {
  const double t1 = q[0] / (std::numbers::sqrt2 * x[0] * x[1]);
  const double moment = q[0] * (q[1] + 0.5 * x[1]);
  const double s = x[0] + x[2];
  const double radius = 0.5 * std::sqrt(x[1] * x[1] + s * s);
  const double polar = std::numbers::sqrt2 * x[0] * x[1] * (x[1] * x[1] / 12.0 + s * s / 4.0);
  const double t2 = moment * radius / polar;
  return std::sqrt(t1 * t1 + 2.0 * t1 * t2 * x[1] / (2.0 * radius) + t2 * t2);
}

double bar_bending_stress(std::span<const double> x, std::span<const double> q) {
  return 6.0 * q[0] * q[1] / (x[2] * x[2] * x[3]);
}

double bar_deflection(std::span<const double> x, std::span<const double> q) {
  return 4.0 * q[0] * std::pow(q[1], 3) / (q[2] * std::pow(x[2], 3) * x[3]);
}

double buckling_load(std::span<const double> x, std::span<const double> q) {
  return 4.013 * x[2] * std::pow(x[3], 3) * std::sqrt(q[2] * q[3]) / (6.0 * q[1] * q[1]) *
         (1.0 - x[2] / (4.0 * q[1]) * std::sqrt(q[2] / q[3]));
}

} // namespace

ProblemDefinition welded_beam(bool discrete, bool params_random, WeldedBeamPreset preset, double beta,
                              bool random_beam_length) {
  ProblemDefinition p;
  p.name = discrete ? "welded-beam-discrete" : "welded-beam-continuous";
  const double pf = std_normal_cdf(-beta);
  const auto c = welded_beam_constants(preset);

  if (discrete) {
    p.random_vars = {
        {"weld_height", Family::Normal, 3.0, 50.0, 0.1693, {}, integer_range(3, 50)},
        {"weld_length", Family::Normal, 1.0, 254.0, 0.1693, {}, integer_range(1, 254)},
        {"bar_height", Family::Normal, 1.0, 254.0, 0.0107, {}, integer_range(1, 254)},
        {"bar_thickness", Family::Normal, 2.0, 25.0, 0.0107, {},
         {2, 3, 4, 5, 6, 7, 8, 10, 12, 14, 15, 16, 18, 20, 22, 25}},
    };
  } else {
    p.random_vars = {
        {"weld_height", Family::Normal, 3.175, 50.8, 0.1693, {}, {}},
        {"weld_length", Family::Normal, 0.0, 254.0, 0.1693, {}, {}},
        {"bar_height", Family::Normal, 0.0, 254.0, 0.0107, {}, {}},
        {"bar_thickness", Family::Normal, 0.0, 50.8, 0.0107, {}, {}},
    };
  }

  struct Param { const char* name; double mean, cov; Family family; };
  const Param table[] = {
      {"load", 26680.0, 0.10, Family::LogNormal},
      {"beam_length", c.beam_length, 0.05, Family::Normal},
      {"young_modulus", 206850.0, 0.03, Family::LogNormal},
      {"shear_modulus", 82740.0, 0.03, Family::LogNormal},
      {"max_deflection", 6.35, 0.05, Family::Normal},
      {"max_shear_stress", 93.77, 0.07, Family::LogNormal},
      {"max_normal_stress", 206.85, 0.07, Family::LogNormal},
  };
  for (const auto& q : table) {
    const bool random = params_random && (random_beam_length || std::string_view(q.name) != "beam_length");
    p.params.push_back({q.name, random ? Distribution(q.family, q.mean, q.cov * q.mean)
                                       : Distribution::deterministic(q.mean)});
  }

  p.objective = [weld = c.weld_cost, bar = c.bar_cost](const Realization& r) {
    const auto& x = r.x;
    return weld * x[0] * x[0] * x[1] + bar * x[2] * x[3] * (r.p[1] + x[1]);
  };
  add_limit(p, "shear_stress", [](const Realization& r) { return 1.0 - weld_shear_stress(r.x, r.p) / r.p[5]; }, pf);
  add_limit(p, "bending_stress", [](const Realization& r) { return 1.0 - bar_bending_stress(r.x, r.p) / r.p[6]; }, pf);
  add_limit(p, "geometry", [](const Realization& r) { return 1.0 - r.x[0] / r.x[3]; }, pf);
  add_limit(p, "deflection", [](const Realization& r) { return 1.0 - bar_deflection(r.x, r.p) / r.p[4]; }, pf);
  add_limit(p, "buckling", [](const Realization& r) { return buckling_load(r.x, r.p) / r.p[0] - 1.0; }, pf);

  expect_counts(p, 0, 4, 7, 5, 0);
  return p;
}

// ---------------------------------------------------------------------------
// Registry

std::vector<std::string> benchmark_ids() {
  return {"vehicle-side-impact", "math-2d", "speed-reducer", "welded-beam-continuous", "welded-beam-discrete"};
}

std::string benchmark_description(std::string_view id) {
  if (id == "vehicle-side-impact") return "vehicle side impact crashworthiness (7 x, 4 p, 10 limit states)";
  if (id == "math-2d") return "two-variable nonlinear problem (variants: normal, gumbel, lognormal-normal)";
  if (id == "speed-reducer") return "speed reducer with varying variance (2 d, 5 x, 15 p, 10+1 constraints)";
  if (id == "welded-beam-continuous") return "welded beam, continuous sizes, parameters at their means";
  if (id == "welded-beam-discrete") return "welded beam, catalogue sizes, random physical parameters";
  throw ConfigError("unknown benchmark '" + std::string(id) + "'");
}

ProblemDefinition make_benchmark(std::string_view id, const BenchmarkOptions& options) {
  if (options.beta && options.pf) throw ConfigError("specify either beta or pf, not both");
  auto beta_or = [&](double fallback) {
    if (options.pf) return target_beta(*options.pf);
    return options.beta.value_or(fallback);
  };
  if (id == "vehicle-side-impact") return vehicle_side_impact(beta_or(3.0));
  if (id == "math-2d") return math_2d(options.variant, beta_or(3.0));
  if (id == "speed-reducer") {
    if (options.beta) return speed_reducer(std_normal_cdf(-*options.beta));
    return speed_reducer(options.pf.value_or(0.05));
  }
  if (id == "welded-beam-continuous") return welded_beam(false, false, options.preset, beta_or(3.0));
  if (id == "welded-beam-discrete") return welded_beam(true, true, options.preset, beta_or(3.0), options.random_beam_length);
  throw ConfigError("unknown benchmark '" + std::string(id) + "'");
}

Math2DVariant parse_math2d_variant(std::string_view name) {
  if (name == "normal") return Math2DVariant::Normal;
  if (name == "gumbel") return Math2DVariant::Gumbel;
  if (name == "lognormal-normal") return Math2DVariant::LogNormalNormal;
  throw ConfigError("unknown math-2d variant '" + std::string(name) + "'");
}

WeldedBeamPreset parse_welded_preset(std::string_view name) {
  if (name == "rounded") return WeldedBeamPreset::Rounded;
  if (name == "imperial") return WeldedBeamPreset::Imperial;
  throw ConfigError("unknown welded-beam preset '" + std::string(name) + "'");
}

std::string_view to_string(Math2DVariant variant) {
  switch (variant) {
  case Math2DVariant::Normal: return "normal";
  case Math2DVariant::Gumbel: return "gumbel";
  case Math2DVariant::LogNormalNormal: return "lognormal-normal";
  }
  return "normal";
}

std::string_view to_string(WeldedBeamPreset preset) {
  return preset == WeldedBeamPreset::Rounded ? "rounded" : "imperial";
}

} // namespace rbdo::problems
