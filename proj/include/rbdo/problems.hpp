#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbdo/problem.hpp"

namespace rbdo::problems {

enum class Math2DVariant { Normal, Gumbel, LogNormalNormal };

/// Constant sets for the welded beam. Rounded: beam length 335.56 mm, costs
/// 6.74e-5 and 2.94e-6. Imperial: beam length 355.6 mm (14 in) and the
/// unrounded cost coefficients 1.10471/25.4^3 and 0.04811/25.4^3.
enum class WeldedBeamPreset { Rounded, Imperial };

struct WeldedBeamConstants {
  double beam_length;  // p2 mean
  double weld_cost;    // c1
  double bar_cost;     // c2
};
WeldedBeamConstants welded_beam_constants(WeldedBeamPreset preset);

/// Crashworthiness of a vehicle side impact: 7 random thicknesses,
/// 4 random parameters, 10 probabilistic response limits.
ProblemDefinition vehicle_side_impact(double beta = 3.0);

/// Two-variable nonlinear problem with three probabilistic constraints.
ProblemDefinition math_2d(Math2DVariant variant = Math2DVariant::Normal, double beta = 3.0);

/// Speed reducer: 2 deterministic + 5 random design variables with
/// coefficient-of-variation spread, 15 random parameters, 10 probabilistic
/// and 1 deterministic constraint.
ProblemDefinition speed_reducer(double pf = 0.05);

/// Welded beam: 4 random design variables, 5 probabilistic constraints.
/// Continuous mode fixes the 7 physical parameters at their means; the
/// discrete mode snaps to catalogue sizes. `params_random` switches the
/// parameters to their lognormal/normal marginals. The beam length stays
/// at its mean unless `random_beam_length` is set.
ProblemDefinition welded_beam(bool discrete, bool params_random,
                              WeldedBeamPreset preset = WeldedBeamPreset::Rounded, double beta = 3.0,
                              bool random_beam_length = false);

struct BenchmarkOptions {
  std::optional<double> beta;
  std::optional<double> pf;
  Math2DVariant variant = Math2DVariant::Normal;
  WeldedBeamPreset preset = WeldedBeamPreset::Rounded;
  bool random_beam_length = false;  // welded-beam-discrete only
};

/// Registry ids: vehicle-side-impact, math-2d, speed-reducer,
/// welded-beam-continuous, welded-beam-discrete.
std::vector<std::string> benchmark_ids();
std::string benchmark_description(std::string_view id);
ProblemDefinition make_benchmark(std::string_view id, const BenchmarkOptions& options = {});

Math2DVariant parse_math2d_variant(std::string_view name);
WeldedBeamPreset parse_welded_preset(std::string_view name);
std::string_view to_string(Math2DVariant variant);
std::string_view to_string(WeldedBeamPreset preset);

} // namespace rbdo::problems
