#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rbdo/problem.hpp"

namespace rbdo {

enum class ReliabilityMethod { FORM, SORM_Breitung, MCS };

std::string_view to_string(ReliabilityMethod method);

struct ReliabilityReport {
  std::size_t constraint_index = 0;
  ReliabilityMethod method = ReliabilityMethod::FORM;
  double beta = 0.0;
  double pf = 0.0;
  /// Most probable point in standard-normal space, over the stochastic
  /// components only (random design variables first, then parameters).
  std::vector<double> mpp_u;
  std::vector<double> curvatures;  // SORM only
  std::size_t iterations = 0;      // FORM iterations
  std::size_t mcs_samples = 0;
  double mcs_stderr = 0.0;
  /// The design point lies outside the double-precision range of the normal
  /// quantile; pf is reported as 0.
  bool beyond_precision = false;
};

/// Random quantities of a fixed design: d values plus the marginals of the
/// random design variables (at the design means) and of the parameters.
struct DesignDistributions {
  std::vector<double> d;
  std::vector<Distribution> x;
  std::vector<Distribution> p;
};

DesignDistributions design_distributions(const ProblemDefinition& problem, std::span<const double> y);

/// Raised when the reliability-index iteration does not converge; carries
/// the last iterate.
class FormConvergenceError : public ConvergenceError {
public:
  FormConvergenceError(const std::string& what, std::vector<double> last_u)
      : ConvergenceError(what), last_u_(std::move(last_u)) {}
  const std::vector<double>& last_u() const noexcept { return last_u_; }

private:
  std::vector<double> last_u_;
};

struct FormOptions {
  double step_tolerance = 1e-8;
  double limit_tolerance = 1e-8;
  std::size_t max_iterations = 200;
  /// Iterates farther than this from the origin have Phi(-beta) == 0 in
  /// double precision; the search stops and reports beyond_precision.
  double beta_ceiling = 37.5;
};

/// Reliability index by the improved Hasofer-Lind / Rackwitz-Fiessler
/// iteration on G(u) = g(d, F_x^-1(Phi(u_x)), F_p^-1(Phi(u_p))), started at
/// the origin, with a merit-function step halving. Beta is negative when the
/// origin already lies in the failure domain. pf = Phi(-beta), except when
/// the design point has a coordinate with Phi(|u_j|) == 1 in double
/// precision: pf is then 0 and beyond_precision is set (beta is kept, or
/// infinite past beta_ceiling).
ReliabilityReport form_beta(const LimitState& g, const DesignDistributions& dists, const FormOptions& options = {});

/// Breitung correction pf = Phi(-beta) prod (1 + beta kappa_j)^-1/2 with the
/// principal curvatures kappa_j of G = 0 at the FORM point (central-difference
/// Hessian, step 1e-4, projected on the tangent plane). Beta is back-solved
/// from the corrected pf.
ReliabilityReport sorm_breitung(const ReliabilityReport& form, const LimitState& g, const DesignDistributions& dists);

/// Crude Monte Carlo estimate of P(g < 0) with n_samples draws (n >= 1000).
ReliabilityReport mcs_pf(const LimitState& g, const DesignDistributions& dists, std::size_t n_samples,
                         std::uint64_t seed);

/// Fraction of uniform samples of the design box lying in the reliable
/// design space (zero violation). `beta` overrides every constraint target.
double feasible_space_fraction(const ProblemDefinition& problem, std::size_t n_samples, std::uint64_t seed,
                               std::optional<double> beta = std::nullopt);

} // namespace rbdo
