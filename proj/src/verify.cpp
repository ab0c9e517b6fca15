#include "rbdo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "rbdo/errors.hpp"
#include "rbdo/rds.hpp"

namespace rbdo {

std::string_view to_string(ReliabilityMethod method) {
  switch (method) {
    case ReliabilityMethod::FORM: return "FORM";
    case ReliabilityMethod::SORM_Breitung: return "SORM";
    case ReliabilityMethod::MCS: return "MCS";
  }
  return "?";
}

DesignDistributions design_distributions(const ProblemDefinition& problem, std::span<const double> y) {
  if (y.size() != problem.dimension()) throw DomainError("design vector has the wrong length");
  DesignDistributions out;
  out.d.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(problem.nd()));
  out.x = problem.random_var_dists(y);
  out.p.reserve(problem.np());
  for (const auto& prm : problem.params) out.p.push_back(prm.dist);
  return out;
}

namespace {

bool is_stochastic(const Distribution& dist) {
  return dist.family() != Family::Deterministic && dist.std() > 0.0;
}

/// g expressed on the standard-normal coordinates of the stochastic
/// components; everything else sits at its mean.
class StandardSpaceLimitState {
public:
  StandardSpaceLimitState(const LimitState& g, const DesignDistributions& dists) : g_(g), dists_(dists) {
    x_.resize(dists.x.size());
    p_.resize(dists.p.size());
    for (std::size_t j = 0; j < dists.x.size(); ++j) {
      x_[j] = dists.x[j].mean();
      if (is_stochastic(dists.x[j])) slots_.push_back({false, j});
    }
    for (std::size_t j = 0; j < dists.p.size(); ++j) {
      p_[j] = dists.p[j].mean();
      if (is_stochastic(dists.p[j])) slots_.push_back({true, j});
    }
  }

  std::size_t dimension() const noexcept { return slots_.size(); }


  double operator()(const Eigen::VectorXd& u) {
    for (std::size_t k = 0; k < slots_.size(); ++k) {
      const auto [is_param, j] = slots_[k];
      const auto ui = static_cast<Eigen::Index>(k);
      if (is_param)
        p_[j] = dists_.p[j].from_standard_normal(u[ui]);
      else
        x_[j] = dists_.x[j].from_standard_normal(u[ui]);
    }
    return g_(Realization{dists_.d, x_, p_});
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& u) {
    Eigen::VectorXd grad(u.size());
    Eigen::VectorXd v = u;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(u[k]));
      v[k] = u[k] + h;
      const double gp = (*this)(v);
      v[k] = u[k] - h;
      const double gm = (*this)(v);
      v[k] = u[k];
      grad[k] = (gp - gm) / (2.0 * h);
    }
    return grad;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& u, double h) {
    const Eigen::Index n = u.size();
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd v = u;
    const double g0 = (*this)(u);
    for (Eigen::Index i = 0; i < n; ++i) {
      v[i] = u[i] + h;
      const double gp = (*this)(v);
      v[i] = u[i] - h;
      const double gm = (*this)(v);
      v[i] = u[i];
      hess(i, i) = (gp - 2.0 * g0 + gm) / (h * h);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (const auto& [si, sj] : {std::pair{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}) {
          v[i] = u[i] + si * h;
          v[j] = u[j] + sj * h;
          s += si * sj * (*this)(v);
        }
        v[i] = u[i];
        v[j] = u[j];
        hess(i, j) = hess(j, i) = s / (4.0 * h * h);
      }
    }
    return hess;
  }

private:
  struct Slot {
    bool is_param;
    std::size_t index;
  };
  const LimitState& g_;
  const DesignDistributions& dists_;
  std::vector<Slot> slots_;
  std::vector<double> x_;
  std::vector<double> p_;
};

std::vector<double> to_std(const Eigen::VectorXd& u) { return {u.data(), u.data() + u.size()}; }

} // namespace

ReliabilityReport form_beta(const LimitState& g, const DesignDistributions& dists, const FormOptions& options) {
  StandardSpaceLimitState G(g, dists);
  const auto n = static_cast<Eigen::Index>(G.dimension());
  ReliabilityReport report;
  report.method = ReliabilityMethod::FORM;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  const double g_origin = G(u);
  if (!std::isfinite(g_origin)) throw DomainError("limit state is not finite at the mean point");
  if (n == 0) {
    // Nothing random: the outcome is certain.
    report.beta = g_origin >= 0.0 ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
    report.pf = g_origin >= 0.0 ? 0.0 : 1.0;
    report.beyond_precision = true;
    return report;
  }
  const double g_tol = options.limit_tolerance * (1.0 + std::abs(g_origin));

  double g_u = g_origin;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd grad = G.gradient(u);
    const double grad_norm2 = grad.squaredNorm();
    if (!(grad_norm2 > 0.0) || !std::isfinite(grad_norm2))
      throw FormConvergenceError("limit-state gradient vanished during the reliability search", to_std(u));

    const Eigen::VectorXd target = ((grad.dot(u) - g_u) / grad_norm2) * grad;
    const Eigen::VectorXd dir = target - u;
    const double grad_norm = std::sqrt(grad_norm2);
    const double c = 2.0 * std::max(u.norm() / grad_norm, target.norm() / grad_norm) + 1.0;
    auto merit = [c](const Eigen::VectorXd& v, double gv) { return 0.5 * v.squaredNorm() + c * std::abs(gv); };
    const double m0 = merit(u, g_u);

    double step = 1.0;
    Eigen::VectorXd u_new = u + dir;
    double g_new = G(u_new);
    for (int halving = 0; halving < 30; ++halving) {
      if (std::isfinite(g_new) && merit(u_new, g_new) < m0) break;
      step *= 0.5;
      u_new = u + step * dir;
      g_new = G(u_new);
    }
    if (!std::isfinite(g_new))
      throw FormConvergenceError("limit state became non-finite during the reliability search", to_std(u));

    const double du = (u_new - u).norm();
    u = u_new;
    g_u = g_new;
    report.iterations = it;

    const bool converged = du <= options.step_tolerance * std::max(1.0, u.norm()) && std::abs(g_u) <= g_tol;
    if (u.norm() > options.beta_ceiling) {
      report.beta = g_origin >= 0.0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
      report.pf = g_origin >= 0.0 ? 0.0 : 1.0;
      report.beyond_precision = true;
      report.mpp_u = to_std(u);
      return report;
    }
    if (converged) {
      const double beta = u.norm();
      report.beta = g_origin >= 0.0 ? beta : -beta;
      report.pf = std_normal_cdf(-report.beta);
      report.mpp_u = to_std(u);
      // A marginal probability Phi(u_j) that rounds to 1 cannot be mapped
      // back through the quantile; pf is reported as exactly 0 (or 1).
      if (std_normal_cdf(u.cwiseAbs().maxCoeff()) == 1.0) {
        report.pf = g_origin >= 0.0 ? 0.0 : 1.0;
        report.beyond_precision = true;
      }
      return report;
    }
  }
  throw FormConvergenceError("reliability search did not converge in " + std::to_string(options.max_iterations) +
                                 " iterations",
                             to_std(u));
}

ReliabilityReport sorm_breitung(const ReliabilityReport& form, const LimitState& g, const DesignDistributions& dists) {
  ReliabilityReport report = form;
  report.method = ReliabilityMethod::SORM_Breitung;
  report.curvatures.clear();
  if (form.beyond_precision) return report;  // corrections cannot lift pf off 0
  if (!(form.beta > 0.0)) throw DomainError("Breitung correction requires a positive reliability index");

  StandardSpaceLimitState G(g, dists);
  const auto n = static_cast<Eigen::Index>(G.dimension());
  if (n <= 1) return report;
  const Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(form.mpp_u.data(), n);

  const Eigen::VectorXd grad = G.gradient(u);
  const double grad_norm = grad.norm();
  if (!(grad_norm > 0.0)) throw DomainError("limit-state gradient vanishes at the design point");
  const Eigen::MatrixXd hess = G.hessian(u, 1e-4);

  // Orthonormal basis whose first column is the unit normal; the rest span
  // the tangent plane.
  Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(n, n);
  seed.col(0) = grad / grad_norm;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd tangent = q.rightCols(n - 1);
  const Eigen::MatrixXd projected = tangent.transpose() * hess * tangent / grad_norm;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(projected);
  if (eig.info() != Eigen::Success) throw ConvergenceError("curvature eigen-decomposition failed");

  double factor = 1.0;
  for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j) {
    const double kappa = eig.eigenvalues()[j];
    const double term = 1.0 + form.beta * kappa;
    if (!(term > 0.0)) throw DomainError("curvature too negative for the Breitung correction");
    factor /= std::sqrt(term);
    report.curvatures.push_back(kappa);
  }
  report.pf = form.pf * factor;
  if (report.pf >= 1.0) throw DomainError("Breitung correction produced a probability >= 1");
  report.beta = report.pf > 0.0 ? -std_normal_quantile(report.pf) : form.beta;
  return report;
}

ReliabilityReport mcs_pf(const LimitState& g, const DesignDistributions& dists, std::size_t n_samples,
                         std::uint64_t seed) {
  if (n_samples < 1000) throw DomainError("Monte Carlo needs at least 1000 samples");
  Rng rng(seed);
  std::vector<double> x(dists.x.size()), p(dists.p.size());
  std::size_t failures = 0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = sample(dists.x[j], rng);
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = sample(dists.p[j], rng);
    if (g(Realization{dists.d, x, p}) < 0.0) ++failures;
  }
  ReliabilityReport report;
  report.method = ReliabilityMethod::MCS;
  report.mcs_samples = n_samples;
  const double n = static_cast<double>(n_samples);
  report.pf = static_cast<double>(failures) / n;
  report.mcs_stderr = std::sqrt(report.pf * (1.0 - report.pf) / n);
  if (report.pf <= 0.0) {
    report.beta = std::numeric_limits<double>::infinity();
  } else if (report.pf >= 1.0) {
    report.beta = -std::numeric_limits<double>::infinity();
  } else {
    report.beta = -std_normal_quantile(report.pf);
  }
  return report;
}

double feasible_space_fraction(const ProblemDefinition& problem, std::size_t n_samples, std::uint64_t seed,
                               std::optional<double> beta) {
  if (n_samples == 0) throw DomainError("feasible-space fraction needs at least one sample");
  ProblemDefinition local = problem;
  if (beta) local.set_target_beta(*beta);
  const Box box = local.box();
  Rng rng(seed);
  std::vector<double> y(box.size());
  std::size_t feasible = 0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = rng.uniform(box.lower[j], box.upper[j]);
    if (constraint_violation(local, y) == 0.0) ++feasible;
  }
  return static_cast<double>(feasible) / static_cast<double>(n_samples);
}

} // namespace rbdo
