#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "otrates/cost.hpp"
#include "otrates/measure.hpp"
#include "otrates/solver.hpp"

namespace otrates {

// n^{-1/2} sqrt(Var_mu[f] + Var_nu[g]): the computable factor of the
// parametric lower bound driven by non-constant dual potentials.
double dual_variance_bound(const DualPotentials& duals,
                           const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, std::size_t n);

// L^p moment check for normalized duals:
//   lhs = sum w_i |f_i|^p + sum v_j |g_j|^p
//   rhs = 4 * 8^p (moment(mu, X, p) + moment(nu, Y, p)),
// with the guarantee lhs <= rhs.
struct DualMomentCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

DualMomentCheck dual_moment_check(const DualPotentials& duals,
                                  const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu,
                                  const CostSpec& cost, double p);

// One-dimensional instance with compactly supported source (cdf
// 1-(1-t)^alpha on [0,1]), heavy-tailed target (cdf 1-t^{-beta} on [1,inf)),
// and ground cost (x-y)^gamma for even gamma. The canonical preset for an
// integrability exponent p uses gamma = smallest even integer >=
// (3p+1)/(p-1), beta = gamma+1, alpha = beta/2.
struct AppendixCInstance {
  double alpha = 0.0;
  double beta = 0.0;
  int gamma = 0;  // even
  double p = 2.0;

  static AppendixCInstance preset_for(double p);
  static AppendixCInstance make(double alpha, double beta, int gamma,
                                double p);

  // exponent of |f| near t = 1: |f| ~ (1-t)^{-(gamma-1) alpha/beta + 1}
  double potential_growth_exponent() const {
    return -(double(gamma - 1) * alpha / beta - 1.0);
  }
  bool divergence_criterion_holds() const {
    return p + alpha <= p * double(gamma - 1) * alpha / beta;
  }
};

// Monotone transport map t -> (1-t)^{-alpha/beta} pushing the source onto
// the target. Throws DomainError outside (0,1).
double appendixc_transport_map(double t, const AppendixCInstance& inst);

// Source potential on a grid inside (0, 1), f(0) = 0, computed by adaptive
// quadrature of f'(t) = -gamma (t - (1-t)^{-alpha/beta})^{gamma-1}.
std::vector<double> appendixc_potential(const std::vector<double>& t_grid,
                                        const AppendixCInstance& inst,
                                        double rel_tol = 1e-8);

// Truncated integrals int_0^{1-eps} |f|^p dF_mu for decreasing eps; the
// sequence grows without bound when the divergence criterion holds. Throws
// CriterionNotMet otherwise.
std::vector<double> appendixc_divergence_diagnostic(
    const AppendixCInstance& inst, double p,
    const std::vector<double>& epsilons);

// Finite-difference validation of the rescaling bounds: builds
//   f_scaled(u) = f(r^{1/p} |u|^{beta/p - 1} u) / r
// on the unit ball and checks the gradient against 2 d beta / p and, when
// second order is requested (beta > max(2, 2p)), the second differences
// against 5 d beta^2 / p^2. Hypothesis bounds on f itself are verified on
// the mapped grid first (HypothesisViolated).
struct ScalingCheckSpec {
  double p = 1.0;
  double beta = 2.0;
  double r = 1.0;     // >= 1
  std::size_t d = 1;  // <= 3 for grid checks
  std::size_t grid_per_axis = 9;
  int order = 1;  // 1: gradient only, 2: also second differences
};

struct ScalingCheckResult {
  double max_gradient = 0.0;
  double gradient_bound = 0.0;
  double max_second = 0.0;
  double second_bound = 0.0;
  double max_value = 0.0;  // of the scaled function over the grid
};

using ScalarField = std::function<double(const std::vector<double>&)>;

ScalingCheckResult scaled_function_check(const ScalingCheckSpec& spec,
                                         const ScalarField& f);

}  // namespace otrates
