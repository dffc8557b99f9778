#include "otrates/duals_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "otrates/error.hpp"
#include "otrates/quadrature.hpp"

namespace otrates {

double dual_variance_bound(const DualPotentials& duals,
                           const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, std::size_t n) {
  if (duals.f.size() != mu.size() || duals.g.size() != nu.size())
    throw DimensionMismatch("duals must cover the full supports");
  auto weighted_variance = [](const std::vector<double>& values,
                              const DiscreteMeasure& m) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      mean += m.weight(i) * values[i];
    double var = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double d = values[i] - mean;
      var += m.weight(i) * d * d;
    }
    return var;
  };
  return std::sqrt(weighted_variance(duals.f, mu) +
                   weighted_variance(duals.g, nu)) /
         std::sqrt(double(n));
}

DualMomentCheck dual_moment_check(const DualPotentials& duals,
                                  const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu,
                                  const CostSpec& cost, double p) {
  DualMomentCheck check;
  for (std::size_t i = 0; i < mu.size(); ++i)
    check.lhs += mu.weight(i) * std::pow(std::abs(duals.f[i]), p);
  for (std::size_t j = 0; j < nu.size(); ++j)
    check.lhs += nu.weight(j) * std::pow(std::abs(duals.g[j]), p);
  check.rhs = 4.0 * std::pow(8.0, p) *
              (moment(mu, cost, Side::X, p) + moment(nu, cost, Side::Y, p));
  return check;
}

AppendixCInstance AppendixCInstance::make(double alpha, double beta,
                                          int gamma, double p) {
  if (!(alpha > 0.0) || !(beta > 0.0) || gamma <= 0 || gamma % 2 != 0)
    throw DomainError("requires alpha, beta > 0 and even gamma > 0");
  if (!(beta > double(gamma)))
    throw DomainError("requires beta > gamma for a finite target moment");
  if (std::abs(double(gamma - 1) * alpha - beta) < 1e-12)
    throw DomainError("requires (gamma-1) alpha != beta");
  if (!(p > 1.0)) throw DomainError("requires p > 1");
  return {alpha, beta, gamma, p};
}

AppendixCInstance AppendixCInstance::preset_for(double p) {
  if (!(p > 1.0)) throw DomainError("preset requires p > 1");
  int gamma = int(std::ceil((3.0 * p + 1.0) / (p - 1.0)));
  if (gamma % 2 != 0) ++gamma;
  const double beta = double(gamma) + 1.0;
  return make(beta / 2.0, beta, gamma, p);
}

double appendixc_transport_map(double t, const AppendixCInstance& inst) {
  if (!(t > 0.0) || !(t < 1.0))
    throw DomainError("transport map defined on (0, 1)");
  return std::pow(1.0 - t, -inst.alpha / inst.beta);
}

namespace {

double potential_derivative(double t, const AppendixCInstance& inst) {
  const double gap = t - std::pow(1.0 - t, -inst.alpha / inst.beta);
  return -double(inst.gamma) * std::pow(gap, double(inst.gamma - 1));
}

// Potential values accumulated by quadrature from t = 0, cached at every
// queried abscissa so later evaluations only integrate short gaps.
class PotentialEvaluator {
 public:
  PotentialEvaluator(const AppendixCInstance& inst, double rel_tol)
      : inst_(inst), rel_tol_(rel_tol) {
    cache_[0.0] = 0.0;
  }

  double operator()(double t) {
    auto it = cache_.upper_bound(t);
    --it;  // anchor at or below t; t = 0 always present
    if (it->first == t) return it->second;
    const double value =
        it->second + integrate([&](double u) {
                       return potential_derivative(u, inst_);
                     },
                               it->first, t, rel_tol_)
                         .value;
    cache_.emplace(t, value);
    return value;
  }

 private:
  AppendixCInstance inst_;
  double rel_tol_;
  std::map<double, double> cache_;
};

constexpr double kGridCeiling = 1e-8;  // grid must stay below 1 - this

}  // namespace

std::vector<double> appendixc_potential(const std::vector<double>& t_grid,
                                        const AppendixCInstance& inst,
                                        double rel_tol) {
  for (double t : t_grid)
    if (!(t >= 0.0) || t > 1.0 - kGridCeiling)
      throw DomainError("grid must lie inside [0, 1 - 1e-8]");

  std::vector<std::size_t> order(t_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return t_grid[a] < t_grid[b];
  });

  PotentialEvaluator evaluator(inst, rel_tol);
  std::vector<double> values(t_grid.size());
  for (const std::size_t i : order) values[i] = evaluator(t_grid[i]);
  return values;
}

std::vector<double> appendixc_divergence_diagnostic(
    const AppendixCInstance& inst, double p,
    const std::vector<double>& epsilons) {
  if (!inst.divergence_criterion_holds() ||
      std::abs(p - inst.p) > 1e-12 * std::max(1.0, inst.p))
    throw CriterionNotMet(
        "instance does not satisfy p + alpha <= p (gamma-1) alpha / beta");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0) || epsilons[k] > 1.0)
      throw DomainError("epsilons must lie in (0, 1)");
    if (k > 0 && epsilons[k] >= epsilons[k - 1])
      throw DomainError("epsilons must decrease");
  }

  PotentialEvaluator evaluator(inst, 1e-8);
  const auto integrand = [&](double t) {
    const double f = evaluator(t);
    return std::pow(std::abs(f), p) * inst.alpha *
           std::pow(1.0 - t, inst.alpha - 1.0);
  };

  std::vector<double> partials;
  partials.reserve(epsilons.size());
  double acc = 0.0;
  double lo = 0.0;
  for (const double eps : epsilons) {
    const double hi = 1.0 - eps;
    if (hi > lo) {
      acc += integrate(integrand, lo, hi, 1e-8).value;
      lo = hi;
    }
    partials.push_back(acc);
  }
  return partials;
}

namespace {

std::vector<double> scale_map(const std::vector<double>& u, double r,
                              double p, double beta) {
  double norm_sq = 0.0;
  for (double c : u) norm_sq += c * c;
  const double norm = std::sqrt(norm_sq);
  const double factor =
      std::pow(r, 1.0 / p) * std::pow(norm, beta / p - 1.0);
  std::vector<double> x(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) x[k] = factor * u[k];
  return x;
}

}  // namespace

ScalingCheckResult scaled_function_check(const ScalingCheckSpec& spec,
                                         const ScalarField& f) {
  if (spec.d < 1 || spec.d > 3)
    throw DomainError("grid checks support d in {1, 2, 3}");
  if (!(spec.r >= 1.0)) throw DomainError("requires r >= 1");
  const double min_beta =
      spec.order >= 2 ? std::max(2.0, 2.0 * spec.p) : std::max(1.0, spec.p);
  if (!(spec.beta > min_beta))
    throw DomainError("beta too small for the requested derivative order");

  const auto scaled = [&](const std::vector<double>& u) {
    return f(scale_map(u, spec.r, spec.p, spec.beta)) / spec.r;
  };

  // Interior lattice over the unit ball; the origin neighborhood is
  // excluded because the radial map is non-smooth there.
  std::vector<std::vector<double>> grid;
  const std::size_t g = std::max<std::size_t>(3, spec.grid_per_axis);
  std::vector<std::size_t> idx(spec.d, 0);
  while (true) {
    std::vector<double> u(spec.d);
    for (std::size_t k = 0; k < spec.d; ++k)
      u[k] = -1.0 + 2.0 * double(idx[k]) / double(g - 1);
    double norm = 0.0;
    for (double c : u) norm += c * c;
    norm = std::sqrt(norm);
    if (norm >= 1e-3 && norm <= 0.998) grid.push_back(std::move(u));
    std::size_t k = 0;
    for (; k < spec.d; ++k) {
      if (++idx[k] < g) break;
      idx[k] = 0;
    }
    if (k == spec.d) break;
  }

  // Verify the declared derivative hypotheses on f over mapped sample
  // points with well-scaled norms.
  const double hypo_bound_grad = std::pow(spec.r, 1.0 - 1.0 / spec.p);
  for (const auto& u : grid) {
    double norm = 0.0;
    for (double c : u) norm += c * c;
    norm = std::sqrt(norm);
    if (norm < 0.3 || norm > 0.95) continue;
    const auto x = scale_map(u, spec.r, spec.p, spec.beta);
    double x_norm = 0.0;
    for (double c : x) x_norm += c * c;
    x_norm = std::sqrt(x_norm);
    const double h = 1e-5 * std::max(1.0, x_norm);
    for (std::size_t k = 0; k < spec.d; ++k) {
      auto xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double partial = (f(xp) - f(xm)) / (2.0 * h);
      const double bound =
          std::pow(x_norm, spec.p - 1.0) + hypo_bound_grad;
      if (std::abs(partial) > bound * (1.0 + 1e-3) + 1e-6)
        throw HypothesisViolated(
            "declared derivative bound fails on the sample grid");
    }
  }

  ScalingCheckResult result;
  result.gradient_bound = 2.0 * double(spec.d) * spec.beta / spec.p;
  result.second_bound =
      5.0 * double(spec.d) * spec.beta * spec.beta / (spec.p * spec.p);

  const double h1 = 1e-5;
  const double h2 = 1e-4;
  for (const auto& u : grid) {
    result.max_value = std::max(result.max_value, scaled(u));
    double grad_sq = 0.0;
    for (std::size_t k = 0; k < spec.d; ++k) {
      auto up = u, um = u;
      up[k] += h1;
      um[k] -= h1;
      const double partial = (scaled(up) - scaled(um)) / (2.0 * h1);
      grad_sq += partial * partial;
    }
    result.max_gradient = std::max(result.max_gradient, std::sqrt(grad_sq));

    if (spec.order >= 2) {
      const double center = scaled(u);
      for (std::size_t k = 0; k < spec.d; ++k) {
        auto up = u, um = u;
        up[k] += h2;
        um[k] -= h2;
        const double second =
            (scaled(up) - 2.0 * center + scaled(um)) / (h2 * h2);
        result.max_second = std::max(result.max_second, std::abs(second));
        for (std::size_t l = k + 1; l < spec.d; ++l) {
          auto upp = u, upm = u, ump = u, umm = u;
          upp[k] += h2;
          upp[l] += h2;
          upm[k] += h2;
          upm[l] -= h2;
          ump[k] -= h2;
          ump[l] += h2;
          umm[k] -= h2;
          umm[l] -= h2;
          const double cross = (scaled(upp) - scaled(upm) - scaled(ump) +
                                scaled(umm)) /
                               (4.0 * h2 * h2);
          result.max_second = std::max(result.max_second, std::abs(cross));
        }
      }
    }
  }
  return result;
}

}  // namespace otrates
