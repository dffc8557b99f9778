#include "otrates/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otrates/error.hpp"
#include "otrates/parallel.hpp"
#include "otrates/rng.hpp"
#include "otrates/solver.hpp"

namespace otrates {

double phi_rate(double p, std::size_t d, std::size_t n) {
  if (!(p > 0.0) || d < 1 || n < 1)
    throw DomainError("phi_rate requires p > 0, d >= 1, n >= 1");
  const double dn = double(n);
  const double dd = double(d);
  if (std::abs(dd - 2.0 * p) <= 1e-12)
    return std::log(dn + 1.0) / std::sqrt(dn);
  if (dd < 2.0 * p) return 1.0 / std::sqrt(dn);
  return std::pow(dn, -p / dd);
}

double predicted_exponent(double alpha, double s) {
  if (!(alpha > 0.0) || alpha > 0.5)
    throw DomainError("alpha must lie in (0, 1/2]");
  if (!(s > 1.0) || s > 2.0) throw DomainError("s must lie in (1, 2]");
  return std::min(alpha, (s - 1.0) / s);
}

LogLogFit fit_loglog_slope(
    const std::vector<std::pair<std::size_t, double>>& pairs) {
  if (pairs.size() < 2)
    throw DegenerateFit("need at least two (n, value) pairs");
  for (const auto& [n, v] : pairs)
    if (!(v > 0.0)) throw DegenerateFit("values must be positive");
  const double first = double(pairs.front().first);
  bool all_equal = true;
  for (const auto& [n, v] : pairs)
    if (double(n) != first) all_equal = false;
  if (all_equal) throw DegenerateFit("all n equal");

  const std::size_t k = pairs.size();
  double mx = 0.0, my = 0.0;
  for (const auto& [n, v] : pairs) {
    mx += std::log(double(n));
    my += std::log(v);
  }
  mx /= double(k);
  my /= double(k);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, v] : pairs) {
    const double dx = std::log(double(n)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (k > 2) {
    double sse = 0.0;
    for (const auto& [n, v] : pairs) {
      const double resid = std::log(v) - fit.intercept -
                           fit.slope * std::log(double(n));
      sse += resid * resid;
    }
    fit.stderr_slope = std::sqrt(sse / double(k - 2) / sxx);
  }
  return fit;
}

RateExperiment RateExperiment::pareto_tail(double q,
                                           std::vector<std::size_t> n_grid,
                                           std::size_t reps,
                                           std::uint64_t seed) {
  RateExperiment exp;
  exp.setting = Setting::SemiDiscreteTarget;
  exp.dist = DistributionSpec::pareto_1d(q);
  exp.target = dirac(0.0);
  exp.cost = CostSpec::absolute_power_1d(1.0);
  exp.n_grid = std::move(n_grid);
  exp.reps = reps;
  exp.seed = seed;
  exp.reference = ReferenceKind::Analytic;
  exp.reference_value = std::numeric_limits<double>::quiet_NaN();
  return exp;
}

RateExperiment RateExperiment::two_sample_equal(
    DistributionSpec dist, CostSpec cost, std::vector<std::size_t> n_grid,
    std::size_t reps, std::uint64_t seed) {
  RateExperiment exp;
  exp.setting = Setting::TwoSampleEqual;
  exp.dist = dist;
  exp.cost = cost;
  exp.n_grid = std::move(n_grid);
  exp.reps = reps;
  exp.seed = seed;
  exp.reference = ReferenceKind::Zero;
  return exp;
}

RateExperiment RateExperiment::semi_discrete(
    DistributionSpec dist, DiscreteMeasure target, CostSpec cost,
    double reference, std::vector<std::size_t> n_grid, std::size_t reps,
    std::uint64_t seed) {
  RateExperiment exp;
  exp.setting = Setting::SemiDiscreteTarget;
  exp.dist = dist;
  exp.target = std::move(target);
  exp.cost = cost;
  exp.n_grid = std::move(n_grid);
  exp.reps = reps;
  exp.seed = seed;
  exp.reference = ReferenceKind::Analytic;
  exp.reference_value = reference;
  return exp;
}

namespace {

constexpr std::uint64_t kRateTag = 0x52617465ULL;  // experiment stream id

bool is_power_cost(const CostSpec& cost) {
  return cost.kind() == CostSpec::Kind::EuclideanPower ||
         cost.kind() == CostSpec::Kind::AbsolutePower1d;
}

// T(empirical, target) along the fastest exact route available.
double transport_value(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       const CostSpec& cost, std::size_t cap) {
  if (nu.size() == 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      acc += mu.weight(i) * cost.eval(mu, i, nu, 0);
    return acc;
  }
  if (mu.dim() == 1 && nu.dim() == 1 && is_power_cost(cost) &&
      cost.exponent() >= 1.0)
    return solve_1d_convex(mu, nu, cost.exponent());
  return solve_discrete(mu, nu, cost, cap).plan.value;
}

}  // namespace

double reference_value(const RateExperiment& exp) {
  switch (exp.reference) {
    case RateExperiment::ReferenceKind::Zero:
      return 0.0;
    case RateExperiment::ReferenceKind::LargeSample: {
      if (!exp.target) throw NoReference("large-sample surrogate needs a target");
      const std::size_t max_n =
          *std::max_element(exp.n_grid.begin(), exp.n_grid.end());
      const std::size_t n_ref = exp.large_sample_factor * max_n;
      const DiscreteMeasure ref_sample = sample(
          exp.dist, n_ref, derive_stream(exp.seed, {kRateTag, 0x5e4fULL}));
      return transport_value(ref_sample, *exp.target, exp.cost,
                             exp.solver_cap);
    }
    case RateExperiment::ReferenceKind::Analytic:
      break;
  }
  if (!std::isnan(exp.reference_value)) return exp.reference_value;
  if (!exp.target) throw NoReference("analytic reference needs a target");

  // Discrete population measures admit an exact solve.
  if (exp.dist.kind == DistributionSpec::Kind::PointMass) {
    const DiscreteMeasure mu = dirac(exp.dist.x0);
    return transport_value(mu, *exp.target, exp.cost, exp.solver_cap);
  }
  if (exp.dist.kind == DistributionSpec::Kind::UniformTwoPoint) {
    const DiscreteMeasure mu = uniform_on({exp.dist.x0, exp.dist.x1});
    return transport_value(mu, *exp.target, exp.cost, exp.solver_cap);
  }
  // Pareto source, point target at y <= 1, first-power cost:
  // E|X - y| = q/(q-1) - y on the support [1, inf).
  if (exp.dist.kind == DistributionSpec::Kind::Pareto1d &&
      exp.target->size() == 1 && exp.target->value1d(0) <= 1.0 &&
      is_power_cost(exp.cost) &&
      std::abs(exp.cost.exponent() - 1.0) < 1e-12) {
    if (!(exp.dist.q > 1.0))
      throw NoReference("pareto mean requires q > 1");
    return exp.dist.q / (exp.dist.q - 1.0) - exp.target->value1d(0);
  }
  throw NoReference("no closed form configured for this setting");
}

RateResult run_rate_experiment(const RateExperiment& exp) {
  if (exp.n_grid.size() < 2)
    throw ConfigError("n_grid needs at least two points");
  for (std::size_t k = 1; k < exp.n_grid.size(); ++k)
    if (exp.n_grid[k] <= exp.n_grid[k - 1])
      throw ConfigError("n_grid must be strictly increasing");
  if (exp.reps < 10) throw ConfigError("reps must be at least 10");
  for (const std::size_t n : exp.n_grid) {
    const std::size_t m = exp.fixed_m == 0 ? n : exp.fixed_m;
    const std::size_t pairs =
        exp.setting == RateExperiment::Setting::TwoSampleEqual
            ? n * m
            : n * exp.target->size();
    if (pairs > exp.solver_cap)
      throw SolverCap("grid size exceeds the solver cap");
  }

  const double ref = exp.setting == RateExperiment::Setting::TwoSampleEqual
                         ? 0.0
                         : reference_value(exp);

  const std::size_t grid_size = exp.n_grid.size();
  std::vector<std::vector<double>> deviations(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k)
    deviations[k].assign(exp.reps, 0.0);

  const std::size_t tasks = grid_size * exp.reps;
  const std::size_t threads =
      exp.threads == 0 ? default_thread_count() : exp.threads;
  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t k = task / exp.reps;
    const std::size_t rep = task % exp.reps;
    const std::size_t n = exp.n_grid[k];
    const std::uint64_t seed_mu =
        derive_stream(exp.seed, {kRateTag, n, rep, 0});
    const DiscreteMeasure mu_hat = sample(exp.dist, n, seed_mu);
    double stat = 0.0;
    if (exp.setting == RateExperiment::Setting::TwoSampleEqual) {
      const std::size_t m = exp.fixed_m == 0 ? n : exp.fixed_m;
      const std::uint64_t seed_nu =
          derive_stream(exp.seed, {kRateTag, n, rep, 1});
      const DiscreteMeasure nu_hat = sample(exp.dist, m, seed_nu);
      stat = transport_value(mu_hat, nu_hat, exp.cost, exp.solver_cap);
    } else {
      const double value =
          transport_value(mu_hat, *exp.target, exp.cost, exp.solver_cap);
      stat = std::abs(value - ref);
    }
    deviations[k][rep] = stat;
  });

  RateResult result;
  for (std::size_t k = 0; k < grid_size; ++k) {
    RatePoint point;
    point.n = exp.n_grid[k];
    double sum = 0.0;
    for (const double v : deviations[k]) sum += v;
    point.mean_abs_dev = sum / double(exp.reps);
    double ss = 0.0;
    for (const double v : deviations[k]) {
      const double d = v - point.mean_abs_dev;
      ss += d * d;
    }
    point.std_error = exp.reps > 1
                          ? std::sqrt(ss / double(exp.reps - 1) /
                                      double(exp.reps))
                          : 0.0;
    result.per_n.push_back(point);
  }

  // Small-sample leading grid points are left out of the fit.
  std::vector<std::pair<std::size_t, double>> fit_pairs;
  for (const RatePoint& point : result.per_n) {
    const bool small = exp.reps * point.n < 500;
    if (small && fit_pairs.empty() &&
        result.excluded.size() + 2 <= grid_size) {
      result.excluded.push_back(point.n);
      continue;
    }
    fit_pairs.push_back({point.n, point.mean_abs_dev});
  }

  bool fittable = fit_pairs.size() >= 2;
  for (const auto& [n, v] : fit_pairs)
    if (!(v > 0.0)) fittable = false;
  if (fittable) {
    const LogLogFit fit = fit_loglog_slope(fit_pairs);
    result.slope = fit.slope;
    result.intercept = fit.intercept;
    result.slope_stderr = fit.stderr_slope;
    result.slope_defined = true;
  } else {
    result.slope = std::numeric_limits<double>::quiet_NaN();
    result.intercept = std::numeric_limits<double>::quiet_NaN();
    result.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    result.slope_defined = false;
  }
  return result;
}

}  // namespace otrates
