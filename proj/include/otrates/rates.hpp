#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otrates/cost.hpp"
#include "otrates/distribution.hpp"
#include "otrates/measure.hpp"

namespace otrates {

// Rate function of empirical optimal transport on bounded domains:
// n^{-1/2} for d < 2p, n^{-1/2} log(n+1) for d = 2p, n^{-p/d} for d > 2p.
double phi_rate(double p, std::size_t d, std::size_t n);

// min(alpha, (s-1)/s): the slower of the bounded-convergence exponent and
// the moment-driven tail exponent.
double predicted_exponent(double alpha, double s);

// Ordinary least squares of log(value) on log(n).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

LogLogFit fit_loglog_slope(const std::vector<std::pair<std::size_t, double>>&
                               pairs);

// Monte-Carlo rate study configuration.
//
// Settings:
//  - two_sample_equal:     mu = nu = dist; the statistic is T(mu_n, nu_n)
//                          itself (population value 0 is not subtracted)
//  - semi_discrete_target: one-sample deviation |T(mu_n, target) - ref|
//                          against a fixed discrete target; point-mass
//                          targets reduce to a sample mean
struct RateExperiment {
  enum class Setting { TwoSampleEqual, SemiDiscreteTarget };
  enum class ReferenceKind { Analytic, Zero, LargeSample };

  Setting setting = Setting::SemiDiscreteTarget;
  DistributionSpec dist = DistributionSpec::pareto_1d(1.5);
  std::optional<DiscreteMeasure> target;  // semi-discrete target measure
  CostSpec cost = CostSpec::absolute_power_1d(1.0);
  std::vector<std::size_t> n_grid;
  std::size_t fixed_m = 0;  // 0: m = n
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  ReferenceKind reference = ReferenceKind::Analytic;
  double reference_value = 0.0;  // used with Analytic
  std::size_t large_sample_factor = 50;
  std::size_t threads = 1;
  std::size_t solver_cap = 50'000'000;

  // Convenience constructors for the studied regimes.
  static RateExperiment pareto_tail(double q, std::vector<std::size_t> n_grid,
                                    std::size_t reps, std::uint64_t seed);
  static RateExperiment two_sample_equal(DistributionSpec dist, CostSpec cost,
                                         std::vector<std::size_t> n_grid,
                                         std::size_t reps, std::uint64_t seed);
  static RateExperiment semi_discrete(DistributionSpec dist,
                                      DiscreteMeasure target, CostSpec cost,
                                      double reference,
                                      std::vector<std::size_t> n_grid,
                                      std::size_t reps, std::uint64_t seed);
};

struct RatePoint {
  std::size_t n = 0;
  double mean_abs_dev = 0.0;
  double std_error = 0.0;
};

struct RateResult {
  std::vector<RatePoint> per_n;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  bool slope_defined = false;
  std::vector<std::size_t> excluded;  // grid points left out of the fit
};

// Resolves the population reference for the experiment (analytic value,
// zero for equal-law two-sample studies, or a large-sample surrogate).
// Throws NoReference when nothing is configured.
double reference_value(const RateExperiment& exp);

// Per-n mean absolute deviation over independent replications (fresh
// derived seeds per (n, replication)), followed by a log-log slope fit.
// Deterministic for a fixed config regardless of thread count.
RateResult run_rate_experiment(const RateExperiment& exp);

}  // namespace otrates
