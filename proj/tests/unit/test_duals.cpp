#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "otrates/distribution.hpp"
#include "otrates/duals_analysis.hpp"
#include "otrates/error.hpp"
#include "otrates/rng.hpp"
#include "otrates/solver.hpp"
#include "test_util.hpp"

using namespace otrates;

TEST_CASE("dual variance bound") {
  const DiscreteMeasure mu = uniform_on({0.0, 1.0});
  const DiscreteMeasure nu = dirac(0.5);
  const auto cost = CostSpec::absolute_power_1d(1.0);
  const SolveResult solved = solve_discrete(mu, nu, cost);
  // both support points sit at distance 1/2 from the target, so f must be
  // constant and the whole bound collapses
  CHECK(dual_variance_bound(solved.duals, mu, nu, 100) ==
        doctest::Approx(0.0).epsilon(1e-12));

  DualPotentials constant{{2.0, 2.0}, {-1.0}};
  CHECK(dual_variance_bound(constant, mu, nu, 50) == 0.0);

  DualPotentials skew{{0.0, 1.0}, {0.0}};
  const double at_n = dual_variance_bound(skew, mu, nu, 100);
  const double at_4n = dual_variance_bound(skew, mu, nu, 400);
  CHECK(at_4n == doctest::Approx(at_n / 2.0).epsilon(1e-12));
}

TEST_CASE("dual moment check on the forced instance") {
  const auto quad = CostSpec::euclidean_power(2.0);
  const DiscreteMeasure mu = dirac(0.0);
  const DiscreteMeasure nu = dirac(1.0);
  const SolveResult solved = solve_discrete(mu, nu, quad);
  const DualPotentials normalized =
      normalize_duals(solved.duals, solved.plan, mu, nu, quad, 2.0);
  const DualMomentCheck check =
      dual_moment_check(normalized, mu, nu, quad, 2.0);
  CHECK(check.lhs == doctest::Approx(1.0));  // f(0)=1, g(1)=0
  // 4*8^2*(0 + c_Y(1)^2) with c_Y(1) = 2^2 = 4: 256 * 16
  CHECK(check.rhs == doctest::Approx(4096.0));
  CHECK(check.lhs <= check.rhs);
}

TEST_CASE("dual moments obey the constant on random instances") {
  Rng rng(111);
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t n = 2 + std::size_t(rng.uniform01() * 15);
    const std::size_t m = 2 + std::size_t(rng.uniform01() * 15);
    const DiscreteMeasure mu = testutil::random_measure(rng, n);
    const DiscreteMeasure nu = testutil::random_measure(rng, m);
    const double p = rng.uniform01() < 0.5 ? 1.5 : 2.0;
    const auto cost = CostSpec::euclidean_power(p);
    const SolveResult solved = solve_discrete(mu, nu, cost);
    const DualPotentials normalized =
        normalize_duals(solved.duals, solved.plan, mu, nu, cost, p);
    const DualMomentCheck check =
        dual_moment_check(normalized, mu, nu, cost, p);
    CHECK(check.lhs <= check.rhs);
  }
}

TEST_CASE("transport map basics") {
  const AppendixCInstance inst = AppendixCInstance::make(4.5, 9.0, 8, 2.0);
  CHECK(appendixc_transport_map(0.75, inst) == doctest::Approx(2.0));
  CHECK(appendixc_transport_map(1e-12, inst) == doctest::Approx(1.0));
  CHECK_THROWS_AS(appendixc_transport_map(0.0, inst), DomainError);
  CHECK_THROWS_AS(appendixc_transport_map(1.0, inst), DomainError);
  // exact inverse-cdf composition on a grid
  for (double t = 0.05; t < 1.0 - 1e-9; t += 0.05) {
    const double push = std::pow(1.0 - (1.0 - std::pow(1.0 - t, inst.alpha)),
                                 -1.0 / inst.beta);
    CHECK(std::abs(appendixc_transport_map(t, inst) - push) <= 1e-12);
  }
}

TEST_CASE("transport map pushes the source onto the target") {
  const AppendixCInstance inst = AppendixCInstance::preset_for(2.0);
  const DiscreteMeasure mu =
      sample(DistributionSpec::appendixc_mu(inst.alpha), 100'000, 2);
  std::vector<double> mapped(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double t = std::min(mu.value1d(i), 1.0 - 1e-15);
    mapped[i] = appendixc_transport_map(std::max(t, 1e-15), inst);
  }
  std::sort(mapped.begin(), mapped.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const double cdf = 1.0 - std::pow(std::max(mapped[i], 1.0), -inst.beta);
    const double hi = double(i + 1) / double(mapped.size());
    const double lo = double(i) / double(mapped.size());
    ks = std::max(ks, std::max(std::abs(cdf - hi), std::abs(cdf - lo)));
  }
  CHECK(ks < 0.01);
}

TEST_CASE("preset instances") {
  const AppendixCInstance preset = AppendixCInstance::preset_for(2.0);
  CHECK(preset.gamma == 8);
  CHECK(preset.beta == doctest::Approx(9.0));
  CHECK(preset.alpha == doctest::Approx(4.5));
  CHECK(preset.divergence_criterion_holds());  // 6.5 <= 7
  CHECK(preset.potential_growth_exponent() == doctest::Approx(-2.5));
  CHECK_THROWS_AS(AppendixCInstance::make(4.5, 9.0, 7, 2.0), DomainError);
  CHECK_THROWS_AS(AppendixCInstance::make(4.5, 3.0, 8, 2.0), DomainError);
}

TEST_CASE("potential grows with the predicted exponent") {
  struct Case {
    AppendixCInstance inst;
  };
  const AppendixCInstance presets[3] = {
      AppendixCInstance::make(4.5, 9.0, 8, 2.0),
      AppendixCInstance::make(3.0, 9.0, 8, 2.0),
      AppendixCInstance::make(3.5, 7.0, 6, 2.0),
  };
  for (const AppendixCInstance& inst : presets) {
    std::vector<double> grid;
    for (double eps = 1e-2; eps >= 1e-6 / 1.0001; eps /= 4.0)
      grid.push_back(1.0 - eps);
    const std::vector<double> f = appendixc_potential(grid, inst);
    // potential is pinned at zero and monotone: the derivative keeps one
    // sign on (0,1)
    for (std::size_t k = 1; k < f.size(); ++k) CHECK(f[k] > f[k - 1]);
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      lx.push_back(std::log(1.0 - grid[k]));
      ly.push_back(std::log(std::abs(f[k])));
    }
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      mx += lx[k];
      my += ly[k];
    }
    mx /= double(lx.size());
    my /= double(lx.size());
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sxx += (lx[k] - mx) * (lx[k] - mx);
      sxy += (lx[k] - mx) * (ly[k] - my);
    }
    const double slope = sxy / sxx;
    CHECK(std::abs(slope - inst.potential_growth_exponent()) <= 0.1);
  }
}

TEST_CASE("potential normalization and domain") {
  const AppendixCInstance inst = AppendixCInstance::preset_for(2.0);
  const std::vector<double> f = appendixc_potential({0.0, 0.5}, inst);
  CHECK(f[0] == 0.0);
  CHECK(f[1] > 0.0);
  CHECK_THROWS_AS(appendixc_potential({1.0 - 1e-12}, inst), DomainError);
}

TEST_CASE("divergence diagnostic increases without bound") {
  const AppendixCInstance inst = AppendixCInstance::preset_for(2.0);
  const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const std::vector<double> partials =
      appendixc_divergence_diagnostic(inst, 2.0, eps);
  REQUIRE(partials.size() == eps.size());
  for (std::size_t k = 1; k < partials.size(); ++k)
    CHECK(partials[k] > partials[k - 1]);
  // once eps drops below 1e-4 each decade multiplies the integral by at
  // least 1.5 (the local integrand exponent is -1.5, so the true factor
  // approaches sqrt(10))
  CHECK(partials[4] / partials[3] >= 1.5);
  CHECK(partials[5] / partials[4] >= 1.5);
}

TEST_CASE("divergence diagnostic rejects convergent instances") {
  // gamma=4, p=2, alpha=2.5, beta=5: criterion 4.5 <= 3 fails
  const AppendixCInstance control = AppendixCInstance::make(2.5, 5.0, 4, 2.0);
  CHECK_FALSE(control.divergence_criterion_holds());
  CHECK_THROWS_AS(
      appendixc_divergence_diagnostic(control, 2.0, {1e-1, 1e-2}),
      CriterionNotMet);
}

TEST_CASE("integrand exponent near one matches the arithmetic") {
  // |f|^2 dF_mu behaves like (1-t)^{-1.5}: slope of the integrand between
  // eps = 1e-4 and 1e-5 sits near -1.5
  const AppendixCInstance inst = AppendixCInstance::preset_for(2.0);
  const std::vector<double> grid = {1.0 - 1e-4, 1.0 - 1e-5};
  const std::vector<double> f = appendixc_potential(grid, inst);
  auto integrand = [&](double t, double fv) {
    return fv * fv * inst.alpha * std::pow(1.0 - t, inst.alpha - 1.0);
  };
  const double slope =
      std::log(integrand(grid[1], f[1]) / integrand(grid[0], f[0])) /
      std::log(1e-5 / 1e-4);
  CHECK(std::abs(slope - (-1.5)) <= 0.1);
}

TEST_CASE("scaled function check on the power cost") {
  ScalingCheckSpec spec;
  spec.d = 1;
  spec.p = 2.0;
  spec.beta = 3.0;
  spec.r = 4.0;
  spec.order = 1;
  const ScalarField f = [](const std::vector<double>& x) {
    double sq = 0.0;
    for (const double c : x) sq += c * c;
    return 0.5 * sq;
  };
  const ScalingCheckResult result = scaled_function_check(spec, f);
  CHECK(result.gradient_bound == doctest::Approx(3.0));
  CHECK(result.max_gradient <= result.gradient_bound + 1e-3);
  CHECK(result.max_value <= 1.0 + 1e-9);

  const ScalarField zero = [](const std::vector<double>&) { return 0.0; };
  const ScalingCheckResult nil = scaled_function_check(spec, zero);
  CHECK(nil.max_gradient == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(nil.max_value == 0.0);
}

TEST_CASE("scaled function check includes second differences") {
  ScalingCheckSpec spec;
  spec.d = 2;
  spec.p = 1.0;
  spec.beta = 2.5;  // > max(2, 2p)
  spec.r = 3.0;
  spec.order = 2;
  const double p = spec.p;
  const ScalarField f = [p](const std::vector<double>& x) {
    double sq = 0.0;
    for (const double c : x) sq += c * c;
    return std::pow(sq, 0.5 * p) / p;
  };
  const ScalingCheckResult result = scaled_function_check(spec, f);
  CHECK(result.max_gradient <= result.gradient_bound + 1e-3);
  CHECK(result.max_second <= result.second_bound + 1e-2);
}

TEST_CASE("hypothesis violations are caught") {
  ScalingCheckSpec spec;
  spec.d = 1;
  spec.p = 2.0;
  spec.beta = 5.0;
  spec.r = 4.0;
  spec.order = 1;
  const ScalarField steep = [](const std::vector<double>& x) {
    double sq = 0.0;
    for (const double c : x) sq += c * c;
    return 10.0 * sq;
  };
  CHECK_THROWS_AS(scaled_function_check(spec, steep), HypothesisViolated);
}

TEST_CASE("random admissible scaling draws never violate the constants") {
  Rng rng(2025);
  for (int draw = 0; draw < 2; ++draw) {
    ScalingCheckSpec spec;
    spec.d = 1 + std::size_t(rng.uniform01() * 3);
    spec.p = 0.5 + 2.5 * rng.uniform01();
    spec.beta = std::max(2.0, 2.0 * spec.p) + 0.5 + 1.5 * rng.uniform01();
    spec.r = 1.0 + 4.0 * rng.uniform01();
    spec.order = 2;
    const double p = spec.p;
    const ScalarField f = [p](const std::vector<double>& x) {
      double sq = 0.0;
      for (const double c : x) sq += c * c;
      return std::pow(sq, 0.5 * p) / p;
    };
    const ScalingCheckResult result = scaled_function_check(spec, f);
    CHECK(result.max_gradient <= result.gradient_bound + 1e-3);
    CHECK(result.max_second <= result.second_bound + 1e-2);
  }
}
