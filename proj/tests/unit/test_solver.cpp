#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "otrates/error.hpp"
#include "otrates/rng.hpp"
#include "otrates/solver.hpp"
#include "test_util.hpp"

using namespace otrates;

namespace {

void check_plan_invariants(const SolveResult& result,
                           const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, const CostSpec& cost) {
  CHECK(marginal_violation(result.plan, mu, nu) <= 1e-9);
  CHECK(result.plan.entries.size() <= mu.size() + nu.size() - 1);
  for (const PlanEntry& e : result.plan.entries) CHECK(e.mass > 0.0);
  CHECK(std::abs(plan_cost(result.plan, mu, nu, cost) - result.plan.value) <=
        1e-9 * (1.0 + std::abs(result.plan.value)));
  // dual feasibility on every pair, equality on plan support
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j)
      CHECK(result.duals.f[i] + result.duals.g[j] <=
            cost.eval(mu, i, nu, j) + 1e-9);
  for (const PlanEntry& e : result.plan.entries)
    CHECK(std::abs(result.duals.f[e.i] + result.duals.g[e.j] -
                   cost.eval(mu, e.i, nu, e.j)) <= 1e-9);
}

}  // namespace

TEST_CASE("two point masses have a forced coupling") {
  const auto quad = CostSpec::euclidean_power(2.0);
  const SolveResult result = solve_discrete(dirac(0.0), dirac(1.0), quad);
  CHECK(result.plan.value == doctest::Approx(1.0));
  REQUIRE(result.plan.entries.size() == 1);
  CHECK(result.plan.entries[0].i == 0);
  CHECK(result.plan.entries[0].j == 0);
  CHECK(result.plan.entries[0].mass == doctest::Approx(1.0));
}

TEST_CASE("monotone matching beats the crossing one") {
  // both permutations enumerated by hand: id costs (1+1)/2, swap (3+1)/2
  const auto abs1 = CostSpec::absolute_power_1d(1.0);
  const DiscreteMeasure mu = uniform_on({0.0, 2.0});
  const DiscreteMeasure nu = uniform_on({1.0, 3.0});
  const SolveResult result = solve_discrete(mu, nu, abs1);
  CHECK(result.plan.value == doctest::Approx(1.0));
  CHECK(brute_force_assignment(mu, nu, abs1) == doctest::Approx(1.0));
}

TEST_CASE("identical measures transport for free") {
  const DiscreteMeasure mu = uniform_on({0.3, -1.2, 2.0});
  const SolveResult result =
      solve_discrete(mu, mu, CostSpec::euclidean_power(2.0));
  CHECK(result.plan.value == doctest::Approx(0.0));
}

TEST_CASE("brute force examples") {
  const auto lin = CostSpec::euclidean_power(1.0);
  CHECK(brute_force_assignment(dirac(0.0), dirac(1.0), lin) ==
        doctest::Approx(1.0));
}

TEST_CASE("brute force rejects oversized or weighted instances") {
  const auto lin = CostSpec::euclidean_power(1.0);
  std::vector<double> pts(9);
  for (int i = 0; i < 9; ++i) pts[i] = i;
  const DiscreteMeasure nine = uniform_on(pts);
  CHECK_THROWS_AS(brute_force_assignment(nine, nine, lin), TooLarge);
  const DiscreteMeasure skew =
      DiscreteMeasure::make({{0.0}, {1.0}}, {0.3, 0.7});
  CHECK_THROWS_AS(brute_force_assignment(skew, skew, lin), InvalidWeights);
}

TEST_CASE("solver agrees with the permutation oracle") {
  Rng rng(2024);
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t n = 2 + std::size_t(rng.uniform01() * 6);
    const std::size_t dim = rng.uniform01() < 0.5 ? 1 : 2;
    const auto cost =
        CostSpec::euclidean_power(rng.uniform01() < 0.5 ? 1.0 : 2.0);
    const DiscreteMeasure mu = testutil::random_measure(rng, n, dim, true);
    const DiscreteMeasure nu = testutil::random_measure(rng, n, dim, true);
    const double exact = solve_discrete(mu, nu, cost).plan.value;
    const double brute = brute_force_assignment(mu, nu, cost);
    CHECK(std::abs(exact - brute) <= 1e-9 * (1.0 + brute));
  }
}

TEST_CASE("strong duality and plan invariants on random instances") {
  Rng rng(77);
  for (int instance = 0; instance < 250; ++instance) {
    const std::size_t n = 2 + std::size_t(rng.uniform01() * 18);
    const std::size_t m = 2 + std::size_t(rng.uniform01() * 18);
    const std::size_t dim = rng.uniform01() < 0.5 ? 1 : 3;
    const auto cost =
        CostSpec::euclidean_power(rng.uniform01() < 0.5 ? 1.0 : 2.0);
    const DiscreteMeasure mu = testutil::random_measure(rng, n, dim);
    const DiscreteMeasure nu = testutil::random_measure(rng, m, dim);
    const SolveResult result = solve_discrete(mu, nu, cost);
    check_plan_invariants(result, mu, nu, cost);
    const double dual = dual_value(result.duals, mu, nu);
    CHECK(std::abs(result.plan.value - dual) <=
          1e-8 * (1.0 + std::abs(result.plan.value)));
  }
}

TEST_CASE("size cap refuses oversized instances") {
  const DiscreteMeasure mu = uniform_on({0.0, 1.0, 2.0});
  CHECK_THROWS_AS(
      solve_discrete(mu, mu, CostSpec::euclidean_power(1.0), 8),
      SizeCapExceeded);
}

TEST_CASE("1-d quantile coupling") {
  const DiscreteMeasure grid = uniform_on({0.0, 1.0, 2.0});
  CHECK(solve_1d_convex(grid, grid, 2.0) == doctest::Approx(0.0));
  CHECK(solve_1d_convex(uniform_on({0.0, 1.0}), uniform_on({0.5, 1.5}),
                        1.0) == doctest::Approx(0.5));
  Rng rng(1);
  const DiscreteMeasure planar = testutil::random_measure(rng, 3, 2);
  CHECK_THROWS_AS(solve_1d_convex(planar, uniform_on({0.0}), 1.0),
                  DimensionMismatch);
}

TEST_CASE("quantile coupling equals the exact solver for convex powers") {
  Rng rng(303);
  for (const double p : {1.0, 1.5, 2.0, 3.0}) {
    const auto cost = CostSpec::absolute_power_1d(p);
    for (int instance = 0; instance < 40; ++instance) {
      const std::size_t n = 2 + std::size_t(rng.uniform01() * 6);
      const std::size_t m = 2 + std::size_t(rng.uniform01() * 6);
      const DiscreteMeasure mu = testutil::random_measure(rng, n);
      const DiscreteMeasure nu = testutil::random_measure(rng, m);
      const double mono = solve_1d_convex(mu, nu, p);
      const double exact = solve_discrete(mu, nu, cost).plan.value;
      CHECK(std::abs(mono - exact) <= 1e-9 * (1.0 + exact));
    }
  }
}

TEST_CASE("normalize_duals pins g at the cheapest support pair") {
  const auto quad = CostSpec::euclidean_power(2.0);
  const DiscreteMeasure mu = dirac(0.0);
  const DiscreteMeasure nu = dirac(1.0);
  const SolveResult result = solve_discrete(mu, nu, quad);
  const DualPotentials normalized =
      normalize_duals(result.duals, result.plan, mu, nu, quad, 2.0);
  CHECK(normalized.g[0] == doctest::Approx(0.0));
  CHECK(normalized.f[0] == doctest::Approx(1.0));
  // dual objective is invariant under the shift
  CHECK(dual_value(normalized, mu, nu) ==
        doctest::Approx(dual_value(result.duals, mu, nu)).epsilon(1e-12));
  // renormalizing is idempotent
  const DualPotentials twice =
      normalize_duals(normalized, result.plan, mu, nu, quad, 2.0);
  CHECK(twice.f == normalized.f);
  CHECK(twice.g == normalized.g);
}

TEST_CASE("power-cost triangle composition sanity") {
  Rng rng(404);
  for (const double p : {1.0, 2.0, 3.0}) {
    const auto cost = CostSpec::absolute_power_1d(p);
    for (int instance = 0; instance < 30; ++instance) {
      const DiscreteMeasure mu = testutil::random_measure(rng, 5);
      const DiscreteMeasure nu = testutil::random_measure(rng, 6);
      const DiscreteMeasure tau = testutil::random_measure(rng, 4);
      const double direct = solve_discrete(mu, nu, cost).plan.value;
      const double via_tau = solve_discrete(mu, tau, cost).plan.value +
                             solve_discrete(tau, nu, cost).plan.value;
      CHECK(direct <= std::pow(2.0, p) * via_tau + 1e-9);
    }
  }
}
