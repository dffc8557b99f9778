#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "otrates/cost.hpp"
#include "otrates/distribution.hpp"
#include "otrates/error.hpp"
#include "otrates/measure.hpp"
#include "otrates/quadrature.hpp"
#include "otrates/rng.hpp"
#include "test_util.hpp"

using namespace otrates;

TEST_CASE("make_discrete basics") {
  const DiscreteMeasure point = DiscreteMeasure::make({{0.0}}, {1.0});
  CHECK(point.size() == 1);
  CHECK(point.weight(0) == 1.0);

  const DiscreteMeasure pair =
      DiscreteMeasure::make({{0.0}, {1.0}}, {0.5, 0.5});
  CHECK(pair.weight(0) == 0.5);
  CHECK(pair.weight(1) == 0.5);

  CHECK_THROWS_AS(DiscreteMeasure::make({{0.0}, {1.0}}, {0.5, 0.6}),
                  InvalidWeights);
  CHECK_THROWS_AS(DiscreteMeasure::make({{0.0}, {1.0}}, {0.5, -0.1}),
                  InvalidWeights);
  CHECK_THROWS_AS(DiscreteMeasure::make({{0.0}, {1.0, 2.0}}, {0.5, 0.5}),
                  DimensionMismatch);
}

TEST_CASE("weights renormalize within the acceptance window") {
  const DiscreteMeasure m =
      DiscreteMeasure::make({{0.0}, {1.0}}, {0.5, 0.5 + 5e-10});
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) sum += m.weight(i);
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("point mass sampling") {
  const DiscreteMeasure s = sample(DistributionSpec::point_mass(3.0), 5, 42);
  CHECK(s.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s.value1d(i) == 3.0);
    CHECK(s.weight(i) == doctest::Approx(0.2));
  }
}

TEST_CASE("sampling is deterministic in (dist, n, seed)") {
  const auto dist = DistributionSpec::pareto_1d(2.0);
  const DiscreteMeasure a = sample(dist, 1000, 7);
  const DiscreteMeasure b = sample(dist, 1000, 7);
  const DiscreteMeasure c = sample(dist, 1000, 8);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("pareto mean matches the closed form and quadrature") {
  // closed form q/(q-1) = 3; independent numeric check of the density
  // integral over [1, 1e6] (truncation error ~ 1e-3)
  const double numeric =
      integrate([](double t) { return t * 1.5 * std::pow(t, -2.5); }, 1.0,
                1e6, 1e-10, 200'000)
          .value;
  CHECK(numeric == doctest::Approx(3.0).epsilon(2e-3));

  const DiscreteMeasure s =
      sample(DistributionSpec::pareto_1d(1.5), 1'000'000, 1);
  double mean = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) mean += s.value1d(i);
  mean /= double(s.size());
  CHECK(std::abs(mean - 3.0) / 3.0 < 0.02);
}

TEST_CASE("inverse-cdf sampling matches the pareto cdf") {
  const double q = 1.5;
  for (const std::uint64_t seed : {11u, 12u, 13u}) {
    const DiscreteMeasure s =
        sample(DistributionSpec::pareto_1d(q), 100'000, seed);
    for (const double t : {2.0, 4.0, 8.0}) {
      double below = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s.value1d(i) <= t) below += 1.0;
      const double empirical = below / double(s.size());
      const double exact = 1.0 - std::pow(t, -q);
      CHECK(std::abs(empirical - exact) < 0.01);
    }
  }
}

TEST_CASE("stated supports hold for the special samplers") {
  const DiscreteMeasure mu =
      sample(DistributionSpec::appendixc_mu(4.5), 20'000, 3);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(mu.value1d(i) >= 0.0);
    CHECK(mu.value1d(i) <= 1.0);
  }
  const DiscreteMeasure nu =
      sample(DistributionSpec::appendixc_nu(9.0), 20'000, 3);
  for (std::size_t i = 0; i < nu.size(); ++i) CHECK(nu.value1d(i) >= 1.0);
  const DiscreteMeasure radial =
      sample(DistributionSpec::pareto_radial(2.5, 3), 5'000, 3);
  for (std::size_t i = 0; i < radial.size(); ++i) {
    auto p = radial.point(i);
    double norm = 0.0;
    for (const double c : p) norm += c * c;
    CHECK(std::sqrt(norm) >= 1.0 - 1e-12);
  }
}

TEST_CASE("eval_cost basics") {
  const auto quad = CostSpec::euclidean_power(2.0);
  const Point zero{0.0}, one{1.0};
  CHECK(quad.eval(zero, one) == doctest::Approx(1.0));
  CHECK(quad.eval(one, one) == 0.0);
  const auto abs1 = CostSpec::absolute_power_1d(1.0);
  CHECK(abs1.eval(Point{2.0}, Point{5.0}) == doctest::Approx(3.0));
}

TEST_CASE("marginal costs") {
  const auto lin = CostSpec::euclidean_power(1.0);
  CHECK(lin.marginal(Side::X, Point{3.0}) == doctest::Approx(6.0));
  const auto quad = CostSpec::euclidean_power(2.0);
  CHECK(quad.marginal(Side::X, Point{0.0, 0.0}) == 0.0);
}

TEST_CASE("marginal domination on random pairs") {
  Rng rng(99);
  for (const double p : {0.5, 1.0, 2.0, 3.0}) {
    const auto cost = CostSpec::euclidean_power(p);
    for (int k = 0; k < 2500; ++k) {
      const Point x{4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0};
      const Point y{4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0};
      CHECK(cost.eval(x, y) <=
            cost.marginal(Side::X, x) + cost.marginal(Side::Y, y));
    }
  }
}

TEST_CASE("moment evaluations") {
  const auto quad = CostSpec::euclidean_power(2.0);
  CHECK(moment(dirac(0.0), quad, Side::X, 3.0) == 0.0);

  const auto lin = CostSpec::euclidean_power(1.0);
  const DiscreteMeasure pm = uniform_on({1.0, -1.0});
  CHECK(moment(pm, lin, Side::X, 2.0) == doctest::Approx(4.0));

  // brute-force summation oracle on a random measure
  Rng rng(5);
  const DiscreteMeasure m = testutil::random_measure(rng, 17);
  double brute = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    brute += m.weight(i) * std::pow(lin.marginal(Side::X, m.point(i)), 1.7);
  CHECK(moment(m, lin, Side::X, 1.7) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("moment is monotone in the order when marginals exceed one") {
  const auto lin = CostSpec::euclidean_power(1.0);
  const DiscreteMeasure m = uniform_on({1.0, 2.0, -3.0});  // c_X in {2,4,6}
  CHECK(moment(m, lin, Side::X, 1.0) <= moment(m, lin, Side::X, 1.5));
  CHECK(moment(m, lin, Side::X, 1.5) <= moment(m, lin, Side::X, 2.5));
}

TEST_CASE("custom tables carry dominating marginals by construction") {
  const auto table = CostSpec::custom_table({{1.0, 4.0}, {2.0, 0.5}});
  CHECK(table.eval(Point{0.0}, Point{1.0}) == 4.0);
  CHECK(table.marginal(Side::X, Point{0.0}) == 4.0);  // row max
  CHECK(table.marginal(Side::Y, Point{0.0}) == 2.0);  // column max
  for (const double i : {0.0, 1.0})
    for (const double j : {0.0, 1.0})
      CHECK(table.eval(Point{i}, Point{j}) <=
            table.marginal(Side::X, Point{i}) +
                table.marginal(Side::Y, Point{j}));
  CHECK_THROWS_AS(table.eval(Point{2.0}, Point{0.0}), IndexOutOfRange);
}
