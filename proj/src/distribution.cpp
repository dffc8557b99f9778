#include "otrates/distribution.hpp"

#include <cmath>

#include "otrates/error.hpp"
#include "otrates/rng.hpp"

namespace otrates {

DistributionSpec DistributionSpec::uniform_cube(std::size_t d) {
  if (d < 1) throw DomainError("uniform_cube requires d >= 1");
  DistributionSpec s;
  s.kind = Kind::UniformCube;
  s.d = d;
  return s;
}

DistributionSpec DistributionSpec::uniform_two_point(double x0, double x1) {
  DistributionSpec s;
  s.kind = Kind::UniformTwoPoint;
  s.x0 = x0;
  s.x1 = x1;
  return s;
}

DistributionSpec DistributionSpec::point_mass(double y) {
  DistributionSpec s;
  s.kind = Kind::PointMass;
  s.x0 = y;
  return s;
}

DistributionSpec DistributionSpec::pareto_radial(double q, std::size_t d) {
  if (!(q > 0.0) || d < 1)
    throw DomainError("pareto_radial requires q > 0 and d >= 1");
  DistributionSpec s;
  s.kind = Kind::ParetoRadial;
  s.q = q;
  s.d = d;
  return s;
}

DistributionSpec DistributionSpec::pareto_1d(double q) {
  if (!(q > 0.0)) throw DomainError("pareto_1d requires q > 0");
  DistributionSpec s;
  s.kind = Kind::Pareto1d;
  s.q = q;
  return s;
}

DistributionSpec DistributionSpec::appendixc_mu(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("appendixc_mu requires alpha > 0");
  DistributionSpec s;
  s.kind = Kind::CompactBeta;
  s.alpha = alpha;
  return s;
}

DistributionSpec DistributionSpec::appendixc_nu(double beta) {
  if (!(beta > 0.0)) throw DomainError("appendixc_nu requires beta > 0");
  DistributionSpec s;
  s.kind = Kind::ParetoTailNu;
  s.beta = beta;
  return s;
}

DiscreteMeasure sample(const DistributionSpec& dist, std::size_t n,
                       std::uint64_t seed) {
  if (n < 1) throw DomainError("sample requires n >= 1");
  const std::size_t d = dist.dim();
  std::vector<double> coords(n * d);
  Rng rng(seed);

  switch (dist.kind) {
    case DistributionSpec::Kind::UniformCube:
      for (double& c : coords) c = rng.uniform01();
      break;
    case DistributionSpec::Kind::UniformTwoPoint:
      for (std::size_t i = 0; i < n; ++i)
        coords[i] = rng.uniform01() < 0.5 ? dist.x0 : dist.x1;
      break;
    case DistributionSpec::Kind::PointMass:
      for (std::size_t i = 0; i < n; ++i) coords[i] = dist.x0;
      break;
    case DistributionSpec::Kind::Pareto1d:
      // inverse cdf of 1 - t^{-q}: t = u^{-1/q}
      for (std::size_t i = 0; i < n; ++i)
        coords[i] = std::pow(rng.uniform_open01(), -1.0 / dist.q);
      break;
    case DistributionSpec::Kind::CompactBeta:
      // inverse cdf of 1 - (1-t)^alpha on [0,1]: t = 1 - (1-u)^{1/alpha}
      for (std::size_t i = 0; i < n; ++i)
        coords[i] =
            1.0 - std::pow(1.0 - rng.uniform_open01(), 1.0 / dist.alpha);
      break;
    case DistributionSpec::Kind::ParetoTailNu:
      // inverse cdf of 1 - t^{-beta} on [1,inf): t = (1-u)^{-1/beta}
      for (std::size_t i = 0; i < n; ++i)
        coords[i] = std::pow(1.0 - rng.uniform_open01(), -1.0 / dist.beta);
      break;
    case DistributionSpec::Kind::ParetoRadial:
      for (std::size_t i = 0; i < n; ++i) {
        const double r = std::pow(rng.uniform_open01(), -1.0 / dist.q);
        double norm_sq = 0.0;
        double* row = coords.data() + i * d;
        for (std::size_t k = 0; k < d; ++k) {
          row[k] = rng.normal();
          norm_sq += row[k] * row[k];
        }
        const double scale = r / std::sqrt(norm_sq);
        for (std::size_t k = 0; k < d; ++k) row[k] *= scale;
      }
      break;
  }

  std::vector<double> weights(n, 1.0 / double(n));
  return DiscreteMeasure::make_flat(d, std::move(coords), std::move(weights));
}

}  // namespace otrates
