#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "otrates/measure.hpp"

namespace otrates {

// Reference distributions used by the samplers and rate experiments.
//
//  - uniform_cube(d):         uniform on [0,1]^d
//  - uniform_two_point(a,b):  mass 1/2 on each of two 1-d locations
//  - point_mass(y):           degenerate at a 1-d location
//  - pareto_radial(q,d):      density ~ |x|^{-q-d} 1(|x| >= 1); radius by
//                             inverse cdf, direction uniform on the sphere
//  - pareto_1d(q):            cdf 1 - t^{-q} on [1, inf)
//  - appendixc_mu(alpha):     cdf 1 - (1 - (1 ^ t))^alpha on [0, 1]
//  - appendixc_nu(beta):      cdf 1 - (1 v t)^{-beta} on [1, inf)
struct DistributionSpec {
  enum class Kind {
    UniformCube,
    UniformTwoPoint,
    PointMass,
    ParetoRadial,
    Pareto1d,
    CompactBeta,   // appendixc_mu
    ParetoTailNu,  // appendixc_nu
  };

  static DistributionSpec uniform_cube(std::size_t d);
  static DistributionSpec uniform_two_point(double x0, double x1);
  static DistributionSpec point_mass(double y);
  static DistributionSpec pareto_radial(double q, std::size_t d);
  static DistributionSpec pareto_1d(double q);
  static DistributionSpec appendixc_mu(double alpha);
  static DistributionSpec appendixc_nu(double beta);

  std::size_t dim() const { return d; }

  Kind kind = Kind::Pareto1d;
  std::size_t d = 1;
  double q = 1.0;       // tail index (pareto kinds)
  double alpha = 1.0;   // appendixc_mu shape
  double beta = 1.0;    // appendixc_nu shape
  double x0 = 0.0;      // two-point / point-mass locations
  double x1 = 0.0;
};

// Draws n i.i.d. points and returns the empirical measure with uniform
// weights 1/n. Deterministic for fixed (dist, n, seed).
DiscreteMeasure sample(const DistributionSpec& dist, std::size_t n,
                       std::uint64_t seed);

}  // namespace otrates
