#pragma once

#include <cstdint>
#include <vector>

#include "otrates/measure.hpp"
#include "otrates/rng.hpp"

namespace otrates::testutil {

// Random discrete measure with atoms in [-2, 2]^dim and weights bounded
// away from zero.
inline DiscreteMeasure random_measure(Rng& rng, std::size_t atoms,
                                      std::size_t dim = 1,
                                      bool uniform_weights = false,
                                      double scale = 2.0) {
  std::vector<double> coords(atoms * dim);
  for (double& c : coords) c = scale * (2.0 * rng.uniform01() - 1.0);
  std::vector<double> weights(atoms);
  if (uniform_weights) {
    for (double& w : weights) w = 1.0 / double(atoms);
  } else {
    double total = 0.0;
    for (double& w : weights) total += (w = 0.05 + rng.uniform01());
    for (double& w : weights) w /= total;
  }
  return DiscreteMeasure::make_flat(dim, std::move(coords),
                                    std::move(weights));
}

}  // namespace otrates::testutil
