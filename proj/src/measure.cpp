#include "otrates/measure.hpp"

#include <cmath>
#include <string>

#include "otrates/error.hpp"

namespace otrates {

namespace {

constexpr double kAcceptTol = 1e-9;   // pre-normalization acceptance window
constexpr double kSumTol = 1e-12;     // post-normalization invariant

void validate_and_normalize(std::size_t dim, const std::vector<double>& coords,
                            std::vector<double>& weights) {
  if (dim == 0) throw DimensionMismatch("point dimension must be >= 1");
  if (weights.empty()) throw InvalidWeights("measure needs at least one atom");
  if (coords.size() != dim * weights.size())
    throw DimensionMismatch("points/weights lengths do not match");
  for (double c : coords)
    if (!std::isfinite(c))
      throw DimensionMismatch("coordinates must be finite");

  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidWeights("negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kAcceptTol)
    throw InvalidWeights("weights sum to " + std::to_string(sum) +
                         ", outside [1-1e-9, 1+1e-9]");
  for (double& w : weights) w /= sum;

  double check = 0.0;
  for (double w : weights) check += w;
  if (std::abs(check - 1.0) > kSumTol)
    throw InvalidWeights("normalization failed to reach 1e-12 tolerance");
}

}  // namespace

DiscreteMeasure DiscreteMeasure::make(const std::vector<Point>& points,
                                      const std::vector<double>& weights) {
  if (points.empty()) throw InvalidWeights("measure needs at least one atom");
  const std::size_t dim = points.front().size();
  std::vector<double> coords;
  coords.reserve(points.size() * dim);
  for (const Point& p : points) {
    if (p.size() != dim)
      throw DimensionMismatch("heterogeneous point dimensions");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return make_flat(dim, std::move(coords), weights);
}

DiscreteMeasure DiscreteMeasure::make_flat(std::size_t dim,
                                           std::vector<double> coords,
                                           std::vector<double> weights) {
  validate_and_normalize(dim, coords, weights);
  return DiscreteMeasure(dim, std::move(coords), std::move(weights));
}

DiscreteMeasure dirac(double x) {
  return DiscreteMeasure::make_flat(1, {x}, {1.0});
}

DiscreteMeasure uniform_on(const std::vector<double>& points) {
  std::vector<double> weights(points.size(), 1.0 / double(points.size()));
  return DiscreteMeasure::make_flat(1, points, std::move(weights));
}

}  // namespace otrates
