#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace otrates {

using Point = std::vector<double>;

// Finitely supported probability measure: support points (all of the same
// dimension, stored row-major) plus nonnegative weights summing to one.
// Immutable after construction; safe to share across threads.
class DiscreteMeasure {
 public:
  // Validates and normalizes. Weights must be nonnegative and sum to 1
  // within 1e-9; they are rescaled so the stored sum is 1 within 1e-12.
  // Throws DimensionMismatch or InvalidWeights.
  static DiscreteMeasure make(const std::vector<Point>& points,
                              const std::vector<double>& weights);

  // Same contract, flat row-major coordinates.
  static DiscreteMeasure make_flat(std::size_t dim, std::vector<double> coords,
                                   std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& coords() const { return coords_; }

  // Convenience for one-dimensional measures.
  double value1d(std::size_t i) const { return coords_[i * dim_]; }

  bool operator==(const DiscreteMeasure& other) const {
    return dim_ == other.dim_ && coords_ == other.coords_ &&
           weights_ == other.weights_;
  }

 private:
  DiscreteMeasure(std::size_t dim, std::vector<double> coords,
                  std::vector<double> weights)
      : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {}

  std::size_t dim_ = 1;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

// Point mass at a 1-d location.
DiscreteMeasure dirac(double x);

// Uniform weights on the given 1-d support points.
DiscreteMeasure uniform_on(const std::vector<double>& points);

}  // namespace otrates
