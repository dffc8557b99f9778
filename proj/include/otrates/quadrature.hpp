#pragma once

#include <cstddef>
#include <functional>

namespace otrates {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

// Adaptive Gauss-Kronrod 7/15 integration of f over [a, b]. Intervals are
// bisected until the local error estimate meets the (relative) tolerance;
// throws QuadratureFailure when the interval budget is exhausted first.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double rel_tol = 1e-8,
                     std::size_t max_intervals = 50'000);

}  // namespace otrates
