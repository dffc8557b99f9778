#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "otrates/measure.hpp"

namespace otrates {

enum class Side { X, Y };

// Ground cost c together with dominating marginal costs c_X, c_Y such that
// c(x,y) <= c_X(x) + c_Y(y) on every evaluated pair.
//
//  - euclidean_power(p):    c(x,y) = |x-y|_2^p,  c_X = c_Y = 2^p |x|^p
//  - absolute_power_1d(p):  c(x,y) = |x-y|^p in 1-d, same marginals
//  - custom_table(C):       c(i,j) = C[i][j]; points carry the row/column
//                           index as their single coordinate. Marginals
//                           default to row-max / column-max, which dominate
//                           the table by construction.
class CostSpec {
 public:
  enum class Kind { EuclideanPower, AbsolutePower1d, CustomTable };

  static CostSpec euclidean_power(double p, double offset_x = 0.0,
                                  double offset_y = 0.0);
  static CostSpec absolute_power_1d(double p);
  static CostSpec custom_table(std::vector<std::vector<double>> table);
  static CostSpec custom_table(std::vector<std::vector<double>> table,
                               std::vector<double> marginal_x,
                               std::vector<double> marginal_y);

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }

  // c(x, y). Throws IndexOutOfRange for table lookups outside the matrix
  // and DimensionMismatch for incompatible point dimensions.
  double eval(std::span<const double> x, std::span<const double> y) const;

  // c_X(x) or c_Y(y).
  double marginal(Side side, std::span<const double> x) const;

  double eval(const DiscreteMeasure& mu, std::size_t i,
              const DiscreteMeasure& nu, std::size_t j) const {
    return eval(mu.point(i), nu.point(j));
  }

 private:
  CostSpec() = default;

  Kind kind_ = Kind::EuclideanPower;
  double p_ = 1.0;
  double offset_x_ = 0.0;
  double offset_y_ = 0.0;
  std::vector<std::vector<double>> table_;
  std::vector<double> table_marginal_x_;
  std::vector<double> table_marginal_y_;
};

// Weighted marginal-cost moment: sum_i w_i * marginal(side, x_i)^order.
double moment(const DiscreteMeasure& measure, const CostSpec& cost, Side side,
              double order);

}  // namespace otrates
