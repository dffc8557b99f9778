#include "otrates/cost.hpp"

#include <algorithm>
#include <cmath>

#include "otrates/error.hpp"

namespace otrates {

CostSpec CostSpec::euclidean_power(double p, double offset_x,
                                   double offset_y) {
  if (!(p > 0.0)) throw DomainError("euclidean_power requires p > 0");
  CostSpec c;
  c.kind_ = Kind::EuclideanPower;
  c.p_ = p;
  c.offset_x_ = offset_x;
  c.offset_y_ = offset_y;
  return c;
}

CostSpec CostSpec::absolute_power_1d(double p) {
  if (!(p > 0.0)) throw DomainError("absolute_power_1d requires p > 0");
  CostSpec c;
  c.kind_ = Kind::AbsolutePower1d;
  c.p_ = p;
  return c;
}

CostSpec CostSpec::custom_table(std::vector<std::vector<double>> table) {
  if (table.empty() || table.front().empty())
    throw DomainError("custom_table must be non-empty");
  const std::size_t cols = table.front().size();
  std::vector<double> row_max(table.size(), 0.0);
  std::vector<double> col_max(cols, 0.0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].size() != cols)
      throw DimensionMismatch("ragged cost table");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!(table[i][j] >= 0.0))
        throw DomainError("cost entries must be nonnegative");
      row_max[i] = std::max(row_max[i], table[i][j]);
      col_max[j] = std::max(col_max[j], table[i][j]);
    }
  }
  return custom_table(std::move(table), std::move(row_max),
                      std::move(col_max));
}

CostSpec CostSpec::custom_table(std::vector<std::vector<double>> table,
                                std::vector<double> marginal_x,
                                std::vector<double> marginal_y) {
  CostSpec c;
  c.kind_ = Kind::CustomTable;
  c.table_ = std::move(table);
  c.table_marginal_x_ = std::move(marginal_x);
  c.table_marginal_y_ = std::move(marginal_y);
  if (c.table_marginal_x_.size() != c.table_.size() ||
      c.table_marginal_y_.size() != c.table_.front().size())
    throw DimensionMismatch("marginal lengths do not match the table");
  return c;
}

namespace {

std::size_t table_index(std::span<const double> x, std::size_t bound,
                        const char* what) {
  if (x.size() != 1)
    throw DimensionMismatch("table costs expect 1-d index points");
  const double v = x[0];
  const auto i = static_cast<long long>(std::llround(v));
  if (i < 0 || static_cast<std::size_t>(i) >= bound ||
      std::abs(v - double(i)) > 1e-9)
    throw IndexOutOfRange(std::string(what) + " index out of range");
  return static_cast<std::size_t>(i);
}

}  // namespace

double CostSpec::eval(std::span<const double> x,
                      std::span<const double> y) const {
  switch (kind_) {
    case Kind::EuclideanPower: {
      if (x.size() != y.size())
        throw DimensionMismatch("point dimensions differ");
      double sq = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        sq += d * d;
      }
      return std::pow(sq, 0.5 * p_);
    }
    case Kind::AbsolutePower1d: {
      if (x.size() != 1 || y.size() != 1)
        throw DimensionMismatch("absolute_power_1d expects 1-d points");
      return std::pow(std::abs(x[0] - y[0]), p_);
    }
    case Kind::CustomTable: {
      const std::size_t i = table_index(x, table_.size(), "row");
      const std::size_t j = table_index(y, table_.front().size(), "column");
      return table_[i][j];
    }
  }
  return 0.0;
}

double CostSpec::marginal(Side side, std::span<const double> x) const {
  switch (kind_) {
    case Kind::EuclideanPower: {
      double sq = 0.0;
      for (double c : x) sq += c * c;
      const double base = std::pow(2.0, p_) * std::pow(sq, 0.5 * p_);
      return base + (side == Side::X ? offset_x_ : offset_y_);
    }
    case Kind::AbsolutePower1d: {
      if (x.size() != 1)
        throw DimensionMismatch("absolute_power_1d expects 1-d points");
      return std::pow(2.0, p_) * std::pow(std::abs(x[0]), p_);
    }
    case Kind::CustomTable: {
      if (side == Side::X)
        return table_marginal_x_[table_index(x, table_marginal_x_.size(),
                                             "row")];
      return table_marginal_y_[table_index(x, table_marginal_y_.size(),
                                           "column")];
    }
  }
  return 0.0;
}

double moment(const DiscreteMeasure& measure, const CostSpec& cost, Side side,
              double order) {
  if (!(order > 0.0)) throw DomainError("moment order must be positive");
  double acc = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i)
    acc += measure.weight(i) *
           std::pow(cost.marginal(side, measure.point(i)), order);
  return acc;
}

}  // namespace otrates
