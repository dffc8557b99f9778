#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "otrates/cost.hpp"
#include "otrates/measure.hpp"

namespace otrates {

struct PlanEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double mass = 0.0;
};

// Sparse coupling between two discrete measures. Basic solutions carry at
// most rows + cols - 1 entries, all with positive mass.
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<PlanEntry> entries;
  double value = 0.0;
};

// Dual feasible pair on the two supports: f_i + g_j <= c(x_i, y_j), with
// equality on the support of a companion optimal plan.
struct DualPotentials {
  std::vector<double> f;
  std::vector<double> g;
};

struct SolveResult {
  TransportPlan plan;
  DualPotentials duals;
};

// Exact discrete optimal transport via the network simplex on the bipartite
// transportation polytope. Pivot rule: first negative reduced cost scanned
// from a rotating cursor, switching to Bland's rule (lexicographic scan and
// tie-breaks) after rows + cols consecutive degenerate pivots. The dense
// cost matrix is materialized; instances with rows * cols > max_entries are
// refused with SizeCapExceeded.
SolveResult solve_discrete(const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, const CostSpec& cost,
                           std::size_t max_entries = 50'000'000);

// Cost of the monotone (quantile) coupling of two 1-d measures; equals the
// optimal value for costs |x-y|^p with p >= 1.
double solve_1d_convex(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       double p);

// Minimum over all permutations of the average assignment cost. Requires
// n = m <= 8 and uniform weights; test oracle for solve_discrete.
double brute_force_assignment(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu,
                              const CostSpec& cost);

// Shifts (f + t, g - t) so that g vanishes at the plan-support pair
// (i0, j0) minimizing c_X(x)^p_hat + c_Y(y)^p_hat (lexicographic
// tie-break). The dual objective is unchanged.
DualPotentials normalize_duals(const DualPotentials& duals,
                               const TransportPlan& plan,
                               const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, const CostSpec& cost,
                               double p_hat);

// sum_i w_i f_i + sum_j v_j g_j.
double dual_value(const DualPotentials& duals, const DiscreteMeasure& mu,
                  const DiscreteMeasure& nu);

// Recomputes sum m_ij c(x_i, y_j) from scratch.
double plan_cost(const TransportPlan& plan, const DiscreteMeasure& mu,
                 const DiscreteMeasure& nu, const CostSpec& cost);

// Max absolute mismatch between plan marginals and the measure weights.
double marginal_violation(const TransportPlan& plan, const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu);

}  // namespace otrates
