#include "otrates/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "otrates/error.hpp"

namespace otrates {

namespace {

// Transportation simplex state. Nodes 0..n-1 are sources, n..n+m-1 sinks;
// the basis is a spanning tree with exactly n + m - 1 arcs.
class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& supply,
                   const std::vector<double>& demand,
                   const std::vector<double>& cost_matrix)
      : n_(supply.size()),
        m_(demand.size()),
        cost_(cost_matrix),
        u_(n_, 0.0),
        v_(m_, 0.0),
        adjacency_(n_ + m_) {
    double max_c = 1.0;
    for (double c : cost_) max_c = std::max(max_c, std::abs(c));
    enter_tol_ = 1e-11 * max_c;
    build_northwest_basis(supply, demand);
    recompute_potentials();
  }

  void run() {
    const std::size_t bland_threshold = n_ + m_;
    std::size_t degenerate_run = 0;
    std::size_t cursor = 0;
    const std::size_t pivot_cap = 20'000'000;
    for (std::size_t pivots = 0;; ++pivots) {
      if (pivots > pivot_cap)
        throw NumericalFailure("pivot cap exceeded; unresolved degeneracy");
      const bool bland = degenerate_run >= bland_threshold;
      const long entering = find_entering(bland ? 0 : cursor);
      if (entering < 0) break;
      cursor = std::size_t(entering) + 1;
      const double theta = pivot(std::size_t(entering));
      if (theta > 0.0)
        degenerate_run = 0;
      else
        ++degenerate_run;
    }
  }

  TransportPlan extract_plan(const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu,
                             const CostSpec& cost) const {
    TransportPlan plan;
    plan.rows = n_;
    plan.cols = m_;
    for (std::size_t k = 0; k < arc_row_.size(); ++k) {
      if (arc_mass_[k] > 0.0) {
        plan.entries.push_back({std::uint32_t(arc_row_[k]),
                                std::uint32_t(arc_col_[k]), arc_mass_[k]});
      }
    }
    std::sort(plan.entries.begin(), plan.entries.end(),
              [](const PlanEntry& a, const PlanEntry& b) {
                return a.i != b.i ? a.i < b.i : a.j < b.j;
              });
    double value = 0.0;
    for (const PlanEntry& e : plan.entries)
      value += e.mass * cost.eval(mu, e.i, nu, e.j);
    plan.value = value;
    return plan;
  }

  DualPotentials extract_duals() const { return {u_, v_}; }

 private:
  void add_arc(std::size_t i, std::size_t j, double mass) {
    const std::size_t k = arc_row_.size();
    arc_row_.push_back(i);
    arc_col_.push_back(j);
    arc_mass_.push_back(mass);
    adjacency_[i].push_back(k);
    adjacency_[n_ + j].push_back(k);
  }

  void drop_arc(std::size_t k) {
    auto detach = [&](std::size_t node) {
      auto& list = adjacency_[node];
      list.erase(std::find(list.begin(), list.end(), k));
    };
    detach(arc_row_[k]);
    detach(n_ + arc_col_[k]);
    // swap-remove; fix adjacency references of the moved arc
    const std::size_t last = arc_row_.size() - 1;
    if (k != last) {
      for (std::size_t node : {arc_row_[last], n_ + arc_col_[last]}) {
        auto& list = adjacency_[node];
        *std::find(list.begin(), list.end(), last) = k;
      }
      arc_row_[k] = arc_row_[last];
      arc_col_[k] = arc_col_[last];
      arc_mass_[k] = arc_mass_[last];
    }
    arc_row_.pop_back();
    arc_col_.pop_back();
    arc_mass_.pop_back();
  }

  // Staircase initial basis: each step adds one arc and advances exactly one
  // index, yielding n + m - 1 arcs (degenerate zero-mass arcs included).
  // The last row/column flushes the full remainder so that rounding residue
  // from the min() bookkeeping cannot strand mass.
  void build_northwest_basis(std::vector<double> supply,
                             std::vector<double> demand) {
    std::size_t i = 0, j = 0;
    while (true) {
      double theta;
      if (j + 1 == m_)
        theta = supply[i];
      else if (i + 1 == n_)
        theta = demand[j];
      else
        theta = std::min(supply[i], demand[j]);
      add_arc(i, j, theta);
      supply[i] -= theta;
      demand[j] -= theta;
      if (i + 1 == n_ && j + 1 == m_) break;
      if (j + 1 == m_)
        ++i;
      else if (i + 1 == n_)
        ++j;
      else if (supply[i] <= 0.0)
        ++i;
      else
        ++j;
    }
  }

  // Tree traversal from source node 0 assigning u, v with u[0] = 0.
  void recompute_potentials() {
    stack_.clear();
    stack_.push_back(0);
    visited_.assign(n_ + m_, false);
    visited_[0] = true;
    u_[0] = 0.0;
    while (!stack_.empty()) {
      const std::size_t node = stack_.back();
      stack_.pop_back();
      for (const std::size_t k : adjacency_[node]) {
        const std::size_t row = arc_row_[k];
        const std::size_t col_node = n_ + arc_col_[k];
        const double c = cost_[row * m_ + arc_col_[k]];
        const std::size_t other = (node == row) ? col_node : row;
        if (visited_[other]) continue;
        visited_[other] = true;
        if (other == col_node)
          v_[arc_col_[k]] = c - u_[row];
        else
          u_[row] = c - v_[arc_col_[k]];
        stack_.push_back(other);
      }
    }
  }

  // First arc (row-major from `start`, wrapping) with reduced cost below
  // -enter_tol_; -1 when optimal.
  long find_entering(std::size_t start) const {
    const std::size_t total = n_ * m_;
    std::size_t idx = start >= total ? 0 : start;
    for (std::size_t scanned = 0; scanned < total; ++scanned) {
      const std::size_t i = idx / m_;
      const std::size_t j = idx - i * m_;
      if (cost_[idx] - u_[i] - v_[j] < -enter_tol_) return long(idx);
      if (++idx == total) idx = 0;
    }
    return -1;
  }

  // Applies one pivot with entering cell `idx`; returns the shifted mass.
  double pivot(std::size_t idx) {
    const std::size_t ei = idx / m_;
    const std::size_t ej = idx - ei * m_;

    // Path from source ei to sink n_+ej through the tree.
    parent_arc_.assign(n_ + m_, -1);
    visited_.assign(n_ + m_, false);
    stack_.clear();
    stack_.push_back(ei);
    visited_[ei] = true;
    const std::size_t target = n_ + ej;
    while (!stack_.empty() && !visited_[target]) {
      const std::size_t node = stack_.back();
      stack_.pop_back();
      for (const std::size_t k : adjacency_[node]) {
        const std::size_t other =
            (node == arc_row_[k]) ? n_ + arc_col_[k] : arc_row_[k];
        if (visited_[other]) continue;
        visited_[other] = true;
        parent_arc_[other] = long(k);
        if (other == target) break;
        stack_.push_back(other);
      }
    }
    if (!visited_[target])
      throw NumericalFailure("basis lost connectivity");

    // Walk back from the sink; arcs at even path positions lose mass.
    cycle_minus_.clear();
    cycle_plus_.clear();
    std::size_t node = target;
    bool minus = true;
    while (node != ei) {
      const std::size_t k = std::size_t(parent_arc_[node]);
      (minus ? cycle_minus_ : cycle_plus_).push_back(k);
      node = (node == n_ + arc_col_[k]) ? arc_row_[k] : n_ + arc_col_[k];
      minus = !minus;
    }

    double theta = std::numeric_limits<double>::infinity();
    for (const std::size_t k : cycle_minus_)
      theta = std::min(theta, arc_mass_[k]);
    std::size_t leaving = cycle_minus_.front();
    for (const std::size_t k : cycle_minus_) {
      if (arc_mass_[k] > theta) continue;
      if (arc_row_[k] < arc_row_[leaving] ||
          (arc_row_[k] == arc_row_[leaving] &&
           arc_col_[k] < arc_col_[leaving]))
        leaving = k;
    }

    for (const std::size_t k : cycle_minus_) arc_mass_[k] -= theta;
    for (const std::size_t k : cycle_plus_) arc_mass_[k] += theta;
    arc_mass_[leaving] = 0.0;
    drop_arc(leaving);
    add_arc(ei, ej, theta);
    recompute_potentials();
    return theta;
  }

  std::size_t n_, m_;
  const std::vector<double>& cost_;
  double enter_tol_;
  std::vector<double> u_, v_;
  std::vector<std::size_t> arc_row_, arc_col_;
  std::vector<double> arc_mass_;
  std::vector<std::vector<std::size_t>> adjacency_;
  // scratch
  std::vector<std::size_t> stack_;
  std::vector<bool> visited_;
  std::vector<long> parent_arc_;
  std::vector<std::size_t> cycle_minus_, cycle_plus_;
};

}  // namespace

SolveResult solve_discrete(const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, const CostSpec& cost,
                           std::size_t max_entries) {
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  if (n * m > max_entries)
    throw SizeCapExceeded("cost matrix would hold " + std::to_string(n * m) +
                          " entries, cap is " + std::to_string(max_entries));

  std::vector<double> cost_matrix(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      cost_matrix[i * m + j] = cost.eval(mu, i, nu, j);

  TransportSimplex simplex(mu.weights(), nu.weights(), cost_matrix);
  simplex.run();
  return {simplex.extract_plan(mu, nu, cost), simplex.extract_duals()};
}

double solve_1d_convex(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       double p) {
  if (mu.dim() != 1 || nu.dim() != 1)
    throw DimensionMismatch("solve_1d_convex requires 1-d supports");
  if (!(p >= 1.0)) throw DomainError("solve_1d_convex requires p >= 1");

  auto sorted_order = [](const DiscreteMeasure& m) {
    std::vector<std::size_t> order(m.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return m.value1d(a) < m.value1d(b);
    });
    return order;
  };
  const auto order_mu = sorted_order(mu);
  const auto order_nu = sorted_order(nu);

  double total = 0.0;
  std::size_t a = 0, b = 0;
  double rem_a = mu.weight(order_mu[0]);
  double rem_b = nu.weight(order_nu[0]);
  while (true) {
    const double mass = std::min(rem_a, rem_b);
    if (mass > 0.0)
      total += mass * std::pow(std::abs(mu.value1d(order_mu[a]) -
                                        nu.value1d(order_nu[b])),
                               p);
    rem_a -= mass;
    rem_b -= mass;
    if (rem_a <= rem_b) {
      if (++a == mu.size()) break;
      rem_a = mu.weight(order_mu[a]);
    } else {
      if (++b == nu.size()) break;
      rem_b = nu.weight(order_nu[b]);
    }
  }
  return total;
}

double brute_force_assignment(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu,
                              const CostSpec& cost) {
  const std::size_t n = mu.size();
  if (n != nu.size())
    throw DimensionMismatch("brute force requires equal support sizes");
  if (n > 8) throw TooLarge("brute force capped at n = 8");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(mu.weight(i) - 1.0 / double(n)) > 1e-12 ||
        std::abs(nu.weight(i) - 1.0 / double(n)) > 1e-12)
      throw InvalidWeights("brute force requires uniform weights");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      total += cost.eval(mu, i, nu, perm[i]);
    best = std::min(best, total / double(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

DualPotentials normalize_duals(const DualPotentials& duals,
                               const TransportPlan& plan,
                               const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, const CostSpec& cost,
                               double p_hat) {
  if (plan.entries.empty()) return duals;
  const PlanEntry* pivot = &plan.entries.front();
  double best = std::numeric_limits<double>::infinity();
  for (const PlanEntry& e : plan.entries) {
    const double score =
        std::pow(cost.marginal(Side::X, mu.point(e.i)), p_hat) +
        std::pow(cost.marginal(Side::Y, nu.point(e.j)), p_hat);
    if (score < best) {
      best = score;
      pivot = &e;
    }
  }
  const double t = duals.g[pivot->j];
  DualPotentials out = duals;
  for (double& fi : out.f) fi += t;
  for (double& gj : out.g) gj -= t;
  return out;
}

double dual_value(const DualPotentials& duals, const DiscreteMeasure& mu,
                  const DiscreteMeasure& nu) {
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    total += mu.weight(i) * duals.f[i];
  for (std::size_t j = 0; j < nu.size(); ++j)
    total += nu.weight(j) * duals.g[j];
  return total;
}

double plan_cost(const TransportPlan& plan, const DiscreteMeasure& mu,
                 const DiscreteMeasure& nu, const CostSpec& cost) {
  double total = 0.0;
  for (const PlanEntry& e : plan.entries)
    total += e.mass * cost.eval(mu, e.i, nu, e.j);
  return total;
}

double marginal_violation(const TransportPlan& plan, const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu) {
  std::vector<double> row(mu.size(), 0.0), col(nu.size(), 0.0);
  for (const PlanEntry& e : plan.entries) {
    row[e.i] += e.mass;
    col[e.j] += e.mass;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    worst = std::max(worst, std::abs(row[i] - mu.weight(i)));
  for (std::size_t j = 0; j < nu.size(); ++j)
    worst = std::max(worst, std::abs(col[j] - nu.weight(j)));
  return worst;
}

}  // namespace otrates
