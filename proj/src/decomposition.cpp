#include "otrates/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "otrates/error.hpp"
#include "otrates/rng.hpp"

namespace otrates {

double default_offset(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const CostSpec& cost) {
  double min_marginal = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i)
    min_marginal =
        std::min(min_marginal, cost.marginal(Side::X, mu.point(i)));
  for (std::size_t j = 0; j < nu.size(); ++j)
    min_marginal =
        std::min(min_marginal, cost.marginal(Side::Y, nu.point(j)));
  return std::max(0.0, 1.0 - min_marginal);
}

LayerDecomposition layer_decompose(const TransportPlan& plan,
                                   const DiscreteMeasure& mu,
                                   const DiscreteMeasure& nu,
                                   const CostSpec& cost, double offset) {
  if (plan.rows != mu.size() || plan.cols != nu.size())
    throw DimensionMismatch("plan supports do not match the measures");

  std::vector<double> sx(mu.size()), sy(nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    sx[i] = cost.marginal(Side::X, mu.point(i)) + offset;
    if (sx[i] < 1.0)
      throw OffsetTooSmall("shifted marginal below 1 on the source support");
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    sy[j] = cost.marginal(Side::Y, nu.point(j)) + offset;
    if (sy[j] < 1.0)
      throw OffsetTooSmall("shifted marginal below 1 on the target support");
  }

  std::map<int, std::vector<PlanEntry>> buckets;
  for (const PlanEntry& e : plan.entries) {
    const int l = int(std::floor(std::log2(sx[e.i] + sy[e.j])));
    buckets[l].push_back(e);
  }

  // Merge layers below mass resolution into the nearest kept layer
  // (preferring the larger index so the radius bound stays valid).
  constexpr double kMinLayerMass = 1e-15;
  std::vector<int> kept;
  for (const auto& [l, entries] : buckets) {
    double mass = 0.0;
    for (const PlanEntry& e : entries) mass += e.mass;
    if (mass >= kMinLayerMass) kept.push_back(l);
  }
  if (kept.empty()) throw NumericalFailure("plan carries no mass");
  for (auto it = buckets.begin(); it != buckets.end();) {
    const int l = it->first;
    if (std::binary_search(kept.begin(), kept.end(), l)) {
      ++it;
      continue;
    }
    int best = kept.front();
    for (const int cand : kept) {
      const long dist = std::labs(long(cand) - long(l));
      const long best_dist = std::labs(long(best) - long(l));
      if (dist < best_dist || (dist == best_dist && cand > best)) best = cand;
    }
    auto& dst = buckets[best];
    dst.insert(dst.end(), it->second.begin(), it->second.end());
    it = buckets.erase(it);
  }

  LayerDecomposition decomp;
  decomp.offset = offset;
  for (auto& [l, entries] : buckets) {
    Layer layer;
    layer.index = l;
    layer.radius = std::ldexp(1.0, l + 1);
    double a_l = 0.0;
    for (const PlanEntry& e : entries) a_l += e.mass;
    layer.mass = a_l;

    std::vector<std::size_t> rows, cols;
    for (const PlanEntry& e : entries) {
      rows.push_back(e.i);
      cols.push_back(e.j);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

    auto local = [](const std::vector<std::size_t>& v, std::size_t x) {
      return std::size_t(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };

    TransportPlan sub;
    sub.rows = rows.size();
    sub.cols = cols.size();
    std::vector<double> row_w(rows.size(), 0.0), col_w(cols.size(), 0.0);
    for (const PlanEntry& e : entries) {
      const double mass = e.mass / a_l;
      sub.entries.push_back(
          {std::uint32_t(local(rows, e.i)), std::uint32_t(local(cols, e.j)),
           mass});
      row_w[local(rows, e.i)] += mass;
      col_w[local(cols, e.j)] += mass;
    }
    std::sort(sub.entries.begin(), sub.entries.end(),
              [](const PlanEntry& x, const PlanEntry& y) {
                return x.i != y.i ? x.i < y.i : x.j < y.j;
              });

    auto gather = [](const DiscreteMeasure& m,
                     const std::vector<std::size_t>& idx,
                     std::vector<double> weights) {
      std::vector<double> coords;
      coords.reserve(idx.size() * m.dim());
      for (const std::size_t i : idx) {
        auto p = m.point(i);
        coords.insert(coords.end(), p.begin(), p.end());
      }
      return DiscreteMeasure::make_flat(m.dim(), std::move(coords),
                                        std::move(weights));
    };
    layer.mu = gather(mu, rows, std::move(row_w));
    layer.nu = gather(nu, cols, std::move(col_w));
    double value = 0.0;
    for (const PlanEntry& e : sub.entries)
      value += e.mass * cost.eval(layer.mu, e.i, layer.nu, e.j);
    sub.value = value;
    layer.sub_plan = std::move(sub);
    layer.rows = std::move(rows);
    layer.cols = std::move(cols);
    decomp.layers.push_back(std::move(layer));
  }
  return decomp;
}

namespace {

DiscreteMeasure concat_measures(const std::vector<DiscreteMeasure>& parts,
                                const std::vector<double>& masses,
                                std::vector<std::size_t>& offsets) {
  const std::size_t dim = parts.front().dim();
  std::vector<double> coords, weights;
  offsets.assign(parts.size() + 1, 0);
  for (std::size_t l = 0; l < parts.size(); ++l) {
    if (parts[l].dim() != dim)
      throw DimensionMismatch("component dimensions differ");
    offsets[l] = weights.size();
    coords.insert(coords.end(), parts[l].coords().begin(),
                  parts[l].coords().end());
    for (std::size_t i = 0; i < parts[l].size(); ++i)
      weights.push_back(masses[l] * parts[l].weight(i));
    offsets[l + 1] = weights.size();
  }
  return DiscreteMeasure::make_flat(dim, std::move(coords),
                                    std::move(weights));
}

}  // namespace

CompositionOutput composition_plan(const CompositionInput& input,
                                   const CostSpec& cost) {
  const std::size_t L = input.a.size();
  if (input.b.size() != L || input.mus.size() != L || input.nus.size() != L ||
      input.sub_plans.size() != L)
    throw LayerMismatch("component lists have inconsistent lengths");
  const double sum_a = std::accumulate(input.a.begin(), input.a.end(), 0.0);
  const double sum_b = std::accumulate(input.b.begin(), input.b.end(), 0.0);
  if (std::abs(sum_a - sum_b) > 1e-10 || std::abs(sum_a - 1.0) > 1e-10)
    throw MassMismatch("component masses must both sum to one");

  std::vector<std::size_t> off_mu, off_nu;
  CompositionOutput out{concat_measures(input.mus, input.a, off_mu),
                        concat_measures(input.nus, input.b, off_nu),
                        TransportPlan{}};

  std::map<std::pair<std::uint32_t, std::uint32_t>, double> cells;

  // Matched part: min(a_l, b_l) pi_l.
  for (std::size_t l = 0; l < L; ++l) {
    const double matched = std::min(input.a[l], input.b[l]);
    if (matched <= 0.0) continue;
    const TransportPlan& sub = input.sub_plans[l];
    if (sub.rows != input.mus[l].size() || sub.cols != input.nus[l].size())
      throw LayerMismatch("sub-plan does not couple its components");
    for (const PlanEntry& e : sub.entries)
      cells[{std::uint32_t(off_mu[l] + e.i), std::uint32_t(off_nu[l] + e.j)}] +=
          matched * e.mass;
  }

  // Residual part: normalized product of the unmatched marginals.
  double residual = 0.0;
  for (std::size_t l = 0; l < L; ++l)
    residual += std::abs(input.a[l] - input.b[l]);
  if (residual > 0.0) {
    std::vector<std::pair<std::uint32_t, double>> rest_mu, rest_nu;
    for (std::size_t l = 0; l < L; ++l) {
      const double extra_a = input.a[l] - std::min(input.a[l], input.b[l]);
      const double extra_b = input.b[l] - std::min(input.a[l], input.b[l]);
      if (extra_a > 0.0)
        for (std::size_t i = 0; i < input.mus[l].size(); ++i)
          if (input.mus[l].weight(i) > 0.0)
            rest_mu.push_back({std::uint32_t(off_mu[l] + i),
                               extra_a * input.mus[l].weight(i)});
      if (extra_b > 0.0)
        for (std::size_t j = 0; j < input.nus[l].size(); ++j)
          if (input.nus[l].weight(j) > 0.0)
            rest_nu.push_back({std::uint32_t(off_nu[l] + j),
                               extra_b * input.nus[l].weight(j)});
    }
    const double scale = 2.0 / residual;
    for (const auto& [i, wi] : rest_mu)
      for (const auto& [j, wj] : rest_nu) cells[{i, j}] += scale * wi * wj;
  }

  TransportPlan plan;
  plan.rows = out.mu.size();
  plan.cols = out.nu.size();
  double value = 0.0;
  for (const auto& [key, mass] : cells) {
    if (mass <= 0.0) continue;
    plan.entries.push_back({key.first, key.second, mass});
    value += mass * cost.eval(out.mu, key.first, out.nu, key.second);
  }
  plan.value = value;
  out.plan = std::move(plan);
  return out;
}

double composition_bound(const std::vector<double>& a,
                         const std::vector<double>& b,
                         const std::vector<double>& sub_values,
                         const std::vector<double>& radii) {
  const std::size_t L = a.size();
  if (b.size() != L || sub_values.size() != L || radii.size() != L)
    throw LayerMismatch("composition_bound lists have inconsistent lengths");
  double matched = 0.0, residual = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    matched += std::min(a[l], b[l]) * sub_values[l];
    residual += std::abs(a[l] - b[l]) * radii[l];
  }
  return matched + 4.0 * residual;
}

TwoStageSample two_stage_sample(const LayerDecomposition& decomp, Side side,
                                std::size_t n, std::uint64_t seed) {
  const std::size_t L = decomp.layers.size();
  std::vector<double> cum(L, 0.0);
  double acc = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    acc += decomp.layers[l].mass;
    cum[l] = acc;
  }

  // Lexicographically sorted atoms with cumulative weights per layer.
  std::vector<std::vector<std::size_t>> atom_order(L);
  std::vector<std::vector<double>> atom_cum(L);
  const std::size_t dim =
      (side == Side::X ? decomp.layers.front().mu : decomp.layers.front().nu)
          .dim();
  for (std::size_t l = 0; l < L; ++l) {
    const DiscreteMeasure& part =
        side == Side::X ? decomp.layers[l].mu : decomp.layers[l].nu;
    auto& order = atom_order[l];
    order.resize(part.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) {
                auto px = part.point(x), py = part.point(y);
                return std::lexicographical_compare(px.begin(), px.end(),
                                                    py.begin(), py.end());
              });
    auto& cw = atom_cum[l];
    cw.resize(part.size());
    double s = 0.0;
    for (std::size_t k = 0; k < part.size(); ++k) {
      s += part.weight(order[k]);
      cw[k] = s;
    }
  }

  Rng rng(seed);
  TwoStageSample result{std::vector<std::size_t>(L, 0),
                        std::vector<std::optional<DiscreteMeasure>>(L),
                        dirac(0.0)};
  std::vector<double> pooled_coords;
  pooled_coords.reserve(n * dim);
  std::vector<std::vector<double>> layer_coords(L);

  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform01() * acc;
    std::size_t l =
        std::size_t(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (l >= L) l = L - 1;
    const DiscreteMeasure& part =
        side == Side::X ? decomp.layers[l].mu : decomp.layers[l].nu;
    const double w = rng.uniform01() * atom_cum[l].back();
    std::size_t pos = std::size_t(std::lower_bound(atom_cum[l].begin(),
                                                   atom_cum[l].end(), w) -
                                  atom_cum[l].begin());
    if (pos >= part.size()) pos = part.size() - 1;
    const auto point = part.point(atom_order[l][pos]);
    ++result.counts[l];
    pooled_coords.insert(pooled_coords.end(), point.begin(), point.end());
    layer_coords[l].insert(layer_coords[l].end(), point.begin(), point.end());
  }

  for (std::size_t l = 0; l < L; ++l) {
    if (result.counts[l] == 0) continue;
    std::vector<double> w(result.counts[l], 1.0 / double(result.counts[l]));
    result.per_layer[l] = DiscreteMeasure::make_flat(
        dim, std::move(layer_coords[l]), std::move(w));
  }
  std::vector<double> pooled_w(n, 1.0 / double(n));
  result.pooled = DiscreteMeasure::make_flat(dim, std::move(pooled_coords),
                                             std::move(pooled_w));
  return result;
}

double empirical_composite_bound(const std::vector<std::size_t>& counts_mu,
                                 const std::vector<std::size_t>& counts_nu,
                                 const std::vector<double>& sub_values,
                                 const std::vector<double>& radii,
                                 std::size_t n, std::size_t m) {
  const std::size_t L = counts_mu.size();
  if (counts_nu.size() != L || sub_values.size() != L || radii.size() != L)
    throw LayerMismatch("layer index sets are inconsistent");
  double matched = 0.0, residual = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    const double fn = double(counts_mu[l]) / double(n);
    const double fm = double(counts_nu[l]) / double(m);
    if (counts_mu[l] > 0 && counts_nu[l] > 0)
      matched += std::min(fn, fm) * sub_values[l];
    residual += radii[l] * std::abs(fn - fm);
  }
  return matched + 4.0 * residual;
}

EmpiricalCompositeReport empirical_composite_check(
    const LayerDecomposition& decomp, std::size_t n, std::size_t m,
    const CostSpec& cost, std::uint64_t seed) {
  const TwoStageSample sample_mu =
      two_stage_sample(decomp, Side::X, n, derive_stream(seed, {0x5eedu, 1}));
  const TwoStageSample sample_nu =
      two_stage_sample(decomp, Side::Y, m, derive_stream(seed, {0x5eedu, 2}));

  const std::size_t L = decomp.layers.size();
  EmpiricalCompositeReport report;
  report.counts_mu = sample_mu.counts;
  report.counts_nu = sample_nu.counts;
  report.sub_values.assign(L, 0.0);
  std::vector<double> radii(L);
  for (std::size_t l = 0; l < L; ++l) {
    radii[l] = decomp.layers[l].radius;
    if (sample_mu.counts[l] > 0 && sample_nu.counts[l] > 0)
      report.sub_values[l] = solve_discrete(*sample_mu.per_layer[l],
                                            *sample_nu.per_layer[l], cost)
                                 .plan.value;
  }
  report.bound = empirical_composite_bound(
      report.counts_mu, report.counts_nu, report.sub_values, radii, n, m);
  report.exact_pooled =
      solve_discrete(sample_mu.pooled, sample_nu.pooled, cost).plan.value;
  return report;
}

namespace {

double euclidean_distance(std::span<const double> x,
                          std::span<const double> y) {
  double sq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    sq += d * d;
  }
  return std::sqrt(sq);
}

double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() == 1) return solve_1d_convex(a, b, 1.0);
  return solve_discrete(a, b, CostSpec::euclidean_power(1.0)).plan.value;
}

}  // namespace

IpmCheck ipm_composition_check(const LayerDecomposition& decomp,
                               const DiscreteMeasure& mu, const CostSpec& cost,
                               const TwoStageSample& sample, std::size_t n) {
  // Pinning point: support point of mu with the smallest marginal cost.
  std::size_t pin = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double m = cost.marginal(Side::X, mu.point(i));
    if (m < best) {
      best = m;
      pin = i;
    }
  }
  const auto x0 = mu.point(pin);

  IpmCheck check;
  check.lhs = wasserstein1(mu, sample.pooled);
  double rhs = 0.0;
  for (std::size_t l = 0; l < decomp.layers.size(); ++l) {
    const Layer& layer = decomp.layers[l];
    double envelope = 0.0;  // max distance from the pinning point
    for (std::size_t i = 0; i < layer.mu.size(); ++i)
      envelope = std::max(envelope,
                          euclidean_distance(layer.mu.point(i), x0));
    const double frac = double(sample.counts[l]) / double(n);
    if (sample.counts[l] > 0)
      rhs += layer.mass * wasserstein1(layer.mu, *sample.per_layer[l]);
    rhs += envelope * std::abs(layer.mass - frac);
  }
  check.rhs = rhs;
  return check;
}

std::size_t EnvelopeSequence::pivot_at(std::size_t n) const {
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < b.size(); ++l) {
    const double nb = double(n) * b[l];
    const double score = std::max(nb, 1.0 / nb);
    if (score < best_score) {
      best_score = score;
      best = l;
    }
  }
  return best;
}

double EnvelopeSequence::rho_at(std::size_t n) const {
  const double nb = double(n) * b[pivot_at(n)];
  return std::max(nb, 1.0 / nb);
}

EnvelopeSequence make_envelope(std::vector<double> b,
                               const std::vector<double>& a, std::size_t n) {
  if (b.size() != a.size())
    throw EnvelopeViolation("envelope length does not match the masses");
  for (std::size_t l = 0; l < b.size(); ++l) {
    if (b[l] < a[l])
      throw EnvelopeViolation("envelope fails to dominate the masses");
    if (l > 0 && b[l] > b[l - 1])
      throw EnvelopeViolation("envelope must be non-increasing");
  }
  EnvelopeSequence env{std::move(b), 1.0};
  env.rho = env.rho_at(n);
  return env;
}

double canonical_envelope_k(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, const CostSpec& cost,
                            double s_eps, double offset) {
  double mom = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    mom += mu.weight(i) *
           std::pow(cost.marginal(Side::X, mu.point(i)) + offset, s_eps);
  for (std::size_t j = 0; j < nu.size(); ++j)
    mom += nu.weight(j) *
           std::pow(cost.marginal(Side::Y, nu.point(j)) + offset, s_eps);
  return std::pow(4.0, s_eps) * mom;
}

double canonical_envelope_b(double k, double s_eps, long l) {
  return k * std::pow(2.0, -double(l) * s_eps);
}

long canonical_pivot(double k, double s_eps, std::size_t n) {
  return long(std::ceil(std::log2(k * double(n)) / s_eps));
}

double canonical_rho(double s_eps) { return std::pow(2.0, s_eps); }

}  // namespace otrates
