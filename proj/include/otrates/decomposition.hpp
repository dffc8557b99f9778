#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "otrates/cost.hpp"
#include "otrates/measure.hpp"
#include "otrates/solver.hpp"

namespace otrates {

// One dyadic band of a layered plan decomposition. The sub-plan couples the
// compacted conditional marginals mu and nu; `rows`/`cols` map the compacted
// atoms back to the original supports.
struct Layer {
  int index = 0;        // dyadic index l
  double mass = 0.0;    // a_l = pi(A_l)
  double radius = 0.0;  // c_l = 2^{l+1}
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  TransportPlan sub_plan;  // normalized: masses sum to 1
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

struct LayerDecomposition {
  std::vector<Layer> layers;  // ascending dyadic index
  double offset = 0.0;        // added to both marginal costs before layering
};

// Smallest offset making every shifted marginal cost >= 1 on the supports.
double default_offset(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const CostSpec& cost);

// Partitions the plan by the dyadic bands
//   2^l <= (c_X(x) + offset) + (c_Y(y) + offset) < 2^{l+1},
// i.e. l = floor(log2 of the shifted pair sum). Empty layers are omitted;
// layers with mass below 1e-15 are merged into the nearest kept layer.
// Throws OffsetTooSmall when a shifted marginal is below 1 on some support
// point.
LayerDecomposition layer_decompose(const TransportPlan& plan,
                                   const DiscreteMeasure& mu,
                                   const DiscreteMeasure& nu,
                                   const CostSpec& cost, double offset);

// Inputs of the constructive composite plan: component masses a, b, the
// component measures, and sub-plans (consulted only where min(a_l,b_l) > 0;
// an empty plan is accepted elsewhere).
struct CompositionInput {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<DiscreteMeasure> mus;
  std::vector<DiscreteMeasure> nus;
  std::vector<TransportPlan> sub_plans;
};

struct CompositionOutput {
  DiscreteMeasure mu;  // sum_l a_l mu_l on the concatenated support
  DiscreteMeasure nu;  // sum_l b_l nu_l
  TransportPlan plan;  // feasible coupling of the two
};

// Builds the explicit feasible plan: the matched part sums
// min(a_l, b_l) * pi_l, and the residual marginals are coupled by their
// normalized product (empty when a = b). Throws MassMismatch when the mass
// vectors disagree or do not sum to one.
CompositionOutput composition_plan(const CompositionInput& input,
                                   const CostSpec& cost);

// sum_l min(a_l,b_l) T_l + 4 sum_l |a_l - b_l| c_l.
double composition_bound(const std::vector<double>& a,
                         const std::vector<double>& b,
                         const std::vector<double>& sub_values,
                         const std::vector<double>& radii);

// Two-stage empirical sample of one side of a decomposition: layer counts
// are multinomial in the layer masses, then each layer is resampled by
// cumulative-weight inversion over its lexicographically sorted atoms. The
// pooled measure has exactly n atoms of weight 1/n and is distributed as an
// i.i.d. n-sample of the composite measure.
struct TwoStageSample {
  std::vector<std::size_t> counts;
  std::vector<std::optional<DiscreteMeasure>> per_layer;
  DiscreteMeasure pooled;
};

TwoStageSample two_stage_sample(const LayerDecomposition& decomp, Side side,
                                std::size_t n, std::uint64_t seed);

// Right-hand side of the empirical composite bound:
//   sum_l min(N_l/n, M_l/m) T_l + 4 sum_l c_l |N_l/n - M_l/m|,
// where T_l = 0 whenever N_l M_l = 0. Throws LayerMismatch on inconsistent
// layer index sets.
double empirical_composite_bound(const std::vector<std::size_t>& counts_mu,
                                 const std::vector<std::size_t>& counts_nu,
                                 const std::vector<double>& sub_values,
                                 const std::vector<double>& radii,
                                 std::size_t n, std::size_t m);

// Runs the full check: samples both sides, solves the per-layer problems
// exactly, and compares the bound with the exact pooled empirical cost.
struct EmpiricalCompositeReport {
  std::vector<std::size_t> counts_mu;
  std::vector<std::size_t> counts_nu;
  std::vector<double> sub_values;
  double bound = 0.0;
  double exact_pooled = 0.0;
};

EmpiricalCompositeReport empirical_composite_check(
    const LayerDecomposition& decomp, std::size_t n, std::size_t m,
    const CostSpec& cost, std::uint64_t seed);

// Composition inequality for the 1-Lipschitz integral probability metric
// (equal to the 1-Wasserstein distance): with the class pinned at the
// support point x0 of smallest marginal cost,
//   W1(mu, pooled) <= sum_l a_l 1(N_l>0) W1(mu_l, sample_l)
//                     + sum_l r_l |a_l - N_l/n|,
// where r_l is the max distance from x0 over the layer support.
struct IpmCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

IpmCheck ipm_composition_check(const LayerDecomposition& decomp,
                               const DiscreteMeasure& mu, const CostSpec& cost,
                               const TwoStageSample& sample, std::size_t n);

// Dominating envelope b >= a, non-increasing, with a pivot index whose value
// is comparable to 1/n. For the canonical geometric envelope
// b_l = K 2^{-l s_eps} with pivot ceil(log2(K n) / s_eps) the guarantee is
//   2^{-s_eps} / n < b_pivot <= 1/n,  i.e. rho = 2^{s_eps}.
struct EnvelopeSequence {
  std::vector<double> b;
  double rho = 1.0;

  // argmin_l of max(n b_l, 1/(n b_l)).
  std::size_t pivot_at(std::size_t n) const;
  double rho_at(std::size_t n) const;
};

// Envelope from an explicit dominating sequence; rho is computed at the
// sample size it will be used with. Throws EnvelopeViolation when b is not
// non-increasing or fails to dominate a.
EnvelopeSequence make_envelope(std::vector<double> b,
                               const std::vector<double>& a, std::size_t n);

double canonical_envelope_k(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, const CostSpec& cost,
                            double s_eps, double offset);
double canonical_envelope_b(double k, double s_eps, long l);
long canonical_pivot(double k, double s_eps, std::size_t n);
double canonical_rho(double s_eps);

}  // namespace otrates
