#include "otrates/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otrates/error.hpp"
#include "otrates/rng.hpp"

namespace otrates {

InverseBinomialMoment inverse_binomial_moment_exact(std::size_t n, double p) {
  if (n < 1 || !(p > 0.0) || p > 1.0)
    throw DomainError("requires n >= 1 and p in (0, 1]");
  InverseBinomialMoment result;
  result.exact =
      (1.0 - std::pow(1.0 - p, double(n) + 1.0)) / ((double(n) + 1.0) * p);
  result.bound = 1.0 / (double(n) * p);
  return result;
}

double log_binomial_pmf(std::size_t n, std::size_t k, double p) {
  if (p >= 1.0)
    return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p <= 0.0)
    return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double dn = double(n), dk = double(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) -
         std::lgamma(dn - dk + 1.0) + dk * std::log(p) +
         (dn - dk) * std::log1p(-p);
}

TruncatedInverseMoment truncated_inverse_moment(std::size_t n, double p,
                                                double alpha,
                                                std::uint64_t seed,
                                                std::size_t reps) {
  if (!(alpha > 0.0) || alpha >= 1.0)
    throw DomainError("alpha must lie in (0, 1)");
  if (n < 1 || !(p > 0.0) || p > 1.0)
    throw DomainError("requires n >= 1 and p in (0, 1]");

  TruncatedInverseMoment result;
  result.bound = 2.0 * std::pow(double(n) * p, -alpha);
  if (n <= 10'000) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
      acc += std::exp(log_binomial_pmf(n, k, p)) * std::pow(double(k), -alpha);
    result.estimate = acc;
    result.exact = true;
    return result;
  }

  Rng rng(seed);
  double acc = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform01() < p) ++count;
    if (count > 0) acc += std::pow(double(count), -alpha);
  }
  result.estimate = acc / double(reps);
  result.exact = false;
  return result;
}

double sample_mean_bound(double p_moment, std::size_t n, double centered_pth) {
  if (!(p_moment > 1.0) || p_moment > 2.0)
    throw DomainError("p must lie in (1, 2]");
  if (centered_pth < 0.0)
    throw DomainError("centered moment must be nonnegative");
  return std::pow(2.0 * centered_pth, 1.0 / p_moment) *
         std::pow(double(n), -(p_moment - 1.0) / p_moment);
}

MultinomialDeviation multinomial_l1_deviation(const std::vector<double>& a,
                                              const std::vector<double>& c,
                                              const EnvelopeSequence& envelope,
                                              double gamma, std::size_t n,
                                              std::size_t reps,
                                              std::uint64_t seed) {
  const std::size_t L = a.size();
  if (c.size() != L || envelope.b.size() != L)
    throw LayerMismatch("weight/envelope lengths do not match the masses");
  if (!(gamma > 0.0) || gamma > 0.5)
    throw DomainError("gamma must lie in (0, 1/2]");
  for (std::size_t l = 0; l < L; ++l) {
    if (envelope.b[l] < a[l])
      throw EnvelopeViolation("envelope fails to dominate the masses");
    if (l > 0 && envelope.b[l] > envelope.b[l - 1])
      throw EnvelopeViolation("envelope must be non-increasing");
  }

  std::vector<double> cum(L);
  double acc = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    acc += a[l];
    cum[l] = acc;
  }

  double sum = 0.0, sum_sq = 0.0;
  std::vector<std::size_t> counts(L);
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(derive_stream(seed, {0x4d756c74ULL, r}));
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform01() * acc;
      std::size_t l = std::size_t(
          std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
      if (l >= L) l = L - 1;
      ++counts[l];
    }
    double dev = 0.0;
    for (std::size_t l = 0; l < L; ++l)
      dev += c[l] * std::abs(double(counts[l]) / double(n) - a[l]);
    sum += dev;
    sum_sq += dev * dev;
  }

  MultinomialDeviation result;
  result.mc_estimate = sum / double(reps);
  const double var =
      std::max(0.0, sum_sq / double(reps) -
                        result.mc_estimate * result.mc_estimate);
  result.mc_std_error = std::sqrt(var / double(reps));
  double weighted = 0.0;
  for (std::size_t l = 0; l < L; ++l)
    weighted += c[l] * std::pow(envelope.b[l], 1.0 - gamma);
  result.bound = 3.0 * std::sqrt(envelope.rho) * weighted *
                 std::pow(double(n), -gamma);
  return result;
}

}  // namespace otrates
