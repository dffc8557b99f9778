#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "otrates/decomposition.hpp"

namespace otrates {

// E[(N+1)^{-1}] for N ~ Bin(n, p), closed form (1-(1-p)^{n+1}) / ((n+1)p),
// together with the simple upper bound 1/(np).
struct InverseBinomialMoment {
  double exact = 0.0;
  double bound = 0.0;
};

InverseBinomialMoment inverse_binomial_moment_exact(std::size_t n, double p);

// E[1(N > 0) N^{-alpha}] against the bound 2 (np)^{-alpha}. The estimate is
// an exact pmf summation up to n = 10^4 and Monte-Carlo beyond.
struct TruncatedInverseMoment {
  double estimate = 0.0;
  double bound = 0.0;
  bool exact = false;
};

TruncatedInverseMoment truncated_inverse_moment(std::size_t n, double p,
                                                double alpha,
                                                std::uint64_t seed = 1,
                                                std::size_t reps = 10'000);

// (2 centered_pth)^{1/p} n^{-(p-1)/p}: upper bound on the mean absolute
// deviation of a sample mean when the centered p-th moment is finite,
// 1 < p <= 2.
double sample_mean_bound(double p_moment, std::size_t n, double centered_pth);

// Monte-Carlo estimate of sum_l c_l E|N_l/n - a_l| for N ~ Mult(n, a)
// against the envelope bound 3 sqrt(rho) (sum_l c_l b_l^{1-gamma}) n^{-gamma}.
struct MultinomialDeviation {
  double mc_estimate = 0.0;
  double mc_std_error = 0.0;
  double bound = 0.0;
};

MultinomialDeviation multinomial_l1_deviation(const std::vector<double>& a,
                                              const std::vector<double>& c,
                                              const EnvelopeSequence& envelope,
                                              double gamma, std::size_t n,
                                              std::size_t reps,
                                              std::uint64_t seed);

// log of the binomial pmf P(N = k) for N ~ Bin(n, p); exact in log space.
double log_binomial_pmf(std::size_t n, std::size_t k, double p);

}  // namespace otrates
