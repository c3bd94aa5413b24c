#pragma once

// Seeded random streams, binomial intervals, log-linear decay fits and
// bootstrap helpers shared by the Monte Carlo experiments.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace iet {

std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream for sample `index` under `master` seed. The stream
/// depends only on (master, index), never on scheduling.
std::mt19937_64 rng_stream(std::uint64_t master, std::uint64_t index);

/// Point on the standard simplex drawn from Dirichlet(1, ..., 1).
std::vector<double> dirichlet_ones(std::mt19937_64& rng, int d);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for k successes out of n at normal quantile z.
Interval wilson_interval(long k, long n, double z = 1.959963984540054);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;  // standard error from residuals
  int points = 0;
};

/// Weighted least squares y = a + b x.
LinearFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w);

struct DecayFit {
  double log_c = 0.0;     // intercept of log p
  double rate = 0.0;      // kappa in p ~ C exp(-kappa n); positive means decay
  double slope = 0.0;     // d log p / dn = -rate
  Interval slope_ci;      // bootstrap 95% interval for the slope
  int points = 0;         // grid points with nonzero counts used in the fit
};

/// Fits log p_hat(n) = log C + slope * n over grid points with positive
/// counts, weighting by k / max(1 - p, 1/N). `indicator(i, j)` tells whether
/// sample i counts at grid point j; the CI resamples samples.
DecayFit fit_decay(const std::vector<double>& grid, const std::vector<std::vector<unsigned char>>& indicator,
                   std::uint64_t seed, int bootstrap_reps = 400);

/// Percentile interval of a bootstrap distribution.
Interval percentile_interval(std::vector<double> values, double level = 0.95);

/// Moving-block bootstrap half-width (95%) for the mean of a series.
double block_bootstrap_halfwidth(const std::vector<double>& series, std::uint64_t seed, int reps = 200,
                                 std::size_t block = 0);

}  // namespace iet
