#include "iet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iet/errors.hpp"

namespace iet {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 rng_stream(std::uint64_t master, std::uint64_t index) {
  std::uint64_t a = splitmix64(master);
  std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> dirichlet_ones(std::mt19937_64& rng, int d) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(d);
  double s = 0.0;
  for (auto& x : w) {
    x = expo(rng);
    s += x;
  }
  for (auto& x : w) x /= s;
  return w;
}

Interval wilson_interval(long k, long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double p = static_cast<double>(k) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

LinearFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  LinearFit fit;
  fit.points = static_cast<int>(x.size());
  if (x.size() < 2) return fit;
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += w[i] * r * r;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
  }
  return fit;
}

namespace {

LinearFit fit_counts(const std::vector<double>& grid, const std::vector<long>& counts, long n) {
  std::vector<double> x, y, w;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (counts[j] <= 0) continue;
    double p = static_cast<double>(counts[j]) / n;
    x.push_back(grid[j]);
    y.push_back(std::log(p));
    w.push_back(static_cast<double>(counts[j]) / std::max(1.0 - p, 1.0 / n));
  }
  return weighted_linear_fit(x, y, w);
}

}  // namespace

DecayFit fit_decay(const std::vector<double>& grid, const std::vector<std::vector<unsigned char>>& indicator,
                   std::uint64_t seed, int bootstrap_reps) {
  const long n = static_cast<long>(indicator.size());
  if (n == 0) throw InputError("fit_decay needs at least one sample");
  auto tally = [&](const std::vector<std::size_t>& idx) {
    std::vector<long> counts(grid.size(), 0);
    for (auto i : idx)
      for (std::size_t j = 0; j < grid.size(); ++j) counts[j] += indicator[i][j];
    return counts;
  };
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  auto counts = tally(all);
  auto base = fit_counts(grid, counts, n);
  DecayFit out;
  out.log_c = base.intercept;
  out.slope = base.slope;
  out.rate = -base.slope;
  out.points = base.points;
  if (base.points < 2) {
    out.slope_ci = {0.0, 0.0};
    return out;
  }
  auto rng = rng_stream(seed, 0xb00751ULL);
  std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(n - 1));
  std::vector<double> slopes;
  std::vector<std::size_t> idx(n);
  for (int r = 0; r < bootstrap_reps; ++r) {
    for (auto& i : idx) i = pick(rng);
    auto f = fit_counts(grid, tally(idx), n);
    if (f.points >= 2) slopes.push_back(f.slope);
  }
  out.slope_ci = slopes.empty() ? Interval{base.slope, base.slope} : percentile_interval(slopes);
  return out;
}

Interval percentile_interval(std::vector<double> values, double level) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  const double a = (1.0 - level) / 2.0;
  auto at = [&](double q) {
    double pos = q * static_cast<double>(values.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, values.size() - 1);
    double t = pos - static_cast<double>(lo);
    return values[lo] * (1 - t) + values[hi] * t;
  };
  return {at(a), at(1.0 - a)};
}

double block_bootstrap_halfwidth(const std::vector<double>& series, std::uint64_t seed, int reps, std::size_t block) {
  const std::size_t n = series.size();
  if (n < 2) return 0.0;
  if (block == 0) block = std::max<std::size_t>(1, static_cast<std::size_t>(std::cbrt(static_cast<double>(n))));
  block = std::min(block, n);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + series[i];
  const std::size_t blocks = (n + block - 1) / block;
  auto rng = rng_stream(seed, 0xb10cULL);
  std::uniform_int_distribution<std::size_t> start(0, n - block);
  std::vector<double> means;
  means.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    double s = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      std::size_t st = start(rng);
      s += prefix[st + block] - prefix[st];
    }
    means.push_back(s / static_cast<double>(blocks * block));
  }
  auto iv = percentile_interval(means);
  return (iv.hi - iv.lo) / 2.0;
}

}  // namespace iet
