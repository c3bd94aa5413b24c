#include "doctest.h"

#include <cmath>
#include <numeric>

#include "iet/stats.hpp"

using namespace iet;

TEST_CASE("streams depend only on the master seed and index") {
  auto a = rng_stream(42, 7), b = rng_stream(42, 7), c = rng_stream(42, 8);
  CHECK(a() == b());
  CHECK(a() != c());
  CHECK(splitmix64(0) != splitmix64(1));
}

TEST_CASE("Dirichlet(1,...,1) points lie on the simplex with uniform marginals") {
  std::mt19937_64 rng(1);
  double mean = 0.0;
  for (int k = 0; k < 5000; ++k) {
    auto w = dirichlet_ones(rng, 4);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0));
    for (double x : w) CHECK(x > 0);
    mean += w[2];
  }
  CHECK(mean / 5000 == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("Wilson interval closed form") {
  const double z = 1.959963984540054;
  for (auto [k, n] : {std::pair<long, long>{0, 100}, {5, 100}, {50, 100}, {100, 100}}) {
    double p = static_cast<double>(k) / n, nn = static_cast<double>(n);
    double center = (p + z * z / (2 * nn)) / (1 + z * z / nn);
    double half = z / (1 + z * z / nn) * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn));
    auto ci = wilson_interval(k, n);
    CHECK(ci.lo == doctest::Approx(std::max(0.0, center - half)));
    CHECK(ci.hi == doctest::Approx(std::min(1.0, center + half)));
  }
}

TEST_CASE("weighted fit recovers an exact line") {
  std::vector<double> x{0, 1, 2, 3, 4}, y, w{1, 2, 3, 4, 5};
  for (double t : x) y.push_back(2.5 - 0.75 * t);
  auto f = weighted_linear_fit(x, y, w);
  CHECK(f.slope == doctest::Approx(-0.75));
  CHECK(f.intercept == doctest::Approx(2.5));
  CHECK(f.slope_se == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(f.points == 5);
}

TEST_CASE("decay fit on a deterministic geometric population") {
  const int n_samples = 4000;
  std::vector<double> grid{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::vector<unsigned char>> ind(n_samples, std::vector<unsigned char>(grid.size()));
  for (int i = 0; i < n_samples; ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      ind[i][j] = i < static_cast<int>(std::lround(n_samples * 0.8 * std::exp(-0.3 * grid[j])));
  auto fit = fit_decay(grid, ind, 9);
  CHECK(fit.slope == doctest::Approx(-0.3).epsilon(0.01));
  CHECK(fit.rate == doctest::Approx(0.3).epsilon(0.01));
  CHECK(fit.log_c == doctest::Approx(std::log(0.8)).epsilon(0.01));
  CHECK(fit.slope_ci.hi < 0);
  CHECK(fit.slope_ci.lo <= fit.slope);
  CHECK(fit.points == 10);
}

TEST_CASE("decay fit of a flat population has slope zero") {
  std::vector<double> grid{1, 2, 3, 4};
  std::vector<std::vector<unsigned char>> ind(100, std::vector<unsigned char>(4, 1));
  auto fit = fit_decay(grid, ind, 1);
  CHECK(fit.slope == doctest::Approx(0.0));
}

TEST_CASE("percentile interval") {
  std::vector<double> v(1001);
  std::iota(v.begin(), v.end(), 0.0);
  auto ci = percentile_interval(v);
  CHECK(ci.lo == doctest::Approx(25.0).epsilon(0.01));
  CHECK(ci.hi == doctest::Approx(975.0).epsilon(0.01));
}

TEST_CASE("block bootstrap half-width of an iid series") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  std::vector<double> s(20000);
  for (auto& x : s) x = g(rng);
  double h = block_bootstrap_halfwidth(s, 5);
  CHECK(h == doctest::Approx(1.96 * 2.0 / std::sqrt(20000.0)).epsilon(0.25));
}
