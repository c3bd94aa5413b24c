#include "doctest.h"

#include <map>
#include <random>

#include "iet/simplex.hpp"
#include "oracles.hpp"

using namespace iet;

namespace {

/// x with B0^T x = lambda, by Gaussian elimination on rationals.
std::vector<Rational> delta_coordinates(const SimplexSystem& sys, const std::vector<Rational>& lambda) {
  const int d = sys.dim();
  std::vector<std::vector<Rational>> a(d, std::vector<Rational>(d + 1));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a[i][j] = Rational(sys.gamma0.matrix()(j, i));
    a[i][d] = lambda[i];
  }
  for (int c = 0; c < d; ++c) {
    int piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[c], a[piv]);
    for (int i = 0; i < d; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (int k = c; k <= d; ++k) a[i][k] -= f * a[c][k];
    }
  }
  std::vector<Rational> x(d);
  for (int i = 0; i < d; ++i) x[i] = a[i][d] / a[i][i];
  return x;
}

bool in_delta_oracle(const SimplexSystem& sys, const std::vector<Rational>& lambda) {
  for (const auto& x : delta_coordinates(sys, lambda))
    if (x <= 0) return false;
  return true;
}

struct PlainReturn {
  std::vector<Rational> lambda;
  IntMatrix matrix;
  long steps = 0;
};

/// One renormalization step at a time until the orbit is back in Delta x {pi}.
PlainReturn plain_first_return(const SimplexSystem& sys, std::vector<Rational> lambda) {
  PlainReturn out{{}, IntMatrix::identity(sys.dim()), 0};
  Permutation cur = sys.pi;
  for (;;) {
    ArrowKind k = induct_in_place(lambda, cur);
    out.matrix = arrow_matrix(cur, k) * out.matrix;
    cur = apply_op(cur, k);
    ++out.steps;
    if (cur == sys.pi && in_delta_oracle(sys, lambda)) break;
  }
  out.lambda = std::move(lambda);
  return out;
}

std::vector<Rational> random_delta_point(const SimplexSystem& sys, std::mt19937_64& rng) {
  const int d = sys.dim();
  std::vector<Rational> w;
  for (int i = 0; i < d; ++i) w.push_back(oracle::random_unit_rational(rng, 32));
  auto lambda = sys.b0_t.apply(w);
  normalize_in_place(lambda);
  return lambda;
}

struct MatrixObserver {
  Eigen::MatrixXd m;
  void operator()(int i, int j, double c) { m.row(i) += c * m.row(j); }
  void moved(int) {}
};

}  // namespace

TEST_CASE("default simplex systems close at pi with positive matrices") {
  const std::map<int, std::size_t> lengths{{2, 2}, {3, 6}, {4, 11}};
  for (auto [d, len] : lengths) {
    auto sys = make_default_simplex_system(Permutation::reversal(d));
    CHECK(sys.gamma0.length() == len);
    CHECK(sys.gamma0.end() == sys.pi);
    CHECK(sys.gamma0.matrix().all_positive());
    CHECK(sys.b0_t * sys.b0_t_inv == IntMatrix::identity(d));
  }
  CHECK(make_default_simplex_system(Permutation::reversal(4)).gamma0.word() == "tbtbtbtbbtb");
}

TEST_CASE("explicit loops must close and be positive") {
  auto p = Permutation::reversal(3);
  CHECK_THROWS_AS(make_simplex_system(RauzyPath::from_word(p, "t")), InputError);
  CHECK_THROWS_AS(make_simplex_system(RauzyPath::from_word(p, "tt")), InputError);
}

TEST_CASE("membership agrees with the elimination oracle") {
  auto sys = make_default_simplex_system(Permutation::reversal(3));
  std::mt19937_64 rng(31);
  int inside = 0;
  for (int k = 0; k < 300; ++k) {
    std::vector<Rational> lambda;
    for (int i = 0; i < 3; ++i) lambda.push_back(oracle::random_unit_rational(rng));
    bool ref = in_delta_oracle(sys, lambda);
    CHECK(in_simplex(sys, lambda) == ref);
    inside += ref;
  }
  CHECK(inside > 0);
}

TEST_CASE("accelerated first return equals step-by-step renormalization") {
  std::mt19937_64 rng(32);
  for (int d : {2, 3}) {
    auto sys = make_default_simplex_system(Permutation::reversal(d));
    for (int trial = 0; trial < 10; ++trial) {
      auto lambda = random_delta_point(sys, rng);
      for (int visit = 0; visit < 2; ++visit) {
        auto ref = plain_first_return(sys, lambda);
        auto fr = simplex_first_return(sys, lambda);
        auto expect = ref.lambda;
        normalize_in_place(expect);
        CHECK(fr.lambda == expect);
        CHECK(fr.matrix == ref.matrix);
        CHECK(fr.steps == ref.steps);
        CHECK(fr.r == doctest::Approx(-log_of(sum_of(ref.lambda))).epsilon(1e-12));
        CHECK(in_simplex(sys, fr.lambda));
        lambda = fr.lambda;
      }
    }
  }
}

TEST_CASE("return time equals log |B^* lambda'|") {
  std::mt19937_64 rng(33);
  auto sys = make_default_simplex_system(Permutation::reversal(3));
  for (int trial = 0; trial < 20; ++trial) {
    auto fr = simplex_first_return(sys, random_delta_point(sys, rng));
    CHECK(fr.r > 0);
    CHECK(return_time_formula(fr) == doctest::Approx(fr.r).epsilon(1e-12));
  }
}

TEST_CASE("row-operation observer reproduces the return matrix") {
  std::mt19937_64 rng(34);
  for (int d : {2, 3}) {
    auto sys = make_default_simplex_system(Permutation::reversal(d));
    for (int trial = 0; trial < 10; ++trial) {
      MatrixObserver obs{Eigen::MatrixXd::Identity(d, d)};
      auto fr = simplex_first_return(sys, random_delta_point(sys, rng), kDefaultEscapeCap, true, obs);
      Eigen::MatrixXd exact = fr.matrix.to_eigen();
      CHECK((obs.m - exact).norm() <= 1e-12 * exact.norm());
    }
  }
}

TEST_CASE("float returns at high precision follow the exact orbit") {
  // One pi_3 return spends a few hundred bits, so 256 would not be enough.
  PrecisionScope scope(1024);
  std::mt19937_64 rng(35);
  auto sys = make_default_simplex_system(Permutation::reversal(3));
  auto exact = random_delta_point(sys, rng);
  std::vector<Real> approx;
  for (const auto& x : exact) approx.push_back(Real(x));
  auto fe = simplex_first_return(sys, exact);
  auto fa = simplex_first_return(sys, approx);
  CHECK(fa.matrix == fe.matrix);
  for (int i = 0; i < 3; ++i) CHECK(to_double(fa.lambda[i]) == doctest::Approx(to_double(fe.lambda[i])).epsilon(1e-12));
  CHECK(in_simplex(sys, fa.lambda));
}

TEST_CASE("escape cap") {
  auto sys = make_default_simplex_system(Permutation::reversal(4));
  std::mt19937_64 rng(36);
  CHECK_THROWS_AS(simplex_first_return(sys, random_delta_point(sys, rng), 3), CapExceeded);
  std::vector<Rational> outside{Rational(1, 100), Rational(1, 100), Rational(1, 100), Rational(97, 100)};
  if (!in_simplex(sys, outside)) CHECK_THROWS_AS(simplex_first_return(sys, outside), InputError);
}

TEST_CASE("sampling is uniform on Delta") {
  auto sys = make_default_simplex_system(Permutation::reversal(3));
  std::mt19937_64 rng(37);
  // Barycentric coordinates in the vertex basis are Dirichlet(1,1,1) after
  // weighting by the column sums, so the first one has mean 1/3.
  double mean = 0.0;
  const int n = 4000;
  for (int k = 0; k < n; ++k) {
    auto lambda = sample_simplex<double>(sys, rng);
    std::vector<Rational> q;
    for (double x : lambda) q.push_back(Rational(x));
    auto x = delta_coordinates(sys, q);
    Integer colsum = 0;
    for (int i = 0; i < 3; ++i) colsum += sys.b0_t(i, 0);
    mean += to_double(x[0]) * colsum.convert_to<double>();
    CHECK(in_simplex(sys, lambda));
  }
  mean /= n;
  CHECK(mean == doctest::Approx(1.0 / 3.0).epsilon(0.05));
}

TEST_CASE("cylinder masses match return-path frequencies") {
  PrecisionScope scope(256);
  for (int d : {2, 3}) {
    auto sys = make_default_simplex_system(Permutation::reversal(d));
    std::mt19937_64 rng(38 + d);
    std::map<std::string, long> counts;
    std::map<std::string, IntMatrix> mats;
    // Double lengths are dyadic rationals whose orbits end in exact ties.
    const long n = d == 2 ? 20000 : 10000;
    const long min_count = d == 2 ? 200 : 15;
    for (long k = 0; k < n; ++k) {
      auto fr = simplex_first_return(sys, sample_simplex<Real>(sys, rng));
      auto key = fr.matrix.to_string();
      counts[key] += 1;
      mats.emplace(key, fr.matrix);
    }
    int checked = 0;
    for (const auto& [key, c] : counts) {
      if (c < min_count) continue;
      double p = std::exp(cylinder_log_mass(sys, mats.at(key)));
      double phat = static_cast<double>(c) / static_cast<double>(n);
      double sd = std::sqrt(p * (1 - p) / static_cast<double>(n));
      CHECK(std::abs(phat - p) < 5 * sd);
      double mc = cylinder_mass_monte_carlo(sys, mats.at(key), 20000, 5);
      CHECK(mc == doctest::Approx(p).epsilon(0.05));
      ++checked;
    }
    CHECK(checked >= (d == 2 ? 5 : 1));
  }
}

TEST_CASE("fast-decay tails are summable with positive exponents") {
  auto sys = make_default_simplex_system(Permutation::reversal(2));
  auto rep = fast_decay_tails(sys, 2000.0);
  CHECK(!rep.cylinders.empty());
  CHECK(rep.enumerated_mass <= 1.0 + 1e-9);
  CHECK(rep.enumerated_mass > 0.99);
  CHECK(rep.alpha1 > 0);
  CHECK(rep.alpha2 > 0);
}
