#include "doctest.h"

#include <random>

#include "iet/cocycle.hpp"
#include "oracles.hpp"

using namespace iet;

namespace {

/// Perron eigenvector of the 2x2 matrix B0^T as exact quadratic numbers.
std::vector<Quadratic> perron_vector_2x2(const IntMatrix& m) {
  Integer tr = m(0, 0) + m(1, 1);
  Integer disc = tr * tr - 4 * m.determinant();
  Quadratic mu(Rational(tr, 2), Rational(1, 2), disc);
  return {Quadratic(Rational(m(0, 1))), mu - Quadratic(Rational(m(0, 0)))};
}

}  // namespace

TEST_CASE("every arrow maps H(pi) onto H(pi') in the integer lattice") {
  for (int d = 2; d <= 5; ++d)
    for (const auto& p : enumerate_irreducible(d))
      for (ArrowKind k : {ArrowKind::top, ArrowKind::bottom}) {
        auto b = arrow_matrix(p, k);
        auto l0 = h_lattice_basis(p), l1 = h_lattice_basis(apply_op(p, k));
        auto x = solve_exact(l1, b * l0);
        for (const auto& row : x)
          for (const auto& e : row) CHECK(mp::denominator(e) == 1);
        CHECK(b.determinant() == 1);
      }
}

TEST_CASE("restricted loop matrices are symplectic-sized and unimodular") {
  auto p = Permutation::reversal(5);
  auto sys = make_default_simplex_system(p);
  auto x = restricted_matrix(sys.gamma0.matrix(), h_lattice_basis(p));
  CHECK(x.rows() == 4);
  auto det = x.determinant();
  CHECK((det == 1 || det == -1));
}

TEST_CASE("projectors exist only when H is a proper subspace") {
  CHECK(h_projectors(make_default_simplex_system(Permutation::reversal(4))).empty());
  auto proj = h_projectors(make_default_simplex_system(Permutation::reversal(3)));
  CHECK(proj.size() == 3);
  for (const auto& m : proj) CHECK((m * m - m).norm() < 1e-12);
}

TEST_CASE("golden orbit: exponents are the log of the periodic eigenvalue") {
  auto sys = make_default_simplex_system(Permutation::reversal(2));
  auto lambda = perron_vector_2x2(sys.b0_t);
  REQUIRE(in_simplex(sys, lambda));
  auto fr = simplex_first_return(sys, lambda);
  CHECK(fr.matrix == sys.gamma0.matrix());
  Integer tr = fr.matrix(0, 0) + fr.matrix(1, 1);
  const double top = std::log((tr.convert_to<double>() + std::sqrt(tr.convert_to<double>() * tr.convert_to<double>() - 4)) / 2);
  LyapunovOptions opt;
  opt.steps = 2000;
  auto est = lyapunov_spectrum(sys, lambda, opt);
  REQUIRE(est.exponents.size() == 2);
  CHECK(est.exponents[0] == doctest::Approx(top).epsilon(1e-9));
  CHECK(est.exponents[1] == doctest::Approx(-top).epsilon(1e-9));
  CHECK(est.mean_return_time == doctest::Approx(top).epsilon(1e-9));
}

TEST_CASE("frame transport agrees with the exact return matrix") {
  PrecisionScope scope(256);
  std::mt19937_64 rng(41);
  for (int d : {3, 4}) {
    auto sys = make_default_simplex_system(Permutation::reversal(d));
    auto lambda = sample_simplex<Real>(sys, rng);
    auto st = initial_state(sys, lambda);
    Eigen::VectorXd q0 = st.frame.col(0);
    auto rec = cocycle_step(sys, st, kDefaultEscapeCap, true);
    long shift = std::max(0L, static_cast<long>(rec.b.log_max_abs() / std::log(2.0)) - 500);
    Eigen::MatrixXd b = rec.b.to_eigen_scaled(shift);
    Eigen::VectorXd v = b * q0;
    const double expect = std::log(v.norm()) + static_cast<double>(shift) * std::log(2.0);
    CHECK(rec.log_r[0] == doctest::Approx(expect).epsilon(1e-9));
    Eigen::VectorXd dir = v.normalized();
    CHECK(std::abs(std::abs(dir.dot(st.frame.col(0))) - 1.0) < 1e-9);
    // The restriction to H has determinant +-1.
    double sum = 0.0;
    for (double x : rec.log_r) sum += x;
    CHECK(std::abs(sum) < 1e-6 * rec.log_r[0]);
    CHECK(rec.r == doctest::Approx(return_time_formula(FirstReturn<Real>{st.lambda, rec.b, 0, 0, rec.r})).epsilon(1e-9));
  }
}

TEST_CASE("pi_3 flow exponents are +-1") {
  PrecisionScope scope(256);
  auto sys = make_default_simplex_system(Permutation::reversal(3));
  auto rng = rng_stream(5, 0);
  LyapunovOptions opt;
  opt.steps = 2000;
  auto est = lyapunov_spectrum(sys, sample_simplex<Real>(sys, rng), opt);
  REQUIRE(est.exponents.size() == 2);
  CHECK(est.exponents[0] / est.mean_return_time == doctest::Approx(1.0).epsilon(0.02));
  CHECK(est.exponents[1] / est.mean_return_time == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(est.significantly_positive() == 1);
  CHECK(est.max_h_residual < 1e-8);
  auto res = est.pairing_residuals();
  auto hw = est.pairing_halfwidths();
  CHECK(res[0] <= 3 * hw[0]);
}

TEST_CASE("lyapunov_spectrum rejects short runs and points outside Delta") {
  auto sys = make_default_simplex_system(Permutation::reversal(3));
  LyapunovOptions opt;
  opt.steps = 10;
  std::vector<Real> lambda{Real(0.2), Real(0.3), Real(0.5)};
  CHECK_THROWS_AS(lyapunov_spectrum(sys, lambda, opt), InputError);
}

TEST_CASE("deviation experiments produce well-formed tables") {
  auto sys = make_default_simplex_system(Permutation::reversal(3));
  DeviationOptions opt;
  opt.n_grid = {2, 4, 6};
  opt.samples = 60;
  auto grow = anomalous_growth_experiment(sys, 150.0, opt);
  REQUIRE(grow.rows.size() == 3);
  for (const auto& r : grow.rows) {
    CHECK(r.p_hat >= 0);
    CHECK(r.p_hat <= 1);
    CHECK(r.ci.lo <= r.p_hat);
    CHECK(r.ci.hi >= r.p_hat);
  }
  Eigen::VectorXd v = Eigen::VectorXd::Ones(3).normalized();
  auto shrink = contraction_deviation_experiment(sys, 100.0, v, opt);
  CHECK(shrink.rows.size() == 3);
  CHECK(shrink.samples == 60);
}
