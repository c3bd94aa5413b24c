#include "doctest.h"

#include "iet/combinatorics.hpp"
#include "oracles.hpp"

using namespace iet;

namespace {

/// Omega from its definition: +1 when alpha precedes beta on top and
/// follows it on the bottom, -1 in the opposite case.
std::vector<std::vector<Rational>> omega_oracle(const Permutation& p) {
  const int d = p.size();
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d, Rational(0)));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (p.top_pos(a) < p.top_pos(b) && p.bottom_pos(a) > p.bottom_pos(b)) m[a][b] = 1;
      if (p.top_pos(a) > p.top_pos(b) && p.bottom_pos(a) < p.bottom_pos(b)) m[a][b] = -1;
    }
  return m;
}

}  // namespace

TEST_CASE("Omega, genus and b^s agree with independent computations for d <= 5") {
  for (int d = 2; d <= 5; ++d) {
    for (const auto& p : enumerate_irreducible(d)) {
      auto ts = omega_maps(p);
      auto ref = omega_oracle(p);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) CHECK(Rational(ts.omega(a, b)) == ref[a][b]);
      CHECK(ts.omega.is_antisymmetric());

      auto prof = singularity_profile(p);
      const int rank = oracle::rank(ref);
      CHECK(rank == ts.rank);
      CHECK(rank % 2 == 0);
      CHECK(d + 1 - static_cast<int>(prof.orbits.size()) == rank);
      CHECK(rank == 2 * prof.genus);

      // b^s lies in ker Omega and the b^s span it.
      std::vector<std::vector<Rational>> brows;
      for (const auto& b : prof.b_vectors) {
        for (int a = 0; a < d; ++a) {
          Rational s = 0;
          for (int c = 0; c < d; ++c) s += ref[a][c] * b[c];
          CHECK(s == 0);
        }
        brows.emplace_back(b.begin(), b.end());
      }
      CHECK(oracle::rank(brows) == d - rank);

      // One-vector rule evaluated directly.
      auto rule = check_one_vector_rule(p);
      bool ones_in_h = true;
      for (std::size_t s = 0; s < prof.orbits.size(); ++s) {
        const auto& orb = prof.orbits[s];
        bool has0 = std::find(orb.begin(), orb.end(), 0) != orb.end();
        bool hasd = std::find(orb.begin(), orb.end(), d) != orb.end();
        int expect = has0 && !hasd ? 1 : (!has0 && hasd ? -1 : 0);
        int dot = 0;
        for (int x : prof.b_vectors[s]) dot += x;
        CHECK(dot == expect);
        CHECK(rule.values[s] == expect);
        ones_in_h = ones_in_h && dot == 0;
      }
      CHECK(rule.ones_in_h == ones_in_h);
    }
  }
}

TEST_CASE("reversal genus and singularities") {
  for (int d = 2; d <= 9; ++d) {
    auto prof = singularity_profile(Permutation::reversal(d));
    CHECK(prof.genus == d / 2);
    CHECK(prof.orbits.size() == (d % 2 == 0 ? 1u : 2u));
    CHECK(check_one_vector_rule(Permutation::reversal(d)).ones_in_h == (d % 2 == 0));
  }
}

TEST_CASE("h_basis is orthonormal and spans the column space of Omega") {
  for (const auto& p : enumerate_irreducible(4)) {
    auto ts = omega_maps(p);
    const auto& q = ts.h_basis;
    CHECK(q.cols() == ts.rank);
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).norm() < 1e-12);
    Eigen::MatrixXd om = ts.omega.to_eigen();
    CHECK((om - q * q.transpose() * om).norm() < 1e-10);
    for (int c = 0; c < q.cols(); ++c) CHECK(h_membership_residual(p, q.col(c)) < 1e-12);
  }
}

TEST_CASE("lattice basis of H cap Z^d") {
  auto p = Permutation::reversal(5);
  auto l = h_lattice_basis(p);
  CHECK(l.cols() == 4);
  CHECK(l.rank() == 4);
  auto b = b_matrix(p);
  auto prod = b * l;
  for (int i = 0; i < prod.rows(); ++i)
    for (int j = 0; j < prod.cols(); ++j) CHECK(prod(i, j) == 0);
}
