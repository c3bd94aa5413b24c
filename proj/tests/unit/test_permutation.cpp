#include "doctest.h"

#include "iet/permutation.hpp"
#include "oracles.hpp"

using namespace iet;

TEST_CASE("parse and print round trip") {
  auto p = Permutation::parse("a b c d / d c b a");
  CHECK(p.size() == 4);
  CHECK(p.to_string() == "a b c d / d c b a");
  CHECK(Permutation::parse(p.to_string()) == p);
  CHECK(p.top_last() == p.letter_index("d"));
  CHECK(p.bottom_last() == p.letter_index("a"));
}

TEST_CASE("parse rejects malformed rows") {
  CHECK_THROWS_AS(Permutation::parse("a b c / c b"), InputError);
  CHECK_THROWS_AS(Permutation::parse("a b c / c b d"), InputError);
  CHECK_THROWS_AS(Permutation::parse("a a / a a"), InputError);
  CHECK_THROWS_AS(Permutation::parse("a b c"), InputError);
}

TEST_CASE("reversal family") {
  for (int d = 2; d <= 8; ++d) {
    auto p = Permutation::reversal(d);
    auto m = p.monodromy();
    for (int i = 1; i <= d; ++i) CHECK(m[i - 1] == d + 1 - i);
    CHECK(p.is_irreducible());
  }
}

TEST_CASE("monodromy maps top positions to bottom positions") {
  auto p = Permutation::parse("a b c / b c a");
  // Top position of a, b, c is 1, 2, 3; bottom positions are 3, 1, 2.
  CHECK(p.monodromy() == std::vector<int>{3, 1, 2});
  CHECK(p.is_rotation());
  CHECK(!Permutation::parse("a b c / c b a").is_rotation());
}

TEST_CASE("irreducibility on small cases") {
  CHECK(!Permutation::parse("a b / a b").is_irreducible());
  CHECK(!Permutation::parse("a b c / b a c").is_irreducible());
  CHECK(Permutation::parse("a b c / c a b").is_irreducible());
  CHECK_THROWS_AS(Permutation::parse("a b c / b a c").require_irreducible("test"), ReducibleError);
}

TEST_CASE("enumerate_irreducible matches brute-force counts") {
  for (int d = 2; d <= 7; ++d) {
    auto all = enumerate_irreducible(d);
    CHECK(static_cast<long>(all.size()) == oracle::count_irreducible(d));
    for (const auto& p : all) {
      std::vector<int> perm(d);
      for (int i = 0; i < d; ++i) perm[i] = p.bottom_pos(p.top_letter(i));
      CHECK(oracle::irreducible(perm));
      CHECK(p.is_irreducible());
    }
  }
  // Brute force gives 1, 3, 13, 71, 461 for d = 2..6.
  CHECK(oracle::count_irreducible(6) == 461);
}
