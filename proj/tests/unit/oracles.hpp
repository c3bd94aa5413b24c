#pragma once

// Independent reference implementations used by the unit tests. They work
// on plain vectors and never call the library routine under test.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "iet/numeric.hpp"

namespace oracle {

/// Irreducible: no k < d with the first k top letters equal (as a set) to
/// the first k bottom letters. `perm[i]` is the bottom position of the top
/// letter at position i.
inline bool irreducible(const std::vector<int>& perm) {
  int d = static_cast<int>(perm.size());
  int seen_max = -1;
  for (int k = 0; k + 1 < d; ++k) {
    seen_max = std::max(seen_max, perm[k]);
    if (seen_max == k) return false;
  }
  return true;
}

inline long count_irreducible(int d) {
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  long n = 0;
  do {
    n += irreducible(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return n;
}

/// Rank over Q by Gaussian elimination on rationals.
inline int rank(std::vector<std::vector<iet::Rational>> m) {
  int r = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) piv = i;
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      iet::Rational f = m[i][c] / m[r][c];
      for (int k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

/// Continued fraction partial quotients of a/b by Euclid.
inline std::vector<iet::Integer> euclid(iet::Integer a, iet::Integer b, std::size_t max_terms) {
  std::vector<iet::Integer> out;
  while (b != 0 && out.size() < max_terms) {
    iet::Integer q = a / b;
    out.push_back(q);
    iet::Integer r = a - q * b;
    a = b;
    b = r;
  }
  return out;
}

/// Random rational in (0, 1) with denominator 2^(64 words). Exact orbits
/// spend about 230 bits per pi_3 return before they reach a tie.
inline iet::Rational random_unit_rational(std::mt19937_64& rng, int words = 1) {
  iet::Integer num = 0;
  for (int i = 0; i < words; ++i) num = (num << 64) + iet::Integer(rng());
  if (num == 0) num = 1;
  return iet::Rational(num, iet::Integer(1) << (64 * words));
}

}  // namespace oracle
