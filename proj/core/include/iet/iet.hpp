#pragma once

// The interval exchange f(lambda, pi) on [0, |lambda|): subintervals closed
// on the left and open on the right, translated by w = Omega lambda.

#include <string>
#include <vector>

#include "iet/combinatorics.hpp"
#include "iet/errors.hpp"
#include "iet/numeric.hpp"
#include "iet/permutation.hpp"

namespace iet {

template <class S>
S sum_of(const std::vector<S>& v) {
  S s(0);
  for (const auto& x : v) s += x;
  return s;
}

template <class S>
void require_positive_lengths(const std::vector<S>& lambda, int d) {
  if (static_cast<int>(lambda.size()) != d)
    throw InputError("expected " + std::to_string(d) + " lengths, got " + std::to_string(lambda.size()));
  for (const auto& x : lambda)
    if (sign(x) <= 0) throw InputError("lengths must be positive");
}

template <class S>
struct IetMap {
  Permutation perm;
  std::vector<S> lambda;     // by letter
  std::vector<S> w;          // translation vector by letter
  std::vector<S> top_left;   // left endpoint of I_alpha (top order)
  std::vector<S> bot_left;   // left endpoint of f(I_alpha) (bottom order)
  S total;

  /// Letter alpha with x in I_alpha.
  int top_interval(const S& x) const {
    if (sign(x) < 0 || !(x < total)) throw InputError("point outside [0, |lambda|)");
    for (int pos = perm.size() - 1; pos >= 0; --pos) {
      int a = perm.top_letter(pos);
      if (!(x < top_left[a])) return a;
    }
    return perm.top_letter(0);
  }
  /// Letter alpha with y in f(I_alpha).
  int bottom_interval(const S& y) const {
    if (sign(y) < 0 || !(y < total)) throw InputError("point outside [0, |lambda|)");
    for (int pos = perm.size() - 1; pos >= 0; --pos) {
      int a = perm.bottom_letter(pos);
      if (!(y < bot_left[a])) return a;
    }
    return perm.bottom_letter(0);
  }

  S evaluate(const S& x) const { return x + w[top_interval(x)]; }
  S inverse(const S& y) const { return y - w[bottom_interval(y)]; }
};

template <class S>
IetMap<S> build_iet(const Permutation& p, std::vector<S> lambda) {
  p.require_irreducible("build_iet");
  const int d = p.size();
  require_positive_lengths(lambda, d);
  IetMap<S> f{p, std::move(lambda), {}, std::vector<S>(d), std::vector<S>(d), S(0)};
  S acc(0);
  for (int pos = 0; pos < d; ++pos) {
    f.top_left[p.top_letter(pos)] = acc;
    acc += f.lambda[p.top_letter(pos)];
  }
  f.total = acc;
  acc = S(0);
  for (int pos = 0; pos < d; ++pos) {
    f.bot_left[p.bottom_letter(pos)] = acc;
    acc += f.lambda[p.bottom_letter(pos)];
  }
  f.w.resize(d);
  for (int a = 0; a < d; ++a) f.w[a] = f.bot_left[a] - f.top_left[a];

  if constexpr (is_exact_v<S>) {
    // w must agree with Omega lambda, and the image intervals must tile
    // [0, |lambda|) consecutively in bottom order.
    auto w2 = omega_maps(p).omega.apply(f.lambda);
    for (int a = 0; a < d; ++a)
      if (w2[a] != f.w[a]) throw InternalError("translation vector disagrees with Omega lambda");
    for (int pos = 0; pos + 1 < d; ++pos) {
      int a = p.bottom_letter(pos), b = p.bottom_letter(pos + 1);
      if (f.top_left[a] + f.w[a] + f.lambda[a] != f.top_left[b] + f.w[b])
        throw InternalError("image intervals do not tile");
    }
  }
  return f;
}

template <class S>
struct ReturnRecord {
  S point;
  S value;
  long time = 0;
};

/// Brute-force first return of f to [0, ell) by direct iteration.
template <class S>
std::vector<ReturnRecord<S>> first_return_oracle(const IetMap<S>& f, const S& ell, const std::vector<S>& xs,
                                                 long cap = 10'000'000) {
  if (!(sign(ell) > 0) || f.total < ell) throw InputError("first_return_oracle needs 0 < ell <= |lambda|");
  std::vector<ReturnRecord<S>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    if (!(x < ell) || sign(x) < 0) throw InputError("oracle start point outside [0, ell)");
    S y = f.evaluate(x);
    long n = 1;
    while (!(y < ell)) {
      if (++n > cap) throw CapExceeded("first return exceeded " + std::to_string(cap) + " iterations");
      y = f.evaluate(y);
    }
    out.push_back({x, y, n});
  }
  return out;
}

/// Whether the lengths are linearly independent over Q, decided from their
/// coefficient vectors over {1} or {1, sqrt D}.
template <class S>
bool rational_independence(const std::vector<S>& lambda) {
  if constexpr (!is_exact_v<S>) {
    throw InputError("rational independence is undecidable for floating-point lengths");
  } else {
    std::vector<std::vector<Rational>> rows;
    for (const auto& x : lambda) rows.push_back(rational_coefficients(x));
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.size());
    for (auto& r : rows) r.resize(width, Rational(0));
    return rational_rank(rows) == lambda.size();
  }
}

}  // namespace iet
