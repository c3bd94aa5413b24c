#pragma once

// Rauzy operations, classes and paths, and the induction / renormalization
// steps on length data. Cocycle matrices are always exact integers; only the
// lengths use the scalar type S.

#include <array>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "iet/int_matrix.hpp"
#include "iet/iet.hpp"
#include "iet/permutation.hpp"

namespace iet {

enum class ArrowKind : unsigned char { top = 0, bottom = 1 };

inline char arrow_char(ArrowKind k) { return k == ArrowKind::top ? 't' : 'b'; }
std::string to_string(ArrowKind k);
ArrowKind parse_arrow(std::string_view s);

/// Moves alpha(b) to just after alpha(t) in the bottom row.
Permutation top_op(const Permutation& p);
/// Moves alpha(t) to just after alpha(b) in the top row.
Permutation bottom_op(const Permutation& p);
Permutation apply_op(const Permutation& p, ArrowKind k);
/// Inverse surgeries: the unique q with top_op(q) == p (resp. bottom_op).
Permutation inverse_top_op(const Permutation& p);
Permutation inverse_bottom_op(const Permutation& p);

/// Winner letter of an arrow: alpha(t) for top, alpha(b) for bottom.
inline int arrow_winner(const Permutation& p, ArrowKind k) { return k == ArrowKind::top ? p.top_last() : p.bottom_last(); }
inline int arrow_loser(const Permutation& p, ArrowKind k) { return k == ArrowKind::top ? p.bottom_last() : p.top_last(); }

/// 1 + E_{loser, winner}: 1 + E_{alpha(b) alpha(t)} for top arrows,
/// 1 + E_{alpha(t) alpha(b)} for bottom arrows.
IntMatrix arrow_matrix(const Permutation& source, ArrowKind k);

struct RauzyClass {
  std::vector<Permutation> members;
  std::vector<std::array<int, 2>> next;  // next[v][kind]
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(members.size()); }
  /// -1 when p is not a member.
  int index_of(const Permutation& p) const;
  std::size_t arrow_count() const { return 2 * members.size(); }
  std::size_t self_loops() const;
};

RauzyClass rauzy_class(const Permutation& p, std::size_t cap = 1'000'000);

/// A path in the Rauzy diagram with its cocycle matrix
/// B_gamma = B_{gamma_m} ... B_{gamma_1}.
class RauzyPath {
 public:
  RauzyPath() = default;
  explicit RauzyPath(Permutation start);
  RauzyPath(Permutation start, const std::vector<ArrowKind>& kinds);

  void append(ArrowKind k);
  void append(const RauzyPath& tail);

  const Permutation& start() const { return start_; }
  const Permutation& end() const { return end_; }
  const std::vector<ArrowKind>& kinds() const { return kinds_; }
  std::size_t length() const { return kinds_.size(); }
  const IntMatrix& matrix() const { return matrix_; }

  /// "tbtt..." compact word.
  std::string word() const;
  static RauzyPath from_word(const Permutation& start, std::string_view word);

 private:
  Permutation start_, end_;
  std::vector<ArrowKind> kinds_;
  IntMatrix matrix_;
};

template <class S>
struct InductionResult {
  std::vector<S> lambda;
  Permutation perm;
  ArrowKind kind;
  int winner;
  int loser;
};

namespace detail {

[[noreturn]] void throw_tie(bool exact, const std::string& where);

/// Chooses the arrow at p for lengths lambda; throws on ties.
template <class S>
ArrowKind choose_arrow(const std::vector<S>& lambda, const Permutation& p) {
  const S& lt = lambda[p.top_last()];
  const S& lb = lambda[p.bottom_last()];
  if (lt > lb) return ArrowKind::top;
  if (lb > lt) return ArrowKind::bottom;
  throw_tie(is_exact_v<S>, p.name(p.top_last()) + " and " + p.name(p.bottom_last()));
}

}  // namespace detail

/// One step of Rauzy induction in place: the winner coordinate loses the
/// loser's length. Returns the arrow kind; p is not modified.
template <class S>
ArrowKind induct_in_place(std::vector<S>& lambda, const Permutation& p) {
  ArrowKind k = detail::choose_arrow(lambda, p);
  int w = arrow_winner(p, k), l = arrow_loser(p, k);
  lambda[w] -= lambda[l];
  return k;
}

template <class S>
InductionResult<S> induction_step(std::vector<S> lambda, const Permutation& p) {
  p.require_irreducible("induction_step");
  require_positive_lengths(lambda, p.size());
  ArrowKind k = induct_in_place(lambda, p);
  return {std::move(lambda), apply_op(p, k), k, arrow_winner(p, k), arrow_loser(p, k)};
}

/// Divides by |lambda|; returns log of the old total.
template <class S>
void normalize_in_place(std::vector<S>& lambda) {
  S total = sum_of(lambda);
  for (auto& x : lambda) x /= total;
}

template <class S>
InductionResult<S> renormalization_step(std::vector<S> lambda, const Permutation& p) {
  auto r = induction_step(std::move(lambda), p);
  normalize_in_place(r.lambda);
  return r;
}

template <class S>
struct PositivePath {
  RauzyPath path;
  std::vector<S> lambda_end;  // normalized lengths after the path
};

/// Follows renormalization from lambda until the accumulated matrix is
/// entrywise positive and the path is back at p.
template <class S>
PositivePath<S> positive_path(const Permutation& p, std::vector<S> lambda, long cap = 100'000) {
  p.require_irreducible("positive_path");
  require_positive_lengths(lambda, p.size());
  normalize_in_place(lambda);
  RauzyPath path(p);
  Permutation cur = p;
  for (long n = 0; n < cap; ++n) {
    ArrowKind k = induct_in_place(lambda, cur);
    normalize_in_place(lambda);
    path.append(k);
    cur = path.end();
    if (cur == p && path.matrix().all_positive()) return {std::move(path), std::move(lambda)};
  }
  throw CapExceeded("no positive path closing at " + p.to_string() + " within " + std::to_string(cap) + " steps");
}

}  // namespace iet
