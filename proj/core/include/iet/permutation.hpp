#pragma once

// Labeled permutations: a pair of orderings of one alphabet, the top row and
// the bottom row. Positions are 0-based internally; the text format and the
// monodromy use 1-based values.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace iet {

using Alphabet = std::shared_ptr<const std::vector<std::string>>;

class Permutation {
 public:
  Permutation() = default;
  /// top[i] / bottom[i] is the letter index at position i.
  Permutation(Alphabet alphabet, std::vector<int> top, std::vector<int> bottom);

  /// "a b c / c b a". The alphabet is the top row in order of appearance.
  static Permutation parse(std::string_view text);
  /// The reversal pi_d on letters a, b, c, ... (d <= 26) or x1..xd.
  static Permutation reversal(int d);

  int size() const { return static_cast<int>(top_.size()); }
  const std::vector<std::string>& alphabet() const { return *alphabet_; }
  const Alphabet& shared_alphabet() const { return alphabet_; }
  const std::string& name(int letter) const { return (*alphabet_)[letter]; }
  int letter_index(std::string_view name) const;

  int top_letter(int pos) const { return top_[pos]; }
  int bottom_letter(int pos) const { return bottom_[pos]; }
  int top_pos(int letter) const { return top_pos_[letter]; }
  int bottom_pos(int letter) const { return bottom_pos_[letter]; }
  const std::vector<int>& top_row() const { return top_; }
  const std::vector<int>& bottom_row() const { return bottom_; }

  /// Last letter of the top row, alpha(t).
  int top_last() const { return top_.back(); }
  /// Last letter of the bottom row, alpha(b).
  int bottom_last() const { return bottom_.back(); }

  /// pi_b o pi_t^{-1} as a 1-based list: entry i-1 is pi~(i).
  std::vector<int> monodromy() const;

  bool is_irreducible() const;
  bool is_rotation() const;
  /// Throws ReducibleError unless irreducible.
  void require_irreducible(std::string_view what) const;

  std::string to_string() const;
  /// Compact key for hashing (letter indices only).
  std::string key() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.top_ == b.top_ && a.bottom_ == b.bottom_;
  }
  friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }

 private:
  Alphabet alphabet_;
  std::vector<int> top_, bottom_;
  std::vector<int> top_pos_, bottom_pos_;
};

/// All irreducible permutations of size d with top row a b c ... in order.
std::vector<Permutation> enumerate_irreducible(int d);

}  // namespace iet
