#include "iet/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "iet/errors.hpp"

namespace iet {

namespace {

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

Alphabet default_alphabet(int d) {
  std::vector<std::string> names;
  for (int i = 0; i < d; ++i) names.push_back(d <= 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i + 1));
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

}  // namespace

Permutation::Permutation(Alphabet alphabet, std::vector<int> top, std::vector<int> bottom)
    : alphabet_(std::move(alphabet)), top_(std::move(top)), bottom_(std::move(bottom)) {
  const int d = static_cast<int>(top_.size());
  if (!alphabet_ || static_cast<int>(alphabet_->size()) != d || static_cast<int>(bottom_.size()) != d)
    throw InputError("permutation rows and alphabet must have the same length");
  if (d < 2) throw InputError("permutation needs at least two letters");
  top_pos_.assign(d, -1);
  bottom_pos_.assign(d, -1);
  for (int i = 0; i < d; ++i) {
    if (top_[i] < 0 || top_[i] >= d || top_pos_[top_[i]] != -1) throw InputError("top row is not a bijection");
    if (bottom_[i] < 0 || bottom_[i] >= d || bottom_pos_[bottom_[i]] != -1) throw InputError("bottom row is not a bijection");
    top_pos_[top_[i]] = i;
    bottom_pos_[bottom_[i]] = i;
  }
}

Permutation Permutation::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos || text.find('/', slash + 1) != std::string_view::npos)
    throw InputError("permutation must have exactly one '/' separating the rows: '" + std::string(text) + "'");
  auto top = split_tokens(text.substr(0, slash));
  auto bottom = split_tokens(text.substr(slash + 1));
  if (top.size() != bottom.size()) throw InputError("rows have different lengths in '" + std::string(text) + "'");
  auto names = std::make_shared<std::vector<std::string>>(top);
  std::vector<int> t(top.size()), b(bottom.size());
  std::iota(t.begin(), t.end(), 0);
  for (std::size_t i = 0; i < bottom.size(); ++i) {
    auto it = std::find(top.begin(), top.end(), bottom[i]);
    if (it == top.end()) throw InputError("symbol '" + bottom[i] + "' of the bottom row is missing from the top row");
    b[i] = static_cast<int>(it - top.begin());
  }
  return Permutation(std::move(names), std::move(t), std::move(b));
}

Permutation Permutation::reversal(int d) {
  if (d < 2) throw InputError("reversal needs d >= 2");
  std::vector<int> t(d), b(d);
  for (int i = 0; i < d; ++i) {
    t[i] = i;
    b[i] = d - 1 - i;
  }
  return Permutation(default_alphabet(d), std::move(t), std::move(b));
}

int Permutation::letter_index(std::string_view nm) const {
  for (int i = 0; i < size(); ++i)
    if ((*alphabet_)[i] == nm) return i;
  throw InputError("unknown letter '" + std::string(nm) + "'");
}

std::vector<int> Permutation::monodromy() const {
  std::vector<int> m(size());
  for (int i = 0; i < size(); ++i) m[i] = bottom_pos_[top_[i]] + 1;
  return m;
}

bool Permutation::is_irreducible() const {
  // Prefixes of length k agree as sets iff the first k top letters all sit
  // in the first k bottom positions.
  int max_bottom = -1;
  for (int k = 0; k < size() - 1; ++k) {
    max_bottom = std::max(max_bottom, bottom_pos_[top_[k]]);
    if (max_bottom == k) return false;
  }
  return true;
}

bool Permutation::is_rotation() const {
  auto m = monodromy();
  const int d = size();
  for (int i = 0; i + 1 < d; ++i)
    if ((m[i + 1] - m[i] - 1) % d != 0) return false;
  return true;
}

void Permutation::require_irreducible(std::string_view what) const {
  if (!is_irreducible()) throw ReducibleError(std::string(what) + " requires an irreducible permutation, got '" + to_string() + "'");
}

std::string Permutation::to_string() const {
  std::string out;
  for (int i = 0; i < size(); ++i) out += (i ? " " : "") + name(top_[i]);
  out += " /";
  for (int i = 0; i < size(); ++i) out += " " + name(bottom_[i]);
  return out;
}

std::string Permutation::key() const {
  std::string k;
  k.reserve(2 * top_.size());
  for (int v : top_) k.push_back(static_cast<char>(v));
  for (int v : bottom_) k.push_back(static_cast<char>(v));
  return k;
}

std::vector<Permutation> enumerate_irreducible(int d) {
  auto names = default_alphabet(d);
  std::vector<int> top(d), bottom(d);
  std::iota(top.begin(), top.end(), 0);
  std::iota(bottom.begin(), bottom.end(), 0);
  std::vector<Permutation> out;
  do {
    Permutation p(names, top, bottom);
    if (p.is_irreducible()) out.push_back(std::move(p));
  } while (std::next_permutation(bottom.begin(), bottom.end()));
  return out;
}

}  // namespace iet
