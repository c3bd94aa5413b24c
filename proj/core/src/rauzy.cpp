#include "iet/rauzy.hpp"

#include <algorithm>
#include <deque>

namespace iet {

std::string to_string(ArrowKind k) { return k == ArrowKind::top ? "top" : "bottom"; }

ArrowKind parse_arrow(std::string_view s) {
  if (s == "t" || s == "top") return ArrowKind::top;
  if (s == "b" || s == "bottom") return ArrowKind::bottom;
  throw InputError("unknown arrow '" + std::string(s) + "'");
}

namespace {

// Removes `letter` from row and reinserts it right after `anchor`.
std::vector<int> move_after(std::vector<int> row, int letter, int anchor) {
  row.erase(std::find(row.begin(), row.end(), letter));
  row.insert(std::find(row.begin(), row.end(), anchor) + 1, letter);
  return row;
}

}  // namespace

Permutation top_op(const Permutation& p) {
  return Permutation(p.shared_alphabet(), p.top_row(), move_after(p.bottom_row(), p.bottom_last(), p.top_last()));
}

Permutation bottom_op(const Permutation& p) {
  return Permutation(p.shared_alphabet(), move_after(p.top_row(), p.top_last(), p.bottom_last()), p.bottom_row());
}

Permutation apply_op(const Permutation& p, ArrowKind k) { return k == ArrowKind::top ? top_op(p) : bottom_op(p); }

Permutation inverse_top_op(const Permutation& p) {
  // The moved letter sits right after alpha(t) in the bottom row.
  int pos = p.bottom_pos(p.top_last());
  if (pos + 1 >= p.size()) throw InputError("no top-arrow predecessor for " + p.to_string());
  std::vector<int> bottom = p.bottom_row();
  int moved = bottom[pos + 1];
  bottom.erase(bottom.begin() + pos + 1);
  bottom.push_back(moved);
  return Permutation(p.shared_alphabet(), p.top_row(), std::move(bottom));
}

Permutation inverse_bottom_op(const Permutation& p) {
  int pos = p.top_pos(p.bottom_last());
  if (pos + 1 >= p.size()) throw InputError("no bottom-arrow predecessor for " + p.to_string());
  std::vector<int> top = p.top_row();
  int moved = top[pos + 1];
  top.erase(top.begin() + pos + 1);
  top.push_back(moved);
  return Permutation(p.shared_alphabet(), std::move(top), p.bottom_row());
}

IntMatrix arrow_matrix(const Permutation& source, ArrowKind k) {
  IntMatrix m = IntMatrix::identity(source.size());
  m(arrow_loser(source, k), arrow_winner(source, k)) = 1;
  return m;
}

int RauzyClass::index_of(const Permutation& p) const {
  auto it = index.find(p.key());
  return it == index.end() ? -1 : it->second;
}

std::size_t RauzyClass::self_loops() const {
  std::size_t n = 0;
  for (std::size_t v = 0; v < next.size(); ++v)
    for (int k = 0; k < 2; ++k)
      if (next[v][k] == static_cast<int>(v)) ++n;
  return n;
}

RauzyClass rauzy_class(const Permutation& p, std::size_t cap) {
  p.require_irreducible("rauzy_class");
  RauzyClass cls;
  std::deque<int> queue;
  auto visit = [&](const Permutation& q) {
    auto [it, inserted] = cls.index.emplace(q.key(), static_cast<int>(cls.members.size()));
    if (inserted) {
      if (cls.members.size() >= cap) throw CapExceeded("Rauzy class exceeds " + std::to_string(cap) + " vertices");
      cls.members.push_back(q);
      cls.next.push_back({-1, -1});
      queue.push_back(it->second);
    }
    return it->second;
  };
  visit(p);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    Permutation q = cls.members[v];
    int t = visit(top_op(q));
    int b = visit(bottom_op(q));
    cls.next[v] = {t, b};
  }
  return cls;
}

RauzyPath::RauzyPath(Permutation start)
    : start_(start), end_(std::move(start)), matrix_(IntMatrix::identity(start_.size())) {}

RauzyPath::RauzyPath(Permutation start, const std::vector<ArrowKind>& kinds) : RauzyPath(std::move(start)) {
  for (auto k : kinds) append(k);
}

void RauzyPath::append(ArrowKind k) {
  // Left multiplication by 1 + E_{loser,winner} adds the winner row into the
  // loser row.
  matrix_.add_row(arrow_loser(end_, k), arrow_winner(end_, k));
  end_ = apply_op(end_, k);
  kinds_.push_back(k);
}

void RauzyPath::append(const RauzyPath& tail) {
  if (tail.start_ != end_) throw InputError("paths do not compose");
  for (auto k : tail.kinds_) append(k);
}

std::string RauzyPath::word() const {
  std::string w;
  for (auto k : kinds_) w.push_back(arrow_char(k));
  return w;
}

RauzyPath RauzyPath::from_word(const Permutation& start, std::string_view word) {
  RauzyPath path(start);
  for (char c : word) {
    if (c == ' ' || c == ',') continue;
    path.append(parse_arrow(std::string_view(&c, 1)));
  }
  return path;
}

namespace detail {

void throw_tie(bool exact, const std::string& where) {
  if (exact) throw TieError("Rauzy induction undefined: tie between " + where);
  throw PrecisionError("floating-point tie between " + where + "; increase --precision-bits");
}

}  // namespace detail

}  // namespace iet
