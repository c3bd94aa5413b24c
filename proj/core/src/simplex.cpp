#include "iet/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace iet {

SimplexSystem make_simplex_system(const RauzyPath& gamma0) {
  const Permutation& p = gamma0.start();
  p.require_irreducible("simplex system");
  if (gamma0.length() == 0 || gamma0.end() != p) throw InputError("gamma0 must be a nonempty loop at " + p.to_string());
  if (!gamma0.matrix().all_positive()) throw InputError("gamma0 matrix is not entrywise positive");
  SimplexSystem sys;
  sys.pi = p;
  sys.cls = std::make_shared<const RauzyClass>(rauzy_class(p));
  sys.pi_index = sys.cls->index_of(p);
  sys.gamma0 = gamma0;
  sys.b0_t = gamma0.matrix().transpose();
  sys.b0_t_inv = sys.b0_t.unimodular_inverse();
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < p.size(); ++j) {
      const Integer& e = sys.b0_t_inv(i, j);
      if (mp::abs(e) > Integer(1L << 40)) throw InputError("gamma0 matrix is too large");
      sys.inv_small.push_back(e.convert_to<long>());
    }
  const auto& ks = gamma0.kinds();
  sys.g0_lead = 1;
  while (sys.g0_lead < static_cast<int>(ks.size()) && ks[sys.g0_lead] == ks[0]) ++sys.g0_lead;
  return sys;
}

SimplexSystem make_seeded_simplex_system(const Permutation& p, std::uint64_t seed, long cap) {
  auto rng = rng_stream(seed, 0x5157e3ULL);
  auto w = dirichlet_ones(rng, p.size());
  std::vector<Real> lambda(w.begin(), w.end());
  return make_simplex_system(p, lambda, cap);
}

namespace {

struct LoopSearch {
  const RauzyClass& cls;
  int target;
  int depth;
  std::vector<long> m;  // row-major d x d, small entries
  int d;
  std::vector<ArrowKind> word;
  std::vector<ArrowKind> best;
  double best_log = 0.0;
  bool found = false;

  bool positive() const {
    for (long x : m)
      if (x <= 0) return false;
    return true;
  }

  void dfs(int v) {
    const int n = static_cast<int>(word.size());
    if (n == depth) {
      if (v != target || !positive()) return;
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        long r = 0;
        for (int j = 0; j < d; ++j) r += m[i * d + j];
        s += std::log(static_cast<double>(r));
      }
      if (!found || s < best_log - 1e-12) {
        found = true;
        best_log = s;
        best = word;
      }
      return;
    }
    const Permutation& p = cls.members[v];
    for (int kk = 0; kk < 2; ++kk) {
      auto k = static_cast<ArrowKind>(kk);
      int w = arrow_winner(p, k), l = arrow_loser(p, k);
      for (int j = 0; j < d; ++j) m[l * d + j] += m[w * d + j];
      word.push_back(k);
      dfs(cls.next[v][kk]);
      word.pop_back();
      for (int j = 0; j < d; ++j) m[l * d + j] -= m[w * d + j];
    }
  }
};

}  // namespace

RauzyPath shortest_positive_loop(const Permutation& p, int max_length) {
  p.require_irreducible("shortest_positive_loop");
  auto cls = rauzy_class(p);
  const int d = p.size();
  for (int len = 1; len <= max_length; ++len) {
    LoopSearch s{cls, cls.index_of(p), len, std::vector<long>(static_cast<std::size_t>(d) * d, 0), d, {}, {}, 0.0, false};
    for (int i = 0; i < d; ++i) s.m[i * d + i] = 1;
    s.dfs(s.target);
    if (s.found) return RauzyPath(p, s.best);
  }
  throw CapExceeded("no positive loop at " + p.to_string() + " of length <= " + std::to_string(max_length));
}

SimplexSystem make_default_simplex_system(const Permutation& p) { return make_simplex_system(shortest_positive_loop(p)); }

double cylinder_log_mass(const SimplexSystem& sys, const IntMatrix& b_gamma) {
  const IntMatrix b0 = sys.gamma0.matrix();
  const IntMatrix m = b0 * b_gamma;
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i) s += log_abs(b0.row_sum(i)) - log_abs(m.row_sum(i));
  return s;
}

double cylinder_mass_monte_carlo(const SimplexSystem& sys, const IntMatrix& b_gamma, long samples, std::uint64_t seed) {
  const int d = sys.dim();
  const Eigen::MatrixXd bt = b_gamma.transpose().to_eigen();
  double acc = 0.0;
  for (long i = 0; i < samples; ++i) {
    auto rng = rng_stream(seed, static_cast<std::uint64_t>(i));
    auto lam = sample_simplex<double>(sys, rng);
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(lam.data(), d);
    acc += std::pow((bt * v).sum(), -d);
  }
  return acc / static_cast<double>(samples);
}

namespace {

struct CylinderSearch {
  const SimplexSystem& sys;
  double cap;
  std::size_t max_cylinders;
  std::vector<ArrowKind> g0;
  std::vector<ArrowKind> kinds;
  std::vector<int> verts;
  IntMatrix m;
  std::vector<Cylinder> found;

  bool occurrence_at(std::size_t k, const std::vector<ArrowKind>& seq) const {
    if (k + g0.size() > seq.size()) return false;
    if (verts[k] != sys.pi_index) return false;
    return std::equal(g0.begin(), g0.end(), seq.begin() + static_cast<long>(k));
  }

  void consider_candidate() {
    const std::size_t n = kinds.size();
    // w gamma0 must start with gamma0 and contain no earlier occurrence.
    std::vector<ArrowKind> seq = kinds;
    seq.insert(seq.end(), g0.begin(), g0.end());
    if (!std::equal(g0.begin(), g0.end(), seq.begin())) return;
    for (std::size_t k = (n > g0.size() ? n - g0.size() : 1); k < n; ++k) {
      if (k == 0) continue;
      if (verts[k] == sys.pi_index && std::equal(g0.begin(), g0.end(), seq.begin() + static_cast<long>(k))) return;
    }
    Cylinder c;
    for (auto kk : kinds) c.word.push_back(arrow_char(kk));
    c.log_mass = cylinder_log_mass(sys, m);
    c.norm = m.max_abs().convert_to<double>();
    found.push_back(std::move(c));
    if (found.size() > max_cylinders) throw CapExceeded("cylinder enumeration exceeded " + std::to_string(max_cylinders));
  }

  void dfs() {
    const std::size_t n = kinds.size();
    if (n >= 1 && verts[n] == sys.pi_index) consider_candidate();
    const int v = verts[n];
    const Permutation& p = sys.cls->members[v];
    for (int kk = 0; kk < 2; ++kk) {
      auto k = static_cast<ArrowKind>(kk);
      if (n < g0.size() && k != g0[n]) continue;
      int w = arrow_winner(p, k), l = arrow_loser(p, k);
      m.add_row(l, w);
      bool over = false;
      for (int j = 0; j < m.cols() && !over; ++j) over = m(l, j).convert_to<double>() > cap;
      kinds.push_back(k);
      verts.push_back(sys.cls->next[v][kk]);
      // An occurrence fully inside w at a position >= 1 ends the search.
      const std::size_t len = kinds.size();
      bool inner = len > g0.size() && occurrence_at(len - g0.size(), kinds);
      if (!over && !inner) dfs();
      verts.pop_back();
      kinds.pop_back();
      for (int j = 0; j < m.cols(); ++j) m(l, j) -= m(w, j);
    }
  }
};

double sum_exp(const std::vector<double>& logs) {
  double s = 0.0;
  for (double x : logs) s += std::exp(x);
  return s;
}

}  // namespace

FastDecayReport fast_decay_tails(const SimplexSystem& sys, double norm_cap, std::size_t max_cylinders) {
  if (norm_cap < 2) throw InputError("norm cap must be at least 2");
  CylinderSearch search{sys, norm_cap, max_cylinders, sys.gamma0.kinds(), {}, {sys.pi_index},
                        IntMatrix::identity(sys.dim()), {}};
  search.dfs();

  FastDecayReport rep;
  rep.cylinders = std::move(search.found);
  std::vector<double> logs;
  for (const auto& c : rep.cylinders) logs.push_back(c.log_mass);
  rep.enumerated_mass = sum_exp(logs);

  const IntMatrix& b0 = sys.gamma0.matrix();
  double log_prod_b0 = 0.0;
  for (int i = 0; i < b0.rows(); ++i) log_prod_b0 += log_abs(b0.row_sum(i));
  rep.eps_min = std::exp(log_prod_b0) / norm_cap;

  if (rep.cylinders.size() < 3) throw InputError("too few cylinders below the norm cap for a tail fit");

  // Tail sums through the complement, exact for eps >= eps_min and n <= cap.
  double max_mass = 0.0;
  for (const auto& c : rep.cylinders) max_mass = std::max(max_mass, std::exp(c.log_mass));
  const int grid = 24;
  std::vector<double> x1, y1, w1, x2, y2, w2;
  for (int i = 0; i < grid; ++i) {
    double eps = rep.eps_min * std::pow(max_mass / rep.eps_min, static_cast<double>(i) / grid);
    double above = 0.0;
    for (const auto& c : rep.cylinders)
      if (std::exp(c.log_mass) > eps) above += std::exp(c.log_mass);
    double tail = 1.0 - above;
    if (tail <= 1e-14) continue;
    rep.tail1.emplace_back(eps, tail);
    x1.push_back(std::log(eps));
    y1.push_back(std::log(tail));
    w1.push_back(1.0);
  }
  for (int i = 0; i <= grid; ++i) {
    double nval = 2.0 * std::pow(norm_cap / 2.0, static_cast<double>(i) / grid);
    double below = 0.0;
    for (const auto& c : rep.cylinders)
      if (c.norm < nval) below += std::exp(c.log_mass);
    double tail = 1.0 - below;
    if (tail <= 1e-14) continue;
    rep.tail2.emplace_back(nval, tail);
    x2.push_back(std::log(nval));
    y2.push_back(std::log(tail));
    w2.push_back(1.0);
  }
  auto f1 = weighted_linear_fit(x1, y1, w1);
  auto f2 = weighted_linear_fit(x2, y2, w2);
  rep.alpha1 = f1.slope;
  rep.alpha1_se = f1.slope_se;
  rep.alpha2 = -f2.slope;
  rep.alpha2_se = f2.slope_se;
  return rep;
}

}  // namespace iet
