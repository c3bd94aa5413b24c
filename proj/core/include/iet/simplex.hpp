#pragma once

// The simplex Delta = B_{gamma0}^* P_+ attached to a positive loop gamma0 at
// pi, the induced first-return map T of renormalization to Delta x {pi}, and
// the cylinder masses of its return partition.

#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <thread>
#include <type_traits>
#include <vector>

#include "iet/rauzy.hpp"
#include "iet/stats.hpp"

namespace iet {

inline constexpr long kDefaultEscapeCap = 10'000'000;

/// log x for a positive scalar, as a double.
inline double log_of(const Rational& x) {
  return log_of_integer_ratio(mp::numerator(x), mp::denominator(x));
}
inline double log_of(const Real& x) { return static_cast<double>(mp::log(x)); }
inline double log_of(double x) { return std::log(x); }
inline double log_of(const Quadratic& x) { return static_cast<double>(mp::log(to_real(x))); }

struct SimplexSystem {
  Permutation pi;
  std::shared_ptr<const RauzyClass> cls;
  int pi_index = 0;
  RauzyPath gamma0;
  IntMatrix b0_t;      // B_{gamma0}^T; its columns span Delta
  IntMatrix b0_t_inv;  // exact inverse, used for membership
  std::vector<long> inv_small;  // b0_t_inv row-major, as machine integers
  int g0_lead = 1;              // length of the initial one-kind block of gamma0

  int dim() const { return pi.size(); }
};

/// Builds Delta from an explicit loop at p; the loop must close at p and
/// have an entrywise positive matrix.
SimplexSystem make_simplex_system(const RauzyPath& gamma0);

/// Builds Delta from positive_path started at the given lengths.
template <class S>
SimplexSystem make_simplex_system(const Permutation& p, const std::vector<S>& lambda, long cap = kDefaultEscapeCap) {
  auto pp = positive_path(p, lambda, cap);
  return make_simplex_system(pp.path);
}

/// Builds Delta from positive_path started at a seeded uniform point of P_+.
SimplexSystem make_seeded_simplex_system(const Permutation& p, std::uint64_t seed, long cap = kDefaultEscapeCap);

/// Shortest loops at p with entrywise positive matrix; among those, the one
/// with the largest Delta (smallest prod rowsum(B)), ties broken by word.
RauzyPath shortest_positive_loop(const Permutation& p, int max_length = 40);

/// Delta from shortest_positive_loop.
SimplexSystem make_default_simplex_system(const Permutation& p);

/// lambda in Delta iff (B_{gamma0}^T)^{-1} lambda > 0.
template <class S>
bool in_simplex(const SimplexSystem& sys, const std::vector<S>& lambda) {
  const int d = sys.dim();
  for (int i = 0; i < d; ++i) {
    S acc(0);
    for (int j = 0; j < d; ++j) {
      const long c = sys.inv_small[static_cast<std::size_t>(i) * d + j];
      if (c == 0) continue;
      if constexpr (std::is_same_v<S, Quadratic>)
        acc += lambda[j] * Quadratic(Rational(c));
      else
        acc += lambda[j] * c;
    }
    if (sign(acc) <= 0) return false;
  }
  return true;
}

namespace detail {

/// Uniform in (0, 1) with every mantissa bit random.
inline Real uniform_real(std::mt19937_64& rng, unsigned bits) {
  Real u(0), scale(1);
  for (unsigned got = 0; got < bits + 64; got += 64) {
    scale = ldexp(scale, -64);
    u += Real(rng()) * scale;
  }
  return u + scale / 2;
}

/// Dirichlet(1, ..., 1) weights in the scalar family of S. Real draws use
/// the full mantissa so that sampled points carry no hidden short expansion.
template <class S>
std::vector<S> dirichlet_weights(std::mt19937_64& rng, int d) {
  if constexpr (std::is_same_v<S, Real>) {
    const unsigned bits = current_precision_bits();
    std::vector<Real> e(d);
    Real total(0);
    for (auto& x : e) {
      x = -mp::log(uniform_real(rng, bits));
      total += x;
    }
    for (auto& x : e) x /= total;
    return e;
  } else {
    auto w = dirichlet_ones(rng, d);
    std::vector<S> out;
    for (double x : w) {
      if constexpr (std::is_same_v<S, double>)
        out.push_back(x);
      else
        out.push_back(scalar_from<S>(Rational(x)));
    }
    return out;
  }
}

}  // namespace detail

/// Runs body(i) for every sample index on `workers` threads. Each thread
/// works at the caller's working precision; results must not depend on the
/// thread that ran them.
template <class F>
void parallel_samples(long samples, unsigned workers, F body) {
  const unsigned bits = working_precision_bits();
  auto slice = [&](long first, long stride) {
    PrecisionScope scope(bits);
    for (long i = first; i < samples; i += stride) body(i);
  };
  if (workers <= 1) {
    slice(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(slice, static_cast<long>(w), static_cast<long>(workers));
  for (auto& t : pool) t.join();
}

/// Uniform (normalized Lebesgue) point of Delta with |lambda| = 1.
template <class S>
std::vector<S> sample_simplex(const SimplexSystem& sys, std::mt19937_64& rng) {
  const int d = sys.dim();
  auto w = detail::dirichlet_weights<S>(rng, d);
  std::vector<S> lambda(d, S(0));
  for (int j = 0; j < d; ++j) {
    Integer colsum = 0;
    for (int i = 0; i < d; ++i) colsum += sys.b0_t(i, j);
    S coef = w[j] / scalar_from<S>(colsum);
    for (int i = 0; i < d; ++i) lambda[i] += coef * scalar_from<S>(sys.b0_t(i, j));
  }
  normalize_in_place(lambda);
  return lambda;
}

template <class S>
struct FirstReturn {
  std::vector<S> lambda;  // T(lambda), normalized
  IntMatrix matrix;       // B_gamma of the return path gamma
  long steps = 0;         // renormalization steps (saturates at LONG_MAX)
  long moves = 0;         // loop iterations, each one step or a block of full cycles
  double r = 0.0;         // sum over the path of log(|lambda before| / |lambda after|)
};

namespace detail {

inline long saturating_add(long a, const Integer& b) {
  Integer s = Integer(a) + b;
  return s > Integer(std::numeric_limits<long>::max()) ? std::numeric_limits<long>::max() : s.convert_to<long>();
}

inline long saturating_add(long a, long b) {
  long s;
  return __builtin_add_overflow(a, b, &s) ? std::numeric_limits<long>::max() : s;
}

/// False only when the double approximation is clearly outside Delta.
inline bool maybe_in_simplex(const SimplexSystem& sys, const std::vector<double>& approx) {
  const int d = sys.dim();
  const double margin = 1e-9 * std::accumulate(approx.begin(), approx.end(), 0.0);
  for (int i = 0; i < d; ++i) {
    double acc = 0.0, scale = 0.0;
    for (int j = 0; j < d; ++j) {
      const double c = static_cast<double>(sys.inv_small[static_cast<std::size_t>(i) * d + j]);
      acc += c * approx[j];
      scale += std::abs(c);
    }
    if (acc < -margin * scale) return false;
  }
  return true;
}

struct NoRowOps {
  void operator()(int, int, double) const {}
  void moved(int) const {}
};

}  // namespace detail

/// First n >= 1 with R^n(lambda, pi) in Delta x {pi}.
///
/// A run of arrows of one kind keeps the winner w and cycles the losers
/// through the letters after w in the other row; the permutation returns to
/// itself after each full cycle. Whole cycles are applied at once while more
/// than g0_lead steps of the run remain, since a Delta visit needs the run
/// to end within the first block of gamma0. `cap` bounds loop iterations.
///
/// `row_op(i, j, c)` is called for every row operation "row i += c row j"
/// applied to B_gamma, so callers can transport vectors without the exact
/// matrix; `row_op.moved(v)` follows each move with the current vertex.
template <class S, class RowOp = detail::NoRowOps>
FirstReturn<S> simplex_first_return(const SimplexSystem& sys, std::vector<S> lambda, long cap = kDefaultEscapeCap,
                                    bool track_matrix = true, RowOp&& row_op = {}) {
  const auto& cls = *sys.cls;
  const int d = sys.dim();
  const ArrowKind first = sys.gamma0.kinds().front();
  FirstReturn<S> out;
  normalize_in_place(lambda);
  if (track_matrix) out.matrix = IntMatrix::identity(d);
  std::vector<double> approx(d);
  for (int i = 0; i < d; ++i) approx[i] = to_double(lambda[i]);
  double approx_total = 1.0;
  double log_scale = 0.0;
  constexpr double kRescaleBelow = std::is_same_v<S, double> ? 0x1p-16 : 0x1p-48;
  S tail(lambda[0]), scratch(lambda[0]);
  int v = sys.pi_index;
  for (long n = 1; n <= cap; ++n) {
    const Permutation& p = cls.members[v];
    ArrowKind k = detail::choose_arrow(lambda, p);
    const int w = arrow_winner(p, k), l = arrow_loser(p, k);
    out.moves = n;

    const auto& other = k == ArrowKind::top ? p.bottom_row() : p.top_row();
    const int pos = k == ArrowKind::top ? p.bottom_pos(w) : p.top_pos(w);
    const long len = d - 1 - pos;
    const long keep = sys.g0_lead / len + 2;
    bool skipped = false;
    if (approx[w] > static_cast<double>(keep + 1) * approx[l]) {
      double tail_d = 0.0;
      for (int i = pos + 1; i < d; ++i) tail_d += approx[other[i]];
      const double q = approx[w] / tail_d;
      if (q < 0x1p50) {
        const long skip = static_cast<long>(std::floor(q * (1.0 - 1e-12))) - keep;
        if (skip > 0) {
          tail = lambda[other[pos + 1]];
          for (int i = pos + 2; i < d; ++i) tail += lambda[other[i]];
          sub_multiple_assign(lambda[w], tail, skip, scratch);
          for (int i = pos + 1; i < d; ++i) {
            if (track_matrix) out.matrix.add_row_multiple(other[i], w, Integer(skip));
            row_op(other[i], w, static_cast<double>(skip));
          }
          long add;
          out.steps = __builtin_mul_overflow(skip, len, &add) ? std::numeric_limits<long>::max()
                                                               : detail::saturating_add(out.steps, add);
          skipped = true;
        }
      } else {
        tail = lambda[other[pos + 1]];
        for (int i = pos + 2; i < d; ++i) tail += lambda[other[i]];
        Integer skip = floor_of(S(lambda[w] / tail)) - keep;
        if (skip > 0) {
          lambda[w] -= scalar_from<S>(skip) * tail;
          const double c = skip.convert_to<double>();
          for (int i = pos + 1; i < d; ++i) {
            if (track_matrix) out.matrix.add_row_multiple(other[i], w, skip);
            row_op(other[i], w, c);
          }
          out.steps = detail::saturating_add(out.steps, Integer(skip * len));
          skipped = true;
        }
      }
    }
    if (!skipped) {
      sub_assign(lambda[w], lambda[l]);
      if (track_matrix) out.matrix.add_row(l, w);
      row_op(l, w, 1.0);
      out.steps = detail::saturating_add(out.steps, 1L);
      v = cls.next[v][static_cast<int>(k)];
      approx_total -= approx[l];
    }
    row_op.moved(v);
    approx[w] = to_double(lambda[w]);
    if (skipped) approx_total = std::accumulate(approx.begin(), approx.end(), 0.0);
    if constexpr (!is_exact_v<S>) {
      // Exact subtraction consumes mantissa bits; rescaling refreshes them.
      if (approx_total < kRescaleBelow) {
        S t = sum_of(lambda);
        for (auto& x : lambda) x /= t;
        log_scale += std::log(to_double(t));
        for (int i = 0; i < d; ++i) approx[i] = to_double(lambda[i]);
        approx_total = 1.0;
      }
    }
    const Permutation& q = cls.members[v];
    if (v == sys.pi_index && lambda[q.top_last()] != lambda[q.bottom_last()] &&
        (lambda[q.top_last()] > lambda[q.bottom_last()]) == (first == ArrowKind::top) &&
        detail::maybe_in_simplex(sys, approx) && in_simplex(sys, lambda)) {
      S total = sum_of(lambda);
      out.r = -(log_of(total) + log_scale);
      for (auto& x : lambda) x /= total;
      out.lambda = std::move(lambda);
      return out;
    }
  }
  throw CapExceeded("no return to the simplex within " + std::to_string(cap) + " induction moves");
}

/// log |B_gamma^* lambda'| for the return record; equals r by the
/// return-time formula.
template <class S>
double return_time_formula(const FirstReturn<S>& fr) {
  auto back = fr.matrix.transpose().apply(fr.lambda);
  return log_of(sum_of(back));
}

// ---------------------------------------------------------------------------
// Return cylinders and fast-decay tails.

struct Cylinder {
  std::string word;        // return path gamma
  double log_mass = 0.0;   // log mu(Delta_gamma) / mu(Delta), exact formula
  double norm = 0.0;       // max entry of B_gamma
};

struct FastDecayReport {
  std::vector<Cylinder> cylinders;
  double enumerated_mass = 0.0;
  double eps_min = 0.0;       // tails below this are not resolved
  double alpha1 = 0.0, alpha1_se = 0.0;
  double alpha2 = 0.0, alpha2_se = 0.0;
  std::vector<std::pair<double, double>> tail1;  // (eps, sum of masses <= eps)
  std::vector<std::pair<double, double>> tail2;  // (n, sum of masses with norm >= n)
};

/// Relative mass of the cylinder B_gamma^* Delta:
/// prod rowsum(B0) / prod rowsum(B0 B_gamma).
double cylinder_log_mass(const SimplexSystem& sys, const IntMatrix& b_gamma);

/// Monte Carlo estimate of the same ratio: E_U(Delta)[|B_gamma^* lambda|^-d].
double cylinder_mass_monte_carlo(const SimplexSystem& sys, const IntMatrix& b_gamma, long samples, std::uint64_t seed);

/// Enumerates primitive return paths with max entry <= norm_cap and fits the
/// tails of the two fast-decay sums on log-log scales.
FastDecayReport fast_decay_tails(const SimplexSystem& sys, double norm_cap, std::size_t max_cylinders = 2'000'000);

}  // namespace iet
