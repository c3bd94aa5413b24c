#pragma once

// Lines near the origin and their children under the cocycle, the survival
// process behind Gamma_delta^m(J), weak-stable membership along an orbit,
// and the Veech-criterion scanner.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iet/combinatorics.hpp"
#include "iet/simplex.hpp"
#include "iet/stats.hpp"

namespace iet {

/// Euclidean distance from v to Z^d.
double distance_to_lattice(const Eigen::VectorXd& v);

template <class S>
double distance_to_lattice(const std::vector<S>& v) {
  double s = 0.0;
  for (const auto& x : v) {
    double r = to_double(x - scalar_from<S>(nearest_integer(x)));
    s += r * r;
  }
  return std::sqrt(s);
}

/// Reduces v modulo Z^d into the cube (-1/2, 1/2]^d (ties go downward).
template <class S>
void reduce_mod_lattice(std::vector<S>& v) {
  for (auto& x : v) x -= scalar_from<S>(nearest_integer(x));
}

/// An affine line offset + s * direction with |direction| = 1 and
/// offset orthogonal to direction, so that |offset| = ||J||.
struct LineSegment {
  Eigen::VectorXd direction;
  Eigen::VectorXd offset;
  double norm = 0.0;

  /// Line through `point` with direction `dir` (normalized here).
  static LineSegment through(const Eigen::VectorXd& point, const Eigen::VectorXd& dir);
  /// Half-length of J cap B_delta(0) (0 when the line misses the ball).
  double half_chord(double delta) const;
};

struct Child {
  LineSegment line;
  Eigen::VectorXi anchor;  // c in Z^d \ {0}; the child is A J - c
};

struct ChildSet {
  std::optional<LineSegment> trivial;  // A J when ||A J|| < delta
  std::vector<Child> nontrivial;
};

/// Lattice points c with B_delta(c) meeting the segment [p, q] (c = 0
/// included when it qualifies). Walks the nearest-integer map across the
/// half-integer crossings of the segment.
std::vector<Eigen::VectorXi> lattice_points_near_segment(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                                         double delta);

/// Children of J under A: the trivial child when ||A J|| < delta and one
/// non-trivial child A J - c for each c != 0 with
/// A (J cap B_delta(0)) cap B_delta(c) nonempty.
ChildSet children(const LineSegment& j, const IntMatrix& a, double delta);

/// Brute-force reference: anchors c != 0 hit by densely sampled points of
/// A (J cap B_delta(0)).
std::vector<Eigen::VectorXi> children_sampling_oracle(const LineSegment& j, const IntMatrix& a, double delta,
                                                      long samples);

// ---------------------------------------------------------------------------
// Survival process.

struct SurvivalOptions {
  double delta = 0.05;
  int n_block = 5;        // N: Delta-returns per generation
  int m_max = 20;
  long samples = 5000;
  std::uint64_t seed = 1;
  std::size_t population_cap = 10'000;
  long escape_cap = kDefaultEscapeCap;
  unsigned workers = 1;
};

struct SurvivalRow {
  int m = 0;
  long count = 0;
  double p_hat = 0.0;
  Interval ci;
};

struct SurvivalStats {
  std::vector<SurvivalRow> rows;
  DecayFit fit;            // log p ~ log C - kappa m
  long samples = 0;
  long capped = 0;         // samples whose population hit the cap (kept alive)
  long escaped = 0;        // samples whose orbit hit the escape cap (kept alive)
  std::vector<int> survival_generations;  // per sample: last m survived
};

/// Tracks J cap W^s_{delta, mN}(lambda) as a union of segments: after each
/// Delta-return every piece is mapped by B_gamma, split at the lattice balls
/// B_delta(c) it meets, clipped, and translated back by -c.
SurvivalStats survival_probability(const SimplexSystem& sys, const LineSegment& j, const SurvivalOptions& opt);

struct SampleOutcome {
  int generations = -1;  // last m survived (0..m_max), -1 when J misses B_delta(0)
  bool capped = false;
  bool escaped = false;
};

/// Runs the process for one point of Delta.
SampleOutcome survival_generations(const SimplexSystem& sys, std::vector<Real> lambda, const LineSegment& j,
                                   const SurvivalOptions& opt);

// ---------------------------------------------------------------------------
// Weak-stable membership and the Veech criterion.

struct MembershipResult {
  bool survived = true;
  long first_failure = -1;  // return index k with distance >= delta, or -1
  std::vector<double> distances;
};

/// Follows ||A_k w||_{R^d/Z^d} for k <= n_max * N; requires |w| < delta.
template <class SL, class SV>
MembershipResult weak_stable_membership(const SimplexSystem& sys, std::vector<SL> lambda, std::vector<SV> w,
                                        double delta, long n_max, long n_block, long escape_cap = kDefaultEscapeCap) {
  if (!(delta > 0 && delta < 0.1)) throw InputError("delta must lie in (0, 1/10)");
  if (static_cast<int>(w.size()) != sys.dim()) throw InputError("vector dimension does not match the system");
  double wn = 0.0;
  for (const auto& x : w) wn += to_double(x) * to_double(x);
  if (!(std::sqrt(wn) < delta)) throw InputError("weak-stable membership needs |w| < delta");
  MembershipResult res;
  res.distances.push_back(distance_to_lattice(w));
  for (long k = 1; k <= n_max * n_block; ++k) {
    auto fr = simplex_first_return(sys, std::move(lambda), escape_cap);
    lambda = std::move(fr.lambda);
    w = fr.matrix.apply(w);
    reduce_mod_lattice(w);
    double dist = distance_to_lattice(w);
    res.distances.push_back(dist);
    if (!(dist < delta)) {
      res.survived = false;
      res.first_failure = k;
      return res;
    }
  }
  return res;
}

enum class VeechVerdict { candidate, not_candidate, integer_trivial, excluded };
std::string to_string(VeechVerdict v);

struct VeechResult {
  std::vector<double> distances;  // d_k at the k-th visit to Delta x {pi}
  std::vector<long> visit_steps;  // renormalization step counts n_k
  double tail_max = 0.0;          // max over the last quarter of visits
  VeechVerdict verdict = VeechVerdict::not_candidate;
};

/// Checks h in H(pi): exactly for exact scalars, to 1e-10 otherwise.
template <class SV>
void require_in_h(const Permutation& p, const std::vector<SV>& h) {
  auto prof = singularity_profile(p);
  for (const auto& b : prof.b_vectors) {
    SV dot(0);
    for (int j = 0; j < p.size(); ++j)
      if (b[j] != 0) dot += scalar_from<SV>(Integer(b[j])) * h[j];
    bool ok = is_exact_v<SV> ? sign(dot) == 0 : std::abs(to_double(dot)) <= 1e-10;
    if (!ok) throw InputError("vector h is not in H(pi)");
  }
}

/// Record of the Delta-return matrices along one orbit, reused by scans.
struct OrbitRecord {
  std::vector<IntMatrix> matrices;
  std::vector<long> steps;  // cumulative renormalization steps at each visit
};

template <class SL>
OrbitRecord record_orbit(const SimplexSystem& sys, std::vector<SL> lambda, long visits,
                         long escape_cap = kDefaultEscapeCap) {
  if (!in_simplex(sys, lambda)) throw InputError("starting point is not in the simplex");
  OrbitRecord rec;
  long total = 0;
  for (long k = 0; k < visits; ++k) {
    auto fr = simplex_first_return(sys, std::move(lambda), escape_cap);
    total += fr.steps;
    rec.matrices.push_back(std::move(fr.matrix));
    rec.steps.push_back(total);
    lambda = std::move(fr.lambda);
  }
  return rec;
}

/// Distances of B_{n_k} t h to Z^d at recorded visits, reduced exactly in
/// the scalar type of th.
template <class SV>
VeechResult veech_from_orbit(const OrbitRecord& orbit, std::vector<SV> th, double tol = 1e-3) {
  VeechResult res;
  bool integral = true;
  for (const auto& x : th)
    if (sign(x - scalar_from<SV>(nearest_integer(x))) != 0) integral = false;
  reduce_mod_lattice(th);
  for (std::size_t k = 0; k < orbit.matrices.size(); ++k) {
    th = orbit.matrices[k].apply(th);
    reduce_mod_lattice(th);
    res.distances.push_back(distance_to_lattice(th));
    res.visit_steps.push_back(orbit.steps[k]);
  }
  const std::size_t n = res.distances.size();
  const std::size_t from = n - std::max<std::size_t>(1, n / 4);
  for (std::size_t k = from; k < n; ++k) res.tail_max = std::max(res.tail_max, res.distances[k]);
  if (integral)
    res.verdict = VeechVerdict::integer_trivial;
  else
    res.verdict = res.tail_max < tol ? VeechVerdict::candidate : VeechVerdict::not_candidate;
  return res;
}

template <class SL, class SV>
VeechResult veech_criterion_test(const SimplexSystem& sys, const std::vector<SL>& lambda, const SV& t,
                                 const std::vector<SV>& h, long n_visits, double tol = 1e-3,
                                 long escape_cap = kDefaultEscapeCap) {
  if (n_visits < 1) throw InputError("need at least one visit");
  require_in_h(sys.pi, h);
  auto orbit = record_orbit(sys, lambda, n_visits, escape_cap);
  std::vector<SV> th;
  for (const auto& x : h) th.push_back(t * x);
  return veech_from_orbit(orbit, th, tol);
}

struct ScanRow {
  std::string t;
  double t_value = 0.0;
  long visits_used = 0;
  double tail_max = 0.0;
  VeechVerdict verdict = VeechVerdict::not_candidate;
};

/// Veech criterion with h = (1,...,1) over a grid of t. When (1,...,1) is
/// not in H(pi) every row is reported as excluded without iterating.
template <class SL>
std::vector<ScanRow> weak_mixing_scan(const SimplexSystem& sys, const std::vector<SL>& lambda,
                                      const std::vector<Quadratic>& t_grid, long n_visits, double tol = 1e-3,
                                      long escape_cap = kDefaultEscapeCap) {
  std::vector<ScanRow> rows;
  auto rule = check_one_vector_rule(sys.pi);
  if (!rule.ones_in_h) {
    for (const auto& t : t_grid) rows.push_back({to_string(t), to_double(t), 0, 0.0, VeechVerdict::excluded});
    return rows;
  }
  auto orbit = record_orbit(sys, lambda, n_visits, escape_cap);
  for (const auto& t : t_grid) {
    std::vector<Quadratic> th(sys.dim(), t);
    auto r = veech_from_orbit(orbit, th, tol);
    rows.push_back({to_string(t), to_double(t), n_visits, r.tail_max, r.verdict});
  }
  return rows;
}

}  // namespace iet
