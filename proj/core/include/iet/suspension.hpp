#pragma once

// Suspension data: tau in the cone T^+(pi), heights h = -Omega tau,
// zippered-rectangle coordinates, special flows under piecewise constant
// roofs, and induction extended to heights.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "iet/combinatorics.hpp"
#include "iet/iet.hpp"
#include "iet/rauzy.hpp"

namespace iet {

/// Strict partial-sum inequalities of T^+(pi): top-row sums > 0 and
/// bottom-row sums < 0 for k = 1..d-1.
template <class S>
bool in_tau_cone(const Permutation& p, const std::vector<S>& tau) {
  S top(0), bot(0);
  for (int k = 0; k + 1 < p.size(); ++k) {
    top += tau[p.top_letter(k)];
    bot += tau[p.bottom_letter(k)];
    if (!(sign(top) > 0) || !(sign(bot) < 0)) return false;
  }
  return true;
}

template <class S>
std::vector<S> heights_from_tau(const Permutation& p, const std::vector<S>& tau) {
  auto h = omega_maps(p).omega.apply(tau);
  for (auto& x : h) x = -x;
  return h;
}

struct SuspensionDatum {
  std::vector<double> tau;
  std::vector<double> heights;
  double area = 0.0;  // sum lambda_alpha h_alpha, filled when lengths are known
  long attempts = 0;
};

/// Rejection sampling of tau from [-1, 1]^d.
SuspensionDatum sample_tau(const Permutation& p, std::mt19937_64& rng, long cap = 1'000'000);

template <class S>
struct Rectangle {
  int letter;
  S x0, x1;  // base
  S y0, y1;  // [0, h] for top rectangles, [-h, 0] for bottom ones
};

template <class S>
struct ZipperedRectangles {
  std::vector<Rectangle<S>> top, bottom;
  S area;  // total of top and bottom rectangles: 2 sum lambda h
};

template <class S>
ZipperedRectangles<S> zippered_rectangles(const Permutation& p, const std::vector<S>& lambda,
                                          const std::vector<S>& h) {
  p.require_irreducible("zippered_rectangles");
  require_positive_lengths(lambda, p.size());
  require_positive_lengths(h, p.size());
  auto ts = omega_maps(p);
  auto wt = ts.omega_t.apply(lambda);
  auto wb = ts.omega_b.apply(lambda);
  ZipperedRectangles<S> z{{}, {}, S(0)};
  for (int a = 0; a < p.size(); ++a) {
    z.top.push_back({a, wt[a], wt[a] + lambda[a], S(0), h[a]});
    z.bottom.push_back({a, wb[a], wb[a] + lambda[a], -h[a], S(0)});
    z.area += S(2) * lambda[a] * h[a];
  }
  return z;
}

template <class S>
struct SpecialFlow {
  IetMap<S> base;
  std::vector<S> heights;  // roof over I_alpha, by letter
};

template <class S>
SpecialFlow<S> make_special_flow(const Permutation& p, std::vector<S> lambda, std::vector<S> heights) {
  require_positive_lengths(heights, p.size());
  return {build_iet(p, std::move(lambda)), std::move(heights)};
}

template <class S>
struct FlowPoint {
  S x;
  S s;
  long crossings = 0;
  long nudges = 0;  // float-mode perturbations off breakpoints
};

/// Interior breakpoints of f: left endpoints of I_alpha other than 0.
template <class S>
bool is_interior_breakpoint(const IetMap<S>& f, const S& x) {
  for (int a = 0; a < f.perm.size(); ++a)
    if (sign(f.top_left[a]) > 0 && x == f.top_left[a]) return true;
  return false;
}

/// Flows (x, s) upward for `time`, applying f at each roof.
template <class S>
FlowPoint<S> special_flow_evaluate(const SpecialFlow<S>& flow, S x, S s, S time, unsigned precision_bits = 53) {
  if (sign(time) < 0) throw InputError("flow time must be nonnegative");
  int a = flow.base.top_interval(x);
  if (sign(s) < 0 || !(s < flow.heights[a])) throw InputError("point is outside the flow domain");
  FlowPoint<S> out{x, s, 0, 0};
  S remaining = s + time;
  while (!(remaining < flow.heights[a])) {
    remaining -= flow.heights[a];
    out.x = flow.base.evaluate(out.x);
    ++out.crossings;
    if (is_interior_breakpoint(flow.base, out.x)) {
      if constexpr (is_exact_v<S>) {
        throw DiscontinuityError("flow orbit hits the breakpoint " + to_string(out.x) + " exactly");
      } else {
        S eps = flow.base.total * S(std::ldexp(1.0, -static_cast<int>(precision_bits / 2)));
        out.x += eps;
        ++out.nudges;
      }
    }
    a = flow.base.top_interval(out.x);
  }
  out.s = remaining;
  return out;
}

template <class S>
struct ExtendedStep {
  std::vector<S> lambda;
  Permutation perm;
  std::vector<S> heights;
  ArrowKind kind;
};

/// (lambda, pi, h) -> (Q_R(lambda, pi), B h).
template <class S>
ExtendedStep<S> extended_induction_step(const std::vector<S>& lambda, const Permutation& p, const std::vector<S>& h) {
  auto r = induction_step(lambda, p);
  std::vector<S> h2 = h;
  // B = 1 + E_{loser, winner}: the loser height gains the winner height.
  h2[r.loser] += h2[r.winner];
  return {std::move(r.lambda), std::move(r.perm), std::move(h2), r.kind};
}

template <class S>
S suspension_area(const std::vector<S>& lambda, const std::vector<S>& h) {
  S a(0);
  for (std::size_t i = 0; i < lambda.size(); ++i) a += lambda[i] * h[i];
  return a;
}

}  // namespace iet
