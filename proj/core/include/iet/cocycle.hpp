#pragma once

// The accelerated cocycle (T, A): A is the return matrix B_gamma restricted
// to H(pi). Lyapunov spectra by QR re-orthonormalization, and the two
// large-deviation experiments.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "iet/combinatorics.hpp"
#include "iet/simplex.hpp"
#include "iet/stats.hpp"

namespace iet {

/// Orthogonal projectors onto H(pi') for every vertex pi' of the Rauzy
/// class; empty when H(pi) is all of R^d.
std::vector<Eigen::MatrixXd> h_projectors(const SimplexSystem& sys);

template <class S>
struct CocycleState {
  std::vector<S> lambda;        // current point of Delta, |lambda| = 1
  Eigen::MatrixXd frame;        // d x 2g orthonormal columns spanning H(pi)
  std::vector<double> log_norms;
  std::vector<Eigen::MatrixXd> projectors;  // see h_projectors
  long step = 0;                // Delta-returns so far
  long renorm_steps = 0;
  double time = 0.0;            // accumulated return time r
};

template <class S>
CocycleState<S> initial_state(const SimplexSystem& sys, std::vector<S> lambda) {
  if (!in_simplex(sys, lambda)) throw InputError("starting point is not in the simplex");
  normalize_in_place(lambda);
  CocycleState<S> st;
  st.lambda = std::move(lambda);
  st.frame = omega_maps(sys.pi).h_basis;
  st.log_norms.assign(st.frame.cols(), 0.0);
  st.projectors = h_projectors(sys);
  return st;
}

/// Coordinates of B restricted to H(pi) in the lattice basis L of
/// H(pi) cap Z^d: the integer matrix X with B L = L X.
IntMatrix restricted_matrix(const IntMatrix& b, const IntMatrix& lattice_basis);

/// Multiplies the frame by M, re-orthonormalizes, returns log |R_ii|.
std::vector<double> transport_frame(Eigen::MatrixXd& frame, const Eigen::MatrixXd& m);

/// Frame carried through the row operations of a return path. After a move
/// that pushed an entry above `limit` the columns are projected back onto
/// H of the current vertex (rounding would otherwise feed directions outside
/// H) and re-orthonormalized. The logs of the diagonal of R accumulate in
/// log_r.
struct FrameTransport {
  Eigen::MatrixXd frame;
  std::vector<double> log_r;
  const std::vector<Eigen::MatrixXd>* projectors = nullptr;
  double limit = 0x1p10;
  bool large = false;

  FrameTransport(Eigen::MatrixXd f, const std::vector<Eigen::MatrixXd>* proj)
      : frame(std::move(f)), log_r(frame.cols(), 0.0), projectors(proj) {}
  /// Large multipliers are split as c = a + a + 2a + 4a + ... (the
  /// elementary matrices compose additively) with a QR after each part, so
  /// the columns never differ in size by much more than `limit`.
  void operator()(int i, int j, double c) {
    double done = 0.0;
    for (;;) {
      const double part = std::min(c - done, std::max(done, limit));
      frame.row(i) += part * frame.row(j);
      done += part;
      if (done >= c) break;
      orthonormalize_only();
    }
    if (frame.row(i).cwiseAbs().maxCoeff() > limit) large = true;
  }
  void moved(int v) {
    if (large) reorthonormalize(v);
  }
  /// Projects onto H(pi_v), then orthonormalizes.
  void reorthonormalize(int v);
  void orthonormalize_only();
};

struct StepRecord {
  IntMatrix b;                   // full return matrix B_gamma, when kept
  std::vector<double> log_r;     // per-column log growth of this step
  double r = 0.0;                // return time
  long renorm_steps = 0;
};

template <class S>
StepRecord cocycle_step(const SimplexSystem& sys, CocycleState<S>& st, long escape_cap = kDefaultEscapeCap,
                        bool keep_matrix = false) {
  FrameTransport ft(std::move(st.frame), &st.projectors);
  auto fr = simplex_first_return(sys, st.lambda, escape_cap, keep_matrix, ft);
  ft.reorthonormalize(sys.pi_index);
  StepRecord rec;
  rec.log_r = std::move(ft.log_r);
  st.frame = std::move(ft.frame);
  for (std::size_t i = 0; i < rec.log_r.size(); ++i) st.log_norms[i] += rec.log_r[i];
  st.lambda = std::move(fr.lambda);
  st.step += 1;
  st.renorm_steps += fr.steps;
  st.time += fr.r;
  rec.b = std::move(fr.matrix);
  rec.r = fr.r;
  rec.renorm_steps = fr.steps;
  return rec;
}

struct LyapunovEstimate {
  std::vector<double> exponents;   // sorted descending, per Delta-return
  std::vector<double> halfwidths;  // bootstrap 95% half-widths
  long steps = 0;
  long burn_in = 0;
  double mean_return_time = 0.0;   // divide exponents by this for flow time
  double mean_renorm_steps = 0.0;
  double max_h_residual = 0.0;     // frame drift away from H(pi)
  int genus = 0;

  /// |theta_i + theta_{2g+1-i}| per pair i = 1..g.
  std::vector<double> pairing_residuals() const;
  /// max of the two half-widths for pair i.
  std::vector<double> pairing_halfwidths() const;
  int significantly_positive(double factor = 3.0) const;
};

struct LyapunovOptions {
  long steps = 100'000;
  long burn_in = -1;  // default steps / 100
  long escape_cap = kDefaultEscapeCap;
  std::uint64_t seed = 1;
};

template <class S>
LyapunovEstimate lyapunov_spectrum(const SimplexSystem& sys, std::vector<S> lambda0, const LyapunovOptions& opt) {
  if (opt.steps < 1000) throw InputError("lyapunov_spectrum needs at least 1000 steps");
  const long burn = opt.burn_in >= 0 ? opt.burn_in : opt.steps / 100;
  auto st = initial_state(sys, std::move(lambda0));
  const int k = static_cast<int>(st.frame.cols());
  std::vector<std::vector<double>> series(k);
  for (auto& s : series) s.reserve(opt.steps);
  double total_r = 0.0, total_steps = 0.0, worst = 0.0;
  for (long n = 0; n < burn + opt.steps; ++n) {
    auto rec = cocycle_step(sys, st, opt.escape_cap);
    if (n < burn) continue;
    for (int i = 0; i < k; ++i) series[i].push_back(rec.log_r[i]);
    total_r += rec.r;
    total_steps += static_cast<double>(rec.renorm_steps);
    if (n % 1000 == 0) {
      for (int c = 0; c < k; ++c) worst = std::max(worst, h_membership_residual(sys.pi, st.frame.col(c)));
    }
  }
  LyapunovEstimate est;
  est.steps = opt.steps;
  est.burn_in = burn;
  est.genus = k / 2;
  est.mean_return_time = total_r / static_cast<double>(opt.steps);
  est.mean_renorm_steps = total_steps / static_cast<double>(opt.steps);
  est.max_h_residual = worst;
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < k; ++i) {
    double mean = 0.0;
    for (double x : series[i]) mean += x;
    mean /= static_cast<double>(series[i].size());
    pairs.emplace_back(mean, block_bootstrap_halfwidth(series[i], opt.seed + static_cast<std::uint64_t>(i)));
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [m, h] : pairs) {
    est.exponents.push_back(m);
    est.halfwidths.push_back(h);
  }
  return est;
}

// ---------------------------------------------------------------------------
// Large deviations.

struct DeviationRow {
  long n = 0;
  long count = 0;
  double p_hat = 0.0;
  Interval ci;
};

struct DeviationResult {
  std::vector<DeviationRow> rows;
  DecayFit fit;
  long samples = 0;
  long escaped = 0;  // samples that hit the escape cap (counted as not exceeding)
  double threshold_rate = 0.0;
};

struct DeviationOptions {
  std::vector<long> n_grid;
  long samples = 2000;
  std::uint64_t seed = 1;
  long escape_cap = kDefaultEscapeCap;
  unsigned workers = 1;
};

/// Fraction of samples of Delta with ||A_n|| >= exp(L_tilde n), A_n the
/// cocycle restricted to H(pi) (operator 2-norm in an orthonormal basis).
DeviationResult anomalous_growth_experiment(const SimplexSystem& sys, double l_tilde, const DeviationOptions& opt);

/// Fraction of samples with ||B_n v|| <= exp(c' n), B_n the full cocycle on
/// R^d and v a unit vector.
DeviationResult contraction_deviation_experiment(const SimplexSystem& sys, double c_prime, const Eigen::VectorXd& v,
                                                 const DeviationOptions& opt);

}  // namespace iet
