#include "iet/cocycle.hpp"

#include <cmath>

namespace iet {

IntMatrix restricted_matrix(const IntMatrix& b, const IntMatrix& lattice_basis) {
  auto x = solve_exact(lattice_basis, b * lattice_basis);
  IntMatrix out(static_cast<int>(x.size()), x.empty() ? 0 : static_cast<int>(x[0].size()));
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) {
      if (mp::denominator(x[i][j]) != 1) throw InternalError("restricted cocycle matrix is not integral");
      out(i, j) = mp::numerator(x[i][j]);
    }
  return out;
}

namespace {

// Thin QR of y; replaces y by Q with a positive diagonal of R and returns
// log |R_ii|.
std::vector<double> orthonormalize(Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  const int k = static_cast<int>(y.cols());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), k);
  std::vector<double> logs(k);
  for (int i = 0; i < k; ++i) {
    double rii = qr.matrixQR()(i, i);
    logs[i] = std::log(std::abs(rii));
    if (rii < 0) q.col(i) = -q.col(i);
  }
  y = std::move(q);
  return logs;
}

}  // namespace

std::vector<double> transport_frame(Eigen::MatrixXd& frame, const Eigen::MatrixXd& m) {
  frame = m * frame;
  return orthonormalize(frame);
}

std::vector<Eigen::MatrixXd> h_projectors(const SimplexSystem& sys) {
  std::vector<Eigen::MatrixXd> out;
  if (omega_maps(sys.pi).rank == sys.dim()) return out;
  for (const auto& p : sys.cls->members) {
    Eigen::MatrixXd q = omega_maps(p).h_basis;
    out.push_back(q * q.transpose());
  }
  return out;
}

void FrameTransport::reorthonormalize(int v) {
  if (projectors && !projectors->empty()) frame = (*projectors)[static_cast<std::size_t>(v)] * frame;
  orthonormalize_only();
}

void FrameTransport::orthonormalize_only() {
  large = false;
  auto logs = orthonormalize(frame);
  for (std::size_t i = 0; i < logs.size(); ++i) log_r[i] += logs[i];
}

std::vector<double> LyapunovEstimate::pairing_residuals() const {
  std::vector<double> out;
  const int k = static_cast<int>(exponents.size());
  for (int i = 0; i < k / 2; ++i) out.push_back(std::abs(exponents[i] + exponents[k - 1 - i]));
  return out;
}

std::vector<double> LyapunovEstimate::pairing_halfwidths() const {
  std::vector<double> out;
  const int k = static_cast<int>(exponents.size());
  for (int i = 0; i < k / 2; ++i) out.push_back(std::max(halfwidths[i], halfwidths[k - 1 - i]));
  return out;
}

int LyapunovEstimate::significantly_positive(double factor) const {
  int n = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i] > factor * halfwidths[i]) ++n;
  return n;
}

namespace {

// A product B_n X carried through row operations, rescaled by its largest
// entry to stay in range.
struct ScaledProduct {
  Eigen::MatrixXd x;
  double log_scale = 0.0;

  void operator()(int i, int j, double c) {
    x.row(i) += c * x.row(j);
    if (x.row(i).cwiseAbs().maxCoeff() > 0x1p400) rescale();
  }
  void moved(int) {}
  void rescale() {
    double s = x.cwiseAbs().maxCoeff();
    if (s > 0) {
      x /= s;
      log_scale += std::log(s);
    }
  }
};

DeviationResult run_deviation(const SimplexSystem& sys, const DeviationOptions& opt, const Eigen::MatrixXd& start,
                              double rate, bool exceed_is_event, bool use_spectral_norm) {
  if (opt.n_grid.empty()) throw InputError("deviation experiment needs a nonempty n grid");
  const long n_max = *std::max_element(opt.n_grid.begin(), opt.n_grid.end());
  std::vector<std::vector<unsigned char>> ind(opt.samples, std::vector<unsigned char>(opt.n_grid.size(), 0));
  std::vector<unsigned char> escaped(opt.samples, 0);

  parallel_samples(opt.samples, opt.workers, [&](long i) {
    auto rng = rng_stream(opt.seed, static_cast<std::uint64_t>(i));
    auto lambda = sample_simplex<Real>(sys, rng);
    ScaledProduct prod{start, 0.0};
    auto measure = [&]() {
      double norm = use_spectral_norm ? Eigen::JacobiSVD<Eigen::MatrixXd>(prod.x).singularValues()(0) : prod.x.norm();
      return prod.log_scale + std::log(norm);
    };
    auto record = [&](long n) {
      double ln = measure();
      for (std::size_t j = 0; j < opt.n_grid.size(); ++j)
        if (opt.n_grid[j] == n) {
          bool event = exceed_is_event ? ln >= rate * static_cast<double>(n) : ln <= rate * static_cast<double>(n);
          ind[i][j] = event ? 1 : 0;
        }
    };
    record(0);
    try {
      for (long n = 1; n <= n_max; ++n) {
        auto fr = simplex_first_return(sys, std::move(lambda), opt.escape_cap, false, prod);
        prod.rescale();
        lambda = std::move(fr.lambda);
        record(n);
      }
    } catch (const CapExceeded&) {
      escaped[i] = 1;
    }
  });

  DeviationResult res;
  res.samples = opt.samples;
  res.threshold_rate = rate;
  for (auto e : escaped) res.escaped += e;
  for (std::size_t j = 0; j < opt.n_grid.size(); ++j) {
    DeviationRow row;
    row.n = opt.n_grid[j];
    for (long i = 0; i < opt.samples; ++i) row.count += ind[i][j];
    row.p_hat = static_cast<double>(row.count) / static_cast<double>(opt.samples);
    row.ci = wilson_interval(row.count, opt.samples);
    res.rows.push_back(row);
  }
  std::vector<double> grid(opt.n_grid.begin(), opt.n_grid.end());
  res.fit = fit_decay(grid, ind, opt.seed);
  return res;
}

}  // namespace

DeviationResult anomalous_growth_experiment(const SimplexSystem& sys, double l_tilde, const DeviationOptions& opt) {
  Eigen::MatrixXd q = omega_maps(sys.pi).h_basis;
  return run_deviation(sys, opt, q, l_tilde, true, true);
}

DeviationResult contraction_deviation_experiment(const SimplexSystem& sys, double c_prime, const Eigen::VectorXd& v,
                                                 const DeviationOptions& opt) {
  if (v.size() != sys.dim()) throw InputError("vector dimension does not match the system");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw InputError("contraction experiment needs a unit vector");
  Eigen::MatrixXd start = v;
  return run_deviation(sys, opt, start, c_prime, false, false);
}

}  // namespace iet
