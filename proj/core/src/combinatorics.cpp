#include "iet/combinatorics.hpp"

#include <algorithm>
#include <cmath>

#include "iet/errors.hpp"

namespace iet {

SingularityProfile singularity_profile(const Permutation& p) {
  p.require_irreducible("singularity_profile");
  const int d = p.size();
  auto mono = p.monodromy();  // mono[i-1] = pi~(i)
  std::vector<int> inv(d + 1);
  for (int i = 1; i <= d; ++i) inv[mono[i - 1]] = i;

  SingularityProfile prof;
  prof.sigma.assign(d + 1, -1);
  prof.sigma[0] = inv[1] - 1;
  for (int i = 1; i <= d; ++i) {
    if (mono[i - 1] == d)
      prof.sigma[i] = d;
    else
      prof.sigma[i] = inv[mono[i - 1] + 1] - 1;
  }

  std::vector<bool> seen(d + 1, false);
  for (int start = 0; start <= d; ++start) {
    if (seen[start]) continue;
    std::vector<int> orbit;
    for (int j = start; !seen[j]; j = prof.sigma[j]) {
      seen[j] = true;
      orbit.push_back(j);
    }
    std::sort(orbit.begin(), orbit.end());
    prof.orbits.push_back(std::move(orbit));
  }

  for (const auto& orbit : prof.orbits) {
    std::vector<int> chi(d + 1, 0);
    for (int j : orbit) chi[j] = 1;
    std::vector<int> b(d, 0);
    for (int i = 1; i <= d; ++i) b[p.top_letter(i - 1)] = chi[i - 1] - chi[i];
    prof.b_vectors.push_back(std::move(b));
  }

  const int excess = d + 1 - static_cast<int>(prof.orbits.size());
  if (excess % 2 != 0) throw InternalError("odd d+1-#Sigma for " + p.to_string());
  prof.genus = excess / 2;
  return prof;
}

OneVectorRule check_one_vector_rule(const Permutation& p) {
  auto prof = singularity_profile(p);
  const int d = p.size();
  OneVectorRule out;
  out.ones_in_h = true;
  for (std::size_t k = 0; k < prof.orbits.size(); ++k) {
    int dot = 0;
    for (int v : prof.b_vectors[k]) dot += v;
    const auto& s = prof.orbits[k];
    bool has0 = std::find(s.begin(), s.end(), 0) != s.end();
    bool hasd = std::find(s.begin(), s.end(), d) != s.end();
    int expected = (has0 && !hasd) ? 1 : (!has0 && hasd) ? -1 : 0;
    if (dot != expected)
      throw InternalError("one-vector rule violated for " + p.to_string() + " on orbit " + std::to_string(k));
    out.values.push_back(dot);
    if (dot != 0) out.ones_in_h = false;
  }
  return out;
}

Eigen::MatrixXd orthonormal_column_basis(const Eigen::MatrixXd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv(r) > tol) ++r;
  return svd.matrixU().leftCols(r);
}

TranslationStructure omega_maps(const Permutation& p) {
  p.require_irreducible("omega_maps");
  const int d = p.size();
  TranslationStructure ts{IntMatrix(d, d), IntMatrix(d, d), IntMatrix(d, d), 0, {}};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      ts.omega_t(a, b) = p.top_pos(b) < p.top_pos(a) ? 1 : 0;
      ts.omega_b(a, b) = p.bottom_pos(b) < p.bottom_pos(a) ? 1 : 0;
    }
  ts.omega = ts.omega_b - ts.omega_t;
  ts.rank = ts.omega.rank();
  ts.h_basis = orthonormal_column_basis(ts.omega.to_eigen());
  if (ts.h_basis.cols() != ts.rank) throw InternalError("float rank of Omega disagrees with exact rank");
  return ts;
}

IntMatrix b_matrix(const Permutation& p) {
  auto prof = singularity_profile(p);
  IntMatrix m(static_cast<int>(prof.b_vectors.size()), p.size());
  for (int s = 0; s < m.rows(); ++s)
    for (int j = 0; j < p.size(); ++j) m(s, j) = prof.b_vectors[s][j];
  return m;
}

IntMatrix h_lattice_basis(const Permutation& p) {
  // H is the orthogonal complement of span{b^s}, so H cap Z^d is the integer
  // kernel of the b-matrix.
  return integer_kernel(b_matrix(p));
}

double h_membership_residual(const Permutation& p, const Eigen::VectorXd& v) {
  auto prof = singularity_profile(p);
  double worst = 0.0;
  for (const auto& b : prof.b_vectors) {
    double dot = 0.0, nb = 0.0;
    for (int j = 0; j < p.size(); ++j) {
      dot += b[j] * v(j);
      nb += b[j] * b[j];
    }
    if (nb > 0) worst = std::max(worst, std::abs(dot) / std::sqrt(nb));
  }
  return worst;
}

}  // namespace iet
