#pragma once

// Combinatorial invariants of a permutation: the singularity permutation
// sigma on {0..d}, its cycles, the vectors b^s, the genus, and the
// antisymmetric matrix Omega whose image H is the homology subspace.

#include <Eigen/Dense>

#include <vector>

#include "iet/int_matrix.hpp"
#include "iet/permutation.hpp"

namespace iet {

struct SingularityProfile {
  std::vector<int> sigma;                  // permutation of {0..d}
  std::vector<std::vector<int>> orbits;    // cycles of sigma, each sorted, ordered by minimum
  std::vector<std::vector<int>> b_vectors; // b^s per orbit, indexed by letter
  int genus = 0;
};

SingularityProfile singularity_profile(const Permutation& p);

struct OneVectorRule {
  std::vector<int> values;  // (1,...,1) . b^s per orbit
  bool ones_in_h = false;   // (1,...,1) orthogonal to every b^s
};

/// Evaluates (1,...,1).b^s and checks it against the closed form
/// (+1 if 0 in s and d not in s, -1 if the reverse, 0 otherwise).
/// Throws InternalError on a mismatch.
OneVectorRule check_one_vector_rule(const Permutation& p);

struct TranslationStructure {
  IntMatrix omega_t;        // [pi_t(beta) < pi_t(alpha)]
  IntMatrix omega_b;        // [pi_b(beta) < pi_b(alpha)]
  IntMatrix omega;          // omega_b - omega_t
  int rank = 0;             // exact rank, equals 2 * genus
  Eigen::MatrixXd h_basis;  // d x rank, orthonormal columns spanning H
};

TranslationStructure omega_maps(const Permutation& p);

/// Orthonormal basis of the column space of m (singular values above tol).
Eigen::MatrixXd orthonormal_column_basis(const Eigen::MatrixXd& m, double tol = 1e-10);

/// Basis (columns) of the lattice H(p) cap Z^d.
IntMatrix h_lattice_basis(const Permutation& p);

/// Matrix whose rows are the b^s vectors.
IntMatrix b_matrix(const Permutation& p);

/// Max over s of |<v, b^s>| / |b^s| (0 when every b^s vanishes).
double h_membership_residual(const Permutation& p, const Eigen::VectorXd& v);

}  // namespace iet
