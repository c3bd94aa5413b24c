#pragma once

// Dense matrices over arbitrary-precision integers. Sizes here are tiny
// (d <= ~10), so a flat row-major vector is all we need.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "iet/numeric.hpp"

namespace iet {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(int d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Integer& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Integer& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  /// row i += row j (left multiplication by 1 + E_ij).
  void add_row(int i, int j);
  /// row i += c * row j.
  void add_row_multiple(int i, int j, const Integer& c);
  /// col j += col i (right multiplication by 1 + E_ij).
  void add_col(int i, int j);

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

  bool all_positive() const;
  bool all_nonnegative() const;
  bool is_antisymmetric() const;
  /// Max absolute entry.
  Integer max_abs() const;
  /// Sum of the entries of row i.
  Integer row_sum(int i) const;
  /// log of the max absolute entry (0 for the zero matrix).
  double log_max_abs() const;

  /// Exact determinant (Bareiss).
  Integer determinant() const;
  /// Exact rank over Q.
  int rank() const;
  /// Inverse of a unimodular matrix; throws InternalError otherwise.
  IntMatrix unimodular_inverse() const;

  /// Conversion to double; entries beyond double range overflow to inf.
  Eigen::MatrixXd to_eigen() const;
  /// Conversion after dividing every entry by 2^shift.
  Eigen::MatrixXd to_eigen_scaled(long shift) const;

  template <class S>
  std::vector<S> apply(const std::vector<S>& v) const {
    std::vector<S> out(rows_, S(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        const Integer& e = (*this)(i, j);
        if (e == 0) continue;
        if (e == 1)
          out[i] += v[j];
        else
          out[i] += scalar_from<S>(e) * v[j];
      }
    return out;
  }

  std::string to_string() const;
  std::vector<std::vector<std::string>> to_rows() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

/// Basis (as columns) of the lattice {x in Z^n : M x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);

/// Solves X with A X = B exactly over Q when A has full column rank and the
/// system is consistent; throws InternalError otherwise.
std::vector<std::vector<Rational>> solve_exact(const IntMatrix& a, const IntMatrix& b);

}  // namespace iet
