#include "iet/int_matrix.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace iet {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw InputError("ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(int d) {
  IntMatrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = 1;
  return m;
}

void IntMatrix::add_row(int i, int j) {
  for (int k = 0; k < cols_; ++k) (*this)(i, k) += (*this)(j, k);
}

void IntMatrix::add_row_multiple(int i, int j, const Integer& c) {
  for (int k = 0; k < cols_; ++k) (*this)(i, k) += c * (*this)(j, k);
}

void IntMatrix::add_col(int i, int j) {
  for (int k = 0; k < rows_; ++k) (*this)(k, j) += (*this)(k, i);
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw InternalError("matrix size mismatch in product");
  IntMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  IntMatrix r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
  return r;
}

bool IntMatrix::all_positive() const {
  for (const auto& e : data_)
    if (e <= 0) return false;
  return true;
}

bool IntMatrix::all_nonnegative() const {
  for (const auto& e : data_)
    if (e < 0) return false;
  return true;
}

bool IntMatrix::is_antisymmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if ((*this)(i, j) != -(*this)(j, i)) return false;
  return true;
}

Integer IntMatrix::max_abs() const {
  Integer m = 0;
  for (const auto& e : data_) m = std::max(m, Integer(abs(e)));
  return m;
}

Integer IntMatrix::row_sum(int i) const {
  Integer s = 0;
  for (int j = 0; j < cols_; ++j) s += (*this)(i, j);
  return s;
}

double IntMatrix::log_max_abs() const {
  Integer m = max_abs();
  if (m == 0) return 0.0;
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, m.backend().data());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

Integer IntMatrix::determinant() const {
  if (rows_ != cols_) throw InternalError("determinant of a non-square matrix");
  const int n = rows_;
  if (n == 0) return 1;
  IntMatrix a = *this;
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

int IntMatrix::rank() const {
  std::vector<std::vector<Rational>> rows(rows_, std::vector<Rational>(cols_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) rows[i][j] = Rational((*this)(i, j));
  return static_cast<int>(rational_rank(std::move(rows)));
}

IntMatrix IntMatrix::unimodular_inverse() const {
  if (rows_ != cols_) throw InternalError("inverse of a non-square matrix");
  const int n = rows_;
  std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = Rational((*this)(i, j));
    aug[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && aug[p][c] == 0) ++p;
    if (p == n) throw InternalError("singular matrix has no inverse");
    std::swap(aug[p], aug[c]);
    Rational piv = aug[c][c];
    for (auto& e : aug[c]) e /= piv;
    for (int r = 0; r < n; ++r) {
      if (r == c || aug[r][c] == 0) continue;
      Rational f = aug[r][c];
      for (int k = 0; k < 2 * n; ++k) aug[r][k] -= f * aug[c][k];
    }
  }
  IntMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Rational& e = aug[i][n + j];
      if (mp::denominator(e) != 1) throw InternalError("matrix is not unimodular");
      inv(i, j) = mp::numerator(e);
    }
  return inv;
}

Eigen::MatrixXd IntMatrix::to_eigen() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).convert_to<double>();
  return m;
}

Eigen::MatrixXd IntMatrix::to_eigen_scaled(long shift) const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      long exp = 0;
      double mant = mpz_get_d_2exp(&exp, (*this)(i, j).backend().data());
      m(i, j) = std::ldexp(mant, static_cast<int>(exp - shift));
    }
  return m;
}

std::string IntMatrix::to_string() const {
  std::string out = "[";
  for (int i = 0; i < rows_; ++i) {
    out += i ? ",[" : "[";
    for (int j = 0; j < cols_; ++j) out += (j ? "," : "") + (*this)(i, j).str();
    out += "]";
  }
  return out + "]";
}

std::vector<std::vector<std::string>> IntMatrix::to_rows() const {
  std::vector<std::vector<std::string>> out(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i].push_back((*this)(i, j).str());
  return out;
}

IntMatrix integer_kernel(const IntMatrix& m) {
  // Column-style Hermite reduction: keep U unimodular with M*U = W and drive
  // W into echelon form; the columns of U under zero columns of W span the
  // integer kernel.
  const int rows = m.rows(), n = m.cols();
  IntMatrix w = m;
  IntMatrix u = IntMatrix::identity(n);
  auto col_combine = [&](int target, int src, const Integer& q) {
    // col target -= q * col src
    for (int r = 0; r < rows; ++r) w(r, target) -= q * w(r, src);
    for (int r = 0; r < n; ++r) u(r, target) -= q * u(r, src);
  };
  auto col_swap = [&](int a, int b) {
    for (int r = 0; r < rows; ++r) std::swap(w(r, a), w(r, b));
    for (int r = 0; r < n; ++r) std::swap(u(r, a), u(r, b));
  };
  int pivot_col = 0;
  for (int r = 0; r < rows && pivot_col < n; ++r) {
    // Euclid across columns pivot_col..n-1 on row r.
    while (true) {
      int best = -1;
      for (int c = pivot_col; c < n; ++c)
        if (w(r, c) != 0 && (best < 0 || abs(w(r, c)) < abs(w(r, best)))) best = c;
      if (best < 0) break;
      col_swap(pivot_col, best);
      bool done = true;
      for (int c = pivot_col + 1; c < n; ++c) {
        if (w(r, c) == 0) continue;
        Integer q = w(r, c) / w(r, pivot_col);
        col_combine(c, pivot_col, q);
        if (w(r, c) != 0) done = false;
      }
      if (done) {
        ++pivot_col;
        break;
      }
    }
  }
  IntMatrix kernel(n, n - pivot_col);
  for (int c = pivot_col; c < n; ++c)
    for (int r = 0; r < n; ++r) kernel(r, c - pivot_col) = u(r, c);
  return kernel;
}

std::vector<std::vector<Rational>> solve_exact(const IntMatrix& a, const IntMatrix& b) {
  const int n = a.rows(), k = a.cols(), m = b.cols();
  std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(k + m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) aug[i][j] = Rational(a(i, j));
    for (int j = 0; j < m; ++j) aug[i][k + j] = Rational(b(i, j));
  }
  int row = 0;
  std::vector<int> pivots;
  for (int c = 0; c < k; ++c) {
    int p = row;
    while (p < n && aug[p][c] == 0) ++p;
    if (p == n) throw InternalError("solve_exact: matrix lacks full column rank");
    std::swap(aug[p], aug[row]);
    Rational piv = aug[row][c];
    for (auto& e : aug[row]) e /= piv;
    for (int r = 0; r < n; ++r) {
      if (r == row || aug[r][c] == 0) continue;
      Rational f = aug[r][c];
      for (int j = 0; j < k + m; ++j) aug[r][j] -= f * aug[row][j];
    }
    ++row;
  }
  for (int r = row; r < n; ++r)
    for (int j = 0; j < m; ++j)
      if (aug[r][k + j] != 0) throw InternalError("solve_exact: inconsistent system");
  std::vector<std::vector<Rational>> x(k, std::vector<Rational>(m));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) x[i][j] = aug[i][k + j];
  return x;
}

}  // namespace iet
