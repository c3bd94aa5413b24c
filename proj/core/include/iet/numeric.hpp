#pragma once

// Scalar backends for length data.
//
// Three arithmetic families share one set of free functions so that the
// dynamics can be written once as templates:
//   Rational  - exact rationals (GMP)
//   Quadratic - exact elements a + b*sqrt(D) of a real quadratic field
//   Real      - MPFR floats with a runtime mantissa size
// `double` is accepted too, for quick experiments and benchmarks.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "iet/errors.hpp"

namespace iet {

namespace mp = boost::multiprecision;

using Integer = mp::mpz_int;
using Rational = mp::mpq_rational;
using Real = mp::mpfr_float;

enum class ArithmeticMode { rational, quadratic, real };

std::string to_string(ArithmeticMode mode);
ArithmeticMode parse_arithmetic_mode(std::string_view text);

inline constexpr unsigned kDefaultPrecisionBits = 256;

/// Reads IET_PRECISION_BITS from the environment, falling back to 256.
unsigned default_precision_bits();

/// Sets the MPFR default precision for the lifetime of the object.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
  unsigned saved_bits_;
};

/// Mantissa size of a freshly constructed Real, in bits.
unsigned current_precision_bits();

/// Precision of the innermost PrecisionScope on this thread, or
/// default_precision_bits() outside any scope (Boost's own default is far
/// too small for renormalization orbits).
unsigned working_precision_bits();

/// Accepts "7", "-3/10", "0.125", "2.5e-3".
Rational parse_rational(std::string_view text);

Integer floor_div(const Integer& num, const Integer& den);
Integer floor_of(const Rational& q);

/// log |n| as a double without overflow (-inf for 0).
double log_abs(const Integer& n);
inline double log_of_integer_ratio(const Integer& num, const Integer& den) { return log_abs(num) - log_abs(den); }

/// a + b*sqrt(D) with D a positive non-square integer. D == 0 marks a value
/// that is known to be rational; it adopts the radicand of whatever it is
/// combined with.
class Quadratic {
 public:
  Quadratic() = default;
  Quadratic(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  Quadratic(Rational a) : a_(std::move(a)) {}  // NOLINT
  Quadratic(Rational a, Rational b, Integer radicand);

  /// The golden ratio (1 + sqrt 5) / 2.
  static Quadratic golden();
  /// "phi", "1+phi", "3/2-2*phi", "sqrt5", "2+3*sqrt7", plain rationals.
  static Quadratic parse(std::string_view text);

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  const Integer& radicand() const { return radicand_; }
  bool is_rational() const { return b_ == 0; }

  int sign() const;
  Quadratic conjugate() const;

  Quadratic operator-() const;
  Quadratic& operator+=(const Quadratic& o);
  Quadratic& operator-=(const Quadratic& o);
  Quadratic& operator*=(const Quadratic& o);
  Quadratic& operator/=(const Quadratic& o);

  friend Quadratic operator+(Quadratic l, const Quadratic& r) { return l += r; }
  friend Quadratic operator-(Quadratic l, const Quadratic& r) { return l -= r; }
  friend Quadratic operator*(Quadratic l, const Quadratic& r) { return l *= r; }
  friend Quadratic operator/(Quadratic l, const Quadratic& r) { return l /= r; }

  friend bool operator==(const Quadratic& l, const Quadratic& r) { return (l - r).sign() == 0; }
  friend bool operator!=(const Quadratic& l, const Quadratic& r) { return !(l == r); }
  friend bool operator<(const Quadratic& l, const Quadratic& r) { return (l - r).sign() < 0; }
  friend bool operator>(const Quadratic& l, const Quadratic& r) { return r < l; }
  friend bool operator<=(const Quadratic& l, const Quadratic& r) { return !(r < l); }
  friend bool operator>=(const Quadratic& l, const Quadratic& r) { return !(l < r); }

 private:
  void unify(const Quadratic& o);

  Rational a_{0};
  Rational b_{0};
  Integer radicand_{0};
};

std::string to_string(const Quadratic& x);
double to_double(const Quadratic& x);
Real to_real(const Quadratic& x);
Integer floor_of(const Quadratic& x);

// ---------------------------------------------------------------------------
// Uniform scalar interface.

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr ArithmeticMode mode = ArithmeticMode::rational;
};
template <>
struct ScalarTraits<Quadratic> {
  static constexpr bool exact = true;
  static constexpr ArithmeticMode mode = ArithmeticMode::quadratic;
};
template <>
struct ScalarTraits<Real> {
  static constexpr bool exact = false;
  static constexpr ArithmeticMode mode = ArithmeticMode::real;
};
template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr ArithmeticMode mode = ArithmeticMode::real;
};

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const Real& x) { return mpfr_get_d(x.backend().data(), MPFR_RNDN); }
inline double to_double(double x) { return x; }
inline double to_double(const Integer& x) { return x.convert_to<double>(); }

/// a -= b in place; a -= k t in place using `scratch`. Plain MPFR calls for
/// Real, which keep the precision of a.
template <class S>
inline void sub_assign(S& a, const S& b) {
  a -= b;
}
inline void sub_assign(Real& a, const Real& b) {
  mpfr_sub(a.backend().data(), a.backend().data(), b.backend().data(), MPFR_RNDN);
}
inline void sub_multiple_assign(Real& a, const Real& t, long k, Real& scratch) {
  mpfr_mul_si(scratch.backend().data(), t.backend().data(), k, MPFR_RNDN);
  mpfr_sub(a.backend().data(), a.backend().data(), scratch.backend().data(), MPFR_RNDN);
}
inline void sub_multiple_assign(double& a, double t, long k, double&) { a -= t * static_cast<double>(k); }
inline void sub_multiple_assign(Rational& a, const Rational& t, long k, Rational&) { a -= t * k; }
inline void sub_multiple_assign(Quadratic& a, const Quadratic& t, long k, Quadratic&) {
  a -= Quadratic(Rational(k)) * t;
}

inline Real to_real(const Rational& x) { return Real(x); }
inline Real to_real(const Real& x) { return x; }
inline Real to_real(double x) { return Real(x); }
inline Real to_real(const Integer& x) { return Real(x); }

inline int sign(const Rational& x) { return x.sign(); }
inline int sign(const Quadratic& x) { return x.sign(); }
inline int sign(const Real& x) { return x.sign(); }
inline int sign(double x) { return (x > 0) - (x < 0); }

inline Integer floor_of(const Real& x) { return Integer(mp::floor(x)); }
inline Integer floor_of(double x) { return Integer(std::floor(x)); }

template <class S>
S scalar_from(const Integer& v);
template <>
inline Rational scalar_from<Rational>(const Integer& v) { return Rational(v); }
template <>
inline Quadratic scalar_from<Quadratic>(const Integer& v) { return Quadratic(Rational(v)); }
template <>
inline Real scalar_from<Real>(const Integer& v) { return Real(v); }
template <>
inline double scalar_from<double>(const Integer& v) { return v.convert_to<double>(); }

template <class S>
S scalar_from(const Rational& v);
template <>
inline Rational scalar_from<Rational>(const Rational& v) { return v; }
template <>
inline Quadratic scalar_from<Quadratic>(const Rational& v) { return Quadratic(v); }
template <>
inline Real scalar_from<Real>(const Rational& v) { return Real(v); }
template <>
inline double scalar_from<double>(const Rational& v) { return v.convert_to<double>(); }

/// Nearest integer, ties broken downward (distance is what matters).
template <class S>
Integer nearest_integer(const S& x) {
  Integer f = floor_of(x);
  S frac = x - scalar_from<S>(f);
  if (frac * S(2) > S(1)) ++f;
  return f;
}

/// Parses one length entry in the arithmetic family of S.
template <class S>
S parse_scalar(std::string_view text);
template <>
inline Rational parse_scalar<Rational>(std::string_view text) { return parse_rational(text); }
template <>
inline Quadratic parse_scalar<Quadratic>(std::string_view text) { return Quadratic::parse(text); }
template <>
Real parse_scalar<Real>(std::string_view text);
template <>
double parse_scalar<double>(std::string_view text);

std::string to_string(const Rational& x);
std::string to_string(const Real& x);
std::string to_string(double x);

/// Coefficient vector of x over the basis {1} (rationals) or {1, sqrt D}.
std::vector<Rational> rational_coefficients(const Rational& x);
std::vector<Rational> rational_coefficients(const Quadratic& x);

/// Exact rank of a matrix over Q (fraction-free elimination on a copy).
std::size_t rational_rank(std::vector<std::vector<Rational>> rows);

}  // namespace iet
