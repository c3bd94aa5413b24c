#include "iet/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <sstream>

namespace iet {

namespace {

unsigned digits10_for_bits(unsigned bits) {
  // ceil(bits * log10(2)); MPFR then rounds the mantissa up to >= bits.
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

std::string strip(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_perfect_square(const Integer& n) {
  if (n < 0) return false;
  Integer r = mp::sqrt(n);
  return r * r == n;
}

}  // namespace

std::string to_string(ArithmeticMode mode) {
  switch (mode) {
    case ArithmeticMode::rational: return "rational";
    case ArithmeticMode::quadratic: return "quadratic";
    case ArithmeticMode::real: return "float";
  }
  return "?";
}

ArithmeticMode parse_arithmetic_mode(std::string_view text) {
  if (text == "rational" || text == "exact") return ArithmeticMode::rational;
  if (text == "quadratic") return ArithmeticMode::quadratic;
  if (text == "float" || text == "real") return ArithmeticMode::real;
  throw InputError("unknown arithmetic mode '" + std::string(text) + "' (expected rational|quadratic|float)");
}

unsigned default_precision_bits() {
  if (const char* env = std::getenv("IET_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 16 && v <= (1 << 20)) return static_cast<unsigned>(v);
  }
  return kDefaultPrecisionBits;
}

namespace {
thread_local unsigned scoped_bits = 0;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision()), saved_bits_(scoped_bits) {
  if (bits < 16) throw InputError("precision must be at least 16 bits");
  Real::default_precision(digits10_for_bits(bits));
  scoped_bits = bits;
}

PrecisionScope::~PrecisionScope() {
  Real::default_precision(saved_digits10_);
  scoped_bits = saved_bits_;
}

unsigned working_precision_bits() { return scoped_bits ? scoped_bits : default_precision_bits(); }

unsigned current_precision_bits() {
  Real probe(0);
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

namespace {

// Decimal only: boost would read a leading 0 as octal and 0x as hex.
Integer parse_decimal_integer(std::string s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw InputError("malformed integer '" + s + "'");
  s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
  Integer n(s);
  return neg ? Integer(-n) : n;
}

}  // namespace

Rational parse_rational(std::string_view raw) {
  std::string text = strip(raw);
  if (text.empty()) throw InputError("empty number");
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      Integer num = parse_decimal_integer(strip(text.substr(0, slash)));
      Integer den = parse_decimal_integer(strip(text.substr(slash + 1)));
      if (den == 0) throw InputError("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    // Decimal with optional exponent, converted exactly.
    std::size_t epos = text.find_first_of("eE");
    std::string mant = text.substr(0, epos);
    long exponent = 0;
    if (epos != std::string::npos) exponent = std::stol(text.substr(epos + 1));
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant.erase(0, 1);
    }
    std::size_t dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
      digits = mant.substr(0, dot) + mant.substr(dot + 1);
      exponent -= static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits[0] == '-' || digits[0] == '+') throw InputError("malformed number '" + text + "'");
    Integer num = parse_decimal_integer(digits);
    if (neg) num = -num;
    Integer scale = mp::pow(Integer(10), static_cast<unsigned>(std::labs(exponent)));
    return exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("malformed number '" + text + "'");
  }
}

Integer floor_div(const Integer& num, const Integer& den) {
  Integer q = num / den;
  Integer r = num - q * den;
  if (r != 0 && ((r < 0) != (den < 0))) --q;
  return q;
}

double log_abs(const Integer& n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.backend().data());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

Integer floor_of(const Rational& q) { return floor_div(mp::numerator(q), mp::denominator(q)); }

template <>
Real parse_scalar<Real>(std::string_view text) {
  std::string t = strip(text);
  if (t == "phi") return (1 + mp::sqrt(Real(5))) / 2;
  if (t.find('/') != std::string::npos) return Real(parse_rational(t));
  try {
    return Real(t);
  } catch (const std::exception&) {
    throw InputError("malformed number '" + t + "'");
  }
}

template <>
double parse_scalar<double>(std::string_view text) {
  std::string t = strip(text);
  if (t == "phi") return (1 + std::sqrt(5.0)) / 2;
  return parse_rational(t).convert_to<double>();
}

std::string to_string(const Rational& x) {
  if (mp::denominator(x) == 1) return mp::numerator(x).str();
  return mp::numerator(x).str() + "/" + mp::denominator(x).str();
}

std::string to_string(const Real& x) {
  // Enough digits to round-trip the mantissa.
  std::ostringstream os;
  os << std::setprecision(static_cast<int>(x.precision()) + 2) << x;
  return os.str();
}

std::string to_string(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Quadratic

Quadratic::Quadratic(Rational a, Rational b, Integer radicand)
    : a_(std::move(a)), b_(std::move(b)), radicand_(std::move(radicand)) {
  if (b_ == 0) {
    radicand_ = 0;
    return;
  }
  if (radicand_ <= 1 || is_perfect_square(radicand_))
    throw InputError("radicand " + radicand_.str() + " must be a positive non-square integer");
}

Quadratic Quadratic::golden() { return Quadratic(Rational(1, 2), Rational(1, 2), Integer(5)); }

Quadratic Quadratic::parse(std::string_view raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw InputError("empty number");
  Quadratic total;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i + 1;
    while (j < text.size() && text[j] != '+' && !(text[j] == '-' && text[j - 1] != 'e' && text[j - 1] != 'E')) ++j;
    std::string term = text.substr(i, j - i);
    i = j;
    bool neg = false;
    if (term[0] == '+' || term[0] == '-') {
      neg = term[0] == '-';
      term.erase(0, 1);
    }
    Rational coeff(1);
    std::string symbol = term;
    if (auto star = term.find('*'); star != std::string::npos) {
      coeff = parse_rational(term.substr(0, star));
      symbol = term.substr(star + 1);
    }
    Quadratic value;
    if (symbol == "phi") {
      value = golden();
    } else if (symbol.rfind("sqrt", 0) == 0) {
      std::string arg = symbol.substr(4);
      if (!arg.empty() && arg.front() == '(' && arg.back() == ')') arg = arg.substr(1, arg.size() - 2);
      Integer d;
      try {
        d = parse_decimal_integer(arg);
      } catch (const InputError&) {
        throw InputError("malformed radicand in '" + std::string(raw) + "'");
      }
      value = Quadratic(Rational(0), Rational(1), d);
    } else {
      value = Quadratic(parse_rational(term));
      coeff = 1;
    }
    value *= Quadratic(coeff);
    if (neg) value = -value;
    total += value;
  }
  return total;
}

void Quadratic::unify(const Quadratic& o) {
  if (o.radicand_ == 0) return;
  if (radicand_ == 0) {
    radicand_ = o.radicand_;
    return;
  }
  if (radicand_ != o.radicand_)
    throw InputError("cannot mix sqrt(" + radicand_.str() + ") and sqrt(" + o.radicand_.str() + ")");
}

int Quadratic::sign() const {
  int sa = a_.sign();
  int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with b^2 D.
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * Rational(radicand_);
  return lhs > rhs ? sa : sb;
}

Quadratic Quadratic::conjugate() const {
  Quadratic r = *this;
  r.b_ = -r.b_;
  return r;
}

Quadratic Quadratic::operator-() const {
  Quadratic r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

Quadratic& Quadratic::operator+=(const Quadratic& o) {
  unify(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

Quadratic& Quadratic::operator-=(const Quadratic& o) {
  unify(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

Quadratic& Quadratic::operator*=(const Quadratic& o) {
  unify(o);
  Rational na = a_ * o.a_;
  if (b_ != 0 && o.b_ != 0) na += b_ * o.b_ * Rational(radicand_);
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

Quadratic& Quadratic::operator/=(const Quadratic& o) {
  unify(o);
  if (o.sign() == 0) throw InputError("division by zero");
  if (o.b_ == 0) {
    a_ /= o.a_;
    b_ /= o.a_;
    return *this;
  }
  Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * Rational(radicand_);
  *this *= o.conjugate();
  a_ /= norm;
  b_ /= norm;
  return *this;
}

std::string to_string(const Quadratic& x) {
  if (x.is_rational()) return to_string(x.rational_part());
  std::string out;
  if (x.rational_part() != 0) out = to_string(x.rational_part());
  Rational b = x.radical_part();
  if (b < 0) {
    out += "-";
    b = -b;
  } else if (!out.empty()) {
    out += "+";
  }
  if (b != 1) out += to_string(b) + "*";
  out += "sqrt" + x.radicand().str();
  return out;
}

Real to_real(const Quadratic& x) {
  Real r(x.rational_part());
  if (!x.is_rational()) r += Real(x.radical_part()) * mp::sqrt(Real(x.radicand()));
  return r;
}

namespace {

// Bits that bound a + b sqrt(D) away from zero relative to its terms.
unsigned quadratic_bits(const Quadratic& x) {
  auto size = [](const Rational& q) {
    unsigned num = mp::numerator(q) == 0 ? 0 : static_cast<unsigned>(mp::msb(mp::abs(mp::numerator(q)))) + 1;
    return num + 2 * (static_cast<unsigned>(mp::msb(mp::denominator(q))) + 1);
  };
  return 2 * std::max(size(x.rational_part()), size(x.radical_part())) + 64;
}

}  // namespace

double to_double(const Quadratic& x) {
  if (x.is_rational()) return x.rational_part().convert_to<double>();
  // a + b sqrt(D) cancels when x is small compared with a and b.
  PrecisionScope scope(std::max(quadratic_bits(x), 64u));
  return to_real(x).convert_to<double>();
}

Integer floor_of(const Quadratic& x) {
  if (x.is_rational()) return floor_of(x.rational_part());
  Integer guess = floor_of(to_real(x));
  // Correct for any rounding of the float estimate using exact comparisons.
  while (Quadratic(Rational(guess)) > x) --guess;
  while (Quadratic(Rational(guess + 1)) <= x) ++guess;
  return guess;
}

std::vector<Rational> rational_coefficients(const Rational& x) { return {x}; }

std::vector<Rational> rational_coefficients(const Quadratic& x) { return {x.rational_part(), x.radical_part()}; }

std::size_t rational_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace iet
