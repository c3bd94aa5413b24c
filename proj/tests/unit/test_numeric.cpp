#include "doctest.h"

#include <random>

#include "iet/numeric.hpp"
#include "oracles.hpp"

using namespace iet;

TEST_CASE("parse_rational accepts fractions, decimals and exponents") {
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("-3/10") == Rational(-3, 10));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("2.5e-3") == Rational(1, 400));
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
}

TEST_CASE("floor_div rounds toward minus infinity") {
  CHECK(floor_div(7, 2) == 3);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(floor_div(-8, 2) == -4);
  CHECK(floor_of(Rational(-1, 3)) == -1);
}

TEST_CASE("Quadratic arithmetic agrees with 512-bit MPFR") {
  PrecisionScope scope(512);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 97);
  for (int trial = 0; trial < 200; ++trial) {
    Quadratic x(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), 5);
    Quadratic y(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), 5);
    Real rx = to_real(x), ry = to_real(y);
    CHECK(abs(to_real(x + y) - (rx + ry)) < Real("1e-140"));
    CHECK(abs(to_real(x * y) - (rx * ry)) < Real("1e-140"));
    if (y.sign() != 0) {
      Real q = rx / ry;
      CHECK(abs(to_real(x / y) - q) < Real("1e-140") * (1 + abs(q)));
    }
    CHECK((x < y) == (rx < ry));
  }
}

TEST_CASE("sign and to_double survive cancellation in F_{n+1} - F_n phi") {
  // F_{n+1} - F_n phi = psi^n with psi = (1 - sqrt 5) / 2.
  Integer f0 = 0, f1 = 1;
  const Quadratic phi = Quadratic::golden();
  for (int n = 1; n <= 150; ++n) {
    Integer f2 = f0 + f1;  // F_{n+1}
    Quadratic e = Quadratic(Rational(f2)) - Quadratic(Rational(f1)) * phi;
    CHECK(e.sign() == (n % 2 == 0 ? 1 : -1));
    const double psi = (1.0 - std::sqrt(5.0)) / 2.0;
    CHECK(to_double(e) == doctest::Approx(std::pow(psi, n)).epsilon(1e-12));
    f0 = f1;
    f1 = f2;
  }
}

TEST_CASE("Quadratic::parse forms") {
  CHECK(Quadratic::parse("phi") == Quadratic::golden());
  CHECK(Quadratic::parse("1+phi") == Quadratic(1) + Quadratic::golden());
  CHECK(Quadratic::parse("sqrt5") * Quadratic::parse("sqrt5") == Quadratic(5));
  CHECK(Quadratic::parse("3/2") == Quadratic(Rational(3, 2)));
  CHECK(Quadratic::parse("2+3*sqrt7").radicand() == 7);
  CHECK_THROWS_AS(Quadratic::parse("sqrt4"), InputError);
}

TEST_CASE("floor_of a quadratic irrational") {
  CHECK(floor_of(Quadratic::golden()) == 1);
  CHECK(floor_of(-Quadratic::golden()) == -2);
  CHECK(floor_of(Quadratic::parse("100*sqrt2")) == 141);
}

TEST_CASE("rational independence via coefficient vectors") {
  std::vector<Rational> rows_q{Rational(1, 2), Rational(1, 3)};
  CHECK(rational_rank({rational_coefficients(rows_q[0]), rational_coefficients(rows_q[1])}) == 1);
  auto phi = Quadratic::golden();
  CHECK(rational_rank({rational_coefficients(Quadratic(1)), rational_coefficients(phi)}) == 2);
}

TEST_CASE("precision scope restores the previous default") {
  unsigned before = current_precision_bits();
  {
    PrecisionScope s(1024);
    CHECK(current_precision_bits() >= 1024);
  }
  CHECK(current_precision_bits() == before);
}

TEST_CASE("arithmetic mode names") {
  CHECK(to_string(ArithmeticMode::real) == "float");
  CHECK(parse_arithmetic_mode("float") == ArithmeticMode::real);
  CHECK(parse_arithmetic_mode("quadratic") == ArithmeticMode::quadratic);
  CHECK_THROWS_AS(parse_arithmetic_mode("decimal"), InputError);
}

TEST_CASE("sub_multiple_assign matches the plain expression") {
  PrecisionScope scope(256);
  Real a("0.75"), t("0.001"), scratch(0);
  sub_multiple_assign(a, t, 123, scratch);
  CHECK(abs(a - Real("0.627")) < Real("1e-70"));
  Rational q(3, 4), scratch_q;
  sub_multiple_assign(q, Rational(1, 1000), 123, scratch_q);
  CHECK(q == Rational(627, 1000));
}

TEST_CASE("leading zeros are decimal, not octal") {
  CHECK(parse_rational("010/3") == Rational(10, 3));
  CHECK(parse_rational("0.010") == Rational(1, 100));
  CHECK(parse_rational("-00.5") == Rational(-1, 2));
  CHECK_THROWS_AS(parse_rational("0x10"), InputError);
  CHECK(Quadratic::parse("sqrt07") == Quadratic::parse("sqrt7"));
}
