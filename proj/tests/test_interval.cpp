#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles/exact.hpp"
#include "rigor/interval.hpp"

using rigor::Interval;

namespace {

double ulp(double x) { return std::nextafter(std::fabs(x), INFINITY) - std::fabs(x); }

Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::uniform_int_distribution<int> scale(-8, 8);
  double a = std::ldexp(u(rng), scale(rng));
  double b = std::ldexp(u(rng), scale(rng));
  if (a > b) std::swap(a, b);
  return Interval(a, b);
}

double sample(std::mt19937_64& rng, const Interval& a) {
  std::uniform_real_distribution<double> t(0.0, 1.0);
  const double x = a.lo() + t(rng) * (a.hi() - a.lo());
  return std::clamp(x, a.lo(), a.hi());
}

}  // namespace

TEST_CASE("addition examples") {
  CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
  const Interval a(-3.5, 7.25);
  CHECK(Interval(0.0) + a == a);
  const Interval s = rigor::from_decimal_string("0.1") + rigor::from_decimal_string("0.2");
  CHECK(oracle::contains(s, oracle::decimal("0.3")));
  CHECK(s.hi() - s.lo() <= 4 * ulp(0.3));
}

TEST_CASE("multiplication and division examples") {
  CHECK(Interval(-1, 2) * Interval(3.0) == Interval(-3, 6));
  const Interval q = Interval(1.0) / Interval(2.0);
  CHECK(q == Interval(0.5));
  CHECK_THROWS_AS(Interval(1, 2) / Interval(-1, 1), rigor::DivisionByZeroInterval);
}

TEST_CASE("semi-infinite arithmetic is rejected") {
  const double inf = std::numeric_limits<double>::infinity();
  const Interval unbounded(1.0, inf);
  CHECK_FALSE(unbounded.is_finite());
  CHECK(unbounded.contains(1e300));
  CHECK_THROWS_AS(unbounded + Interval(1.0), rigor::IntervalError);
  CHECK_THROWS_AS(Interval(2.0) * unbounded, rigor::IntervalError);
  CHECK(rigor::intersect(unbounded, Interval(0, 3)) == Interval(1, 3));
  CHECK_FALSE(rigor::intersect(Interval(0, 1), Interval(2, 3)).has_value());
  CHECK_THROWS_AS(Interval(2.0, 1.0), rigor::IntervalError);
  CHECK_THROWS_AS(Interval(std::nan("")), rigor::IntervalError);
}

TEST_CASE("atan examples") {
  const Interval a = rigor::atan_interval(Interval(1.0));
  oracle::Big quarter_pi = oracle::big_pi();
  mpfr_div_ui(quarter_pi.get(), quarter_pi.get(), 4, MPFR_RNDN);
  CHECK(oracle::contains(a, quarter_pi));
  CHECK(a.hi() - a.lo() <= 4 * ulp(0.785));
  const Interval z = rigor::atan_interval(Interval(0.0));
  CHECK(z.contains(0.0));
  CHECK(z.hi() - z.lo() <= 2 * std::numeric_limits<double>::denorm_min());
  const Interval s = rigor::atan_interval(Interval(-5, 5));
  CHECK(s.lo() == -s.hi());
  CHECK_THROWS(rigor::atan_interval(Interval(0.0, std::numeric_limits<double>::infinity())));
}

TEST_CASE("sqrt examples") {
  const auto four = rigor::sqrt_interval(Interval(4.0));
  CHECK(four.value.contains(2.0));
  CHECK(four.value.hi() - four.value.lo() <= 2 * ulp(2.0));
  CHECK_FALSE(four.clamped);
  CHECK(oracle::contains(rigor::sqrt_interval(Interval(8.0)).value, oracle::big_sqrt(8.0)));
  CHECK_THROWS_AS(rigor::sqrt_interval(Interval(-1, -0.5)), rigor::DomainError);
  const auto c = rigor::sqrt_interval(Interval(-0.25, 4));
  CHECK(c.clamped);
  CHECK(c.value.lo() == 0.0);
  CHECK(c.value.contains(2.0));
}

TEST_CASE("decimal conversion") {
  CHECK(rigor::from_decimal_string("1") == Interval(1.0));
  const Interval tenth = rigor::from_decimal_string("0.1");
  CHECK(oracle::contains(tenth, oracle::decimal("0.1")));
  CHECK(tenth.hi() - tenth.lo() <= 2 * ulp(0.1));
  CHECK_FALSE(tenth.is_point());
  const Interval above = rigor::from_decimal_string("1.000000000000000000001");
  CHECK(oracle::contains(above, oracle::decimal("1.000000000000000000001")));
  CHECK(above.hi() > 1.0);
  CHECK(rigor::from_decimal_string("-12.5e-1") == Interval(-1.25));
  CHECK(oracle::contains(rigor::from_decimal_string("1e-400"), oracle::decimal("1e-400")));
  for (const char* bad : {"", "-", "1.2.3", "e5", "1e", "abc", "1 2", "0x10"}) {
    CHECK_THROWS_AS(rigor::from_decimal_string(bad), rigor::ParseError);
  }
}

TEST_CASE("integers below 2^53 convert exactly") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> d(-(std::int64_t{1} << 53) + 1, (std::int64_t{1} << 53) - 1);
  for (int k = 0; k < 2000; ++k) {
    const std::int64_t v = d(rng);
    const Interval iv = rigor::from_decimal_string(std::to_string(v));
    REQUIRE(iv.is_point());
    REQUIRE(iv.lo() == static_cast<double>(v));
  }
}

TEST_CASE("random decimals are enclosed within one ulp") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> digit(0, 9);
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_int_distribution<int> ex(-320, 300);
  for (int k = 0; k < 2000; ++k) {
    std::string s = (k % 2 ? "-" : "");
    s += std::to_string(digit(rng)) + ".";
    for (int i = len(rng); i > 0; --i) s += std::to_string(digit(rng));
    s += "e" + std::to_string(ex(rng));
    const Interval iv = rigor::from_decimal_string(s);
    REQUIRE(oracle::contains(iv, oracle::decimal(s)));
    REQUIRE((iv.is_point() || std::nextafter(iv.lo(), INFINITY) == iv.hi()));
  }
}

TEST_CASE("literals and round trip") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(rigor::parse_interval_literal("1..2") == Interval(1, 2));
  CHECK(rigor::parse_interval_literal("-inf..3") == Interval(-inf, 3));
  CHECK(rigor::parse_interval_literal("2.5") == Interval(2.5));
  CHECK(oracle::contains(rigor::parse_interval_literal("0.1..0.3"), oracle::decimal("0.3")));
  CHECK_THROWS_AS(rigor::parse_interval_literal("3..1"), rigor::Error);
  CHECK_THROWS_AS(rigor::parse_interval_literal("1..x"), rigor::ParseError);
  std::mt19937_64 rng(13);
  for (int k = 0; k < 1000; ++k) {
    const Interval a = random_interval(rng);
    REQUIRE(rigor::read_binary64_interval(rigor::format_interval(a)) == a);
    REQUIRE(rigor::read_binary64(rigor::format_double(a.lo())) == a.lo());
  }
  CHECK(rigor::format_double(0.1) == "0.1");
  CHECK(rigor::format_double(-inf) == "-inf");
}

TEST_CASE("containment of binary operations") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100000; ++k) {
    const Interval a = random_interval(rng);
    const Interval b = random_interval(rng);
    const double x = sample(rng, a);
    const double y = sample(rng, b);
    const mpq_class ex = oracle::exact(x);
    const mpq_class ey = oracle::exact(y);
    REQUIRE(oracle::contains(a + b, ex + ey));
    REQUIRE(oracle::contains(a - b, ex - ey));
    REQUIRE(oracle::contains(a * b, ex * ey));
    if (!b.contains_zero()) REQUIRE(oracle::contains(a / b, ex / ey));
  }
}

TEST_CASE("containment of unary operations") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20000; ++k) {
    const Interval a = random_interval(rng);
    const double x = sample(rng, a);
    const mpq_class ex = oracle::exact(x);
    REQUIRE(oracle::contains(rigor::sqr(a), ex * ex));
    REQUIRE(oracle::contains(rigor::pow_int(a, 3), ex * ex * ex));
    REQUIRE(oracle::contains(-a, mpq_class(-ex)));
    if (!a.contains_zero()) REQUIRE(oracle::contains(rigor::pow_int(a, -2), 1 / (ex * ex)));
    REQUIRE(oracle::contains(rigor::atan_interval(a), oracle::big_atan(x)));
    if (x >= 0) REQUIRE(oracle::contains(rigor::sqrt_interval(a).value, oracle::big_sqrt(x)));
  }
}

TEST_CASE("inclusion monotonicity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  auto shrink = [&](const Interval& a) {
    double p = a.lo() + t(rng) * (a.hi() - a.lo());
    double q = a.lo() + t(rng) * (a.hi() - a.lo());
    if (p > q) std::swap(p, q);
    return Interval(std::clamp(p, a.lo(), a.hi()), std::clamp(q, a.lo(), a.hi()));
  };
  for (int k = 0; k < 20000; ++k) {
    const Interval a = random_interval(rng);
    const Interval b = random_interval(rng);
    const Interval a2 = shrink(a);
    const Interval b2 = shrink(b);
    REQUIRE((a2 + b2).subset_of(a + b));
    REQUIRE((a2 - b2).subset_of(a - b));
    REQUIRE((a2 * b2).subset_of(a * b));
    if (!b.contains_zero()) REQUIRE((a2 / b2).subset_of(a / b));
    REQUIRE(rigor::atan_interval(a2).subset_of(rigor::atan_interval(a)));
  }
}

TEST_CASE("atan brackets the midpoint value") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10000; ++k) {
    const Interval a = random_interval(rng);
    const Interval r = rigor::atan_interval(a);
    REQUIRE(oracle::contains(r, oracle::big_atan(a.mid())));
  }
}
