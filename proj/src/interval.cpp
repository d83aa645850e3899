#include "rigor/interval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

namespace rigor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMax = std::numeric_limits<double>::max();
// Below this magnitude FMA residuals may be inexact; fall back to a blind
// one-step nudge, which is always sound for a correctly rounded result.
constexpr double kTiny = 0x1p-900;

// Overflow of a finite operation: the exact value is finite but beyond
// DBL_MAX, so the nearest representable bounds are ±DBL_MAX / ±inf.
double clamp_down(double s) { return s == kInf ? kMax : s; }
double clamp_up(double s) { return s == -kInf ? -kMax : s; }

void require_finite(const Interval& a) {
  if (!a.is_finite()) {
    throw IntervalError("arithmetic on a semi-infinite interval");
  }
}

}  // namespace

namespace round {

double next_up(double x) { return std::nextafter(x, kInf); }
double next_down(double x) { return std::nextafter(x, -kInf); }

double add_down(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return clamp_down(s);
  const double bv = s - a;
  const double av = s - bv;
  const double err = (a - av) + (b - bv);
  return err < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return clamp_up(s);
  const double bv = s - a;
  const double av = s - bv;
  const double err = (a - av) + (b - bv);
  return err > 0.0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) return clamp_down(p);
  if (a == 0.0 || b == 0.0) return 0.0;
  if (std::fabs(p) < kTiny) return next_down(p);
  const double err = std::fma(a, b, -p);
  return err < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) return clamp_up(p);
  if (a == 0.0 || b == 0.0) return 0.0;
  if (std::fabs(p) < kTiny) return next_up(p);
  const double err = std::fma(a, b, -p);
  return err > 0.0 ? next_up(p) : p;
}

namespace {
// Sign of (a/b - q) where q = fl(a/b); 0 when exact.
int div_residual_sign(double a, double b, double q) {
  const double r = std::fma(-q, b, a);
  if (r == 0.0) return 0;
  return ((r > 0.0) == (b > 0.0)) ? 1 : -1;
}
}  // namespace

double div_down(double a, double b) {
  const double q = a / b;
  if (!std::isfinite(q)) return clamp_down(q);
  if (a == 0.0) return 0.0;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
  return div_residual_sign(a, b, q) < 0 ? next_down(q) : q;
}

double div_up(double a, double b) {
  const double q = a / b;
  if (!std::isfinite(q)) return clamp_up(q);
  if (a == 0.0) return 0.0;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
  return div_residual_sign(a, b, q) > 0 ? next_up(q) : q;
}

double sqrt_down(double a) {
  if (a <= 0.0) return 0.0;
  const double s = std::sqrt(a);
  if (a < kTiny) return next_down(s);
  const double r = std::fma(-s, s, a);
  return r < 0.0 ? next_down(s) : s;
}

double sqrt_up(double a) {
  if (a <= 0.0) return 0.0;
  const double s = std::sqrt(a);
  if (!std::isfinite(s)) return s;
  if (a < kTiny) return next_up(s);
  const double r = std::fma(-s, s, a);
  return r > 0.0 ? next_up(s) : s;
}

}  // namespace round

// ---------------------------------------------------------------------------

Interval::Interval(double x) : lo_(x), hi_(x) {
  if (std::isnan(x)) throw IntervalError("NaN interval endpoint");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw IntervalError("NaN interval endpoint");
  if (lo > hi) throw IntervalError("interval with lo > hi");
}

bool Interval::is_finite() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

double Interval::width() const { return round::sub_up(hi_, lo_); }

double Interval::mid() const {
  if (lo_ == hi_) return lo_;
  if (!is_finite()) {
    if (std::isfinite(lo_)) return lo_;
    if (std::isfinite(hi_)) return hi_;
    return 0.0;
  }
  const double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

double Interval::mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }

double Interval::mig() const noexcept {
  if (contains_zero()) return 0.0;
  return std::min(std::fabs(lo_), std::fabs(hi_));
}

Interval& Interval::operator+=(const Interval& b) { return *this = *this + b; }
Interval& Interval::operator-=(const Interval& b) { return *this = *this - b; }
Interval& Interval::operator*=(const Interval& b) { return *this = *this * b; }
Interval& Interval::operator/=(const Interval& b) { return *this = *this / b; }

Interval operator+(const Interval& a, const Interval& b) {
  require_finite(a);
  require_finite(b);
  return {round::add_down(a.lo(), b.lo()), round::add_up(a.hi(), b.hi())};
}

Interval operator-(const Interval& a, const Interval& b) {
  require_finite(a);
  require_finite(b);
  return {round::sub_down(a.lo(), b.hi()), round::sub_up(a.hi(), b.lo())};
}

Interval operator-(const Interval& a) { return {-a.hi(), -a.lo()}; }

Interval operator*(const Interval& a, const Interval& b) {
  require_finite(a);
  require_finite(b);
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = kInf;
  double hi = -kInf;
  for (double x : xs) {
    for (double y : ys) {
      lo = std::min(lo, round::mul_down(x, y));
      hi = std::max(hi, round::mul_up(x, y));
    }
  }
  return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b) {
  require_finite(a);
  require_finite(b);
  if (b.contains_zero()) throw DivisionByZeroInterval();
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = kInf;
  double hi = -kInf;
  for (double x : xs) {
    for (double y : ys) {
      lo = std::min(lo, round::div_down(x, y));
      hi = std::max(hi, round::div_up(x, y));
    }
  }
  return {lo, hi};
}

namespace {

// |x|^k bounds for x ≥ 0 by repeated directed multiplication.
double pow_mag_down(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = round::mul_down(r, x);
  return r;
}

double pow_mag_up(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = round::mul_up(r, x);
  return r;
}

}  // namespace

Interval pow_int(const Interval& a, int k) {
  require_finite(a);
  if (k == 0) return Interval(1.0);
  if (k < 0) {
    if (a.contains_zero()) throw DivisionByZeroInterval();
    return Interval(1.0) / pow_int(a, -k);
  }
  if (k == 1) return a;
  const double lo = a.lo();
  const double hi = a.hi();
  if (k % 2 == 1) {
    const double down = lo >= 0.0 ? pow_mag_down(lo, k) : -pow_mag_up(-lo, k);
    const double up = hi >= 0.0 ? pow_mag_up(hi, k) : -pow_mag_down(-hi, k);
    return {down, up};
  }
  if (lo >= 0.0) return {pow_mag_down(lo, k), pow_mag_up(hi, k)};
  if (hi <= 0.0) return {pow_mag_down(-hi, k), pow_mag_up(-lo, k)};
  return {0.0, pow_mag_up(a.mag(), k)};
}

Interval sqr(const Interval& a) { return pow_int(a, 2); }

Interval abs(const Interval& a) {
  if (a.lo() >= 0.0) return a;
  if (a.hi() <= 0.0) return -a;
  return {0.0, a.mag()};
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

ClampedInterval sqrt_interval(const Interval& a) {
  if (a.hi() < 0.0) throw DomainError("square root of a negative interval");
  if (std::isinf(a.hi())) throw IntervalError("square root of a semi-infinite interval");
  const bool clamped = a.lo() < 0.0;
  const double lo = clamped ? 0.0 : round::sqrt_down(a.lo());
  return {Interval(lo, round::sqrt_up(a.hi())), clamped};
}

Interval atan_interval(const Interval& a) {
  require_finite(a);
  // The library atan is within one ulp; two steps out cover it.
  constexpr double half_pi_up = std::numbers::pi / 2 + 0x1p-52;  // > π/2
  double lo = round::next_down(round::next_down(std::atan(a.lo())));
  double hi = round::next_up(round::next_up(std::atan(a.hi())));
  if (a.lo() == 0.0) lo = 0.0;
  if (a.hi() == 0.0) hi = 0.0;
  lo = std::max(lo, -half_pi_up);
  hi = std::min(hi, half_pi_up);
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Decimal input.

namespace {

using boost::multiprecision::cpp_int;

struct Numeral {
  bool negative = false;
  cpp_int digits;      // all significant digits as an integer
  long exponent = 0;   // value = digits * 10^exponent
  bool zero = true;
};

Numeral parse_numeral(std::string_view s) {
  Numeral n;
  std::size_t i = 0;
  if (s.empty()) throw ParseError("empty numeral", 0);
  if (s[i] == '+' || s[i] == '-') {
    n.negative = s[i] == '-';
    ++i;
  }
  bool any_digit = false;
  bool seen_point = false;
  long frac_digits = 0;
  std::string mantissa;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c >= '0' && c <= '9') {
      any_digit = true;
      mantissa.push_back(c);
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw ParseError("malformed numeral '" + std::string(s) + "'", i);
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits_start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == digits_start) throw ParseError("malformed exponent in '" + std::string(s) + "'", i);
    const auto* first = s.data() + start + (s[start] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(first, s.data() + i, exp10);
    if (ec != std::errc()) throw ParseError("exponent out of range in '" + std::string(s) + "'", start);
    (void)ptr;
  }
  if (i != s.size()) throw ParseError("malformed numeral '" + std::string(s) + "'", i);

  const auto nz = mantissa.find_first_not_of('0');
  if (nz == std::string::npos) return n;
  n.zero = false;
  n.digits = cpp_int(mantissa.substr(nz));
  n.exponent = exp10 - frac_digits;
  return n;
}

// Compares digits * 10^exponent with the finite positive double d: -1, 0, +1.
int compare_decimal(const Numeral& n, double d) {
  int q = 0;
  const double frac = std::frexp(d, &q);  // d = frac * 2^q, frac ∈ [0.5, 1)
  const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  q -= 53;  // d = mant * 2^q exactly
  cpp_int lhs = n.digits;
  cpp_int rhs = mant;
  if (n.exponent >= 0) {
    lhs *= boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(n.exponent));
  } else {
    rhs *= boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(-n.exponent));
  }
  if (q >= 0) {
    rhs <<= q;
  } else {
    lhs <<= -q;
  }
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

// Enclosure of a positive nonzero numeral.
Interval enclose_positive(const Numeral& n) {
  const long magnitude = static_cast<long>(n.digits.str().size()) + n.exponent;
  if (magnitude > 310) return {kMax, kInf};
  if (magnitude < -330) return {0.0, std::numeric_limits<double>::denorm_min()};
  // Any nearby candidate works: exactness is settled by the integer compare.
  const std::string text = n.digits.str() + "e" + std::to_string(n.exponent);
  double d = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), d);
  if (res.ec == std::errc::result_out_of_range) {
    return magnitude > 0 ? Interval(kMax, kInf)
                         : Interval(0.0, std::numeric_limits<double>::denorm_min());
  }
  if (d == 0.0) d = std::numeric_limits<double>::denorm_min();
  if (std::isinf(d)) return {kMax, kInf};
  // Walk until d brackets the value; one step suffices for a correctly
  // rounded candidate, the loop guards against a poor one.
  for (int guard = 0; guard < 64; ++guard) {
    const int c = compare_decimal(n, d);
    if (c == 0) return Interval(d);
    if (c > 0) {
      const double up = round::next_up(d);
      if (std::isinf(up)) return {d, kInf};
      if (compare_decimal(n, up) <= 0) {
        return compare_decimal(n, up) == 0 ? Interval(up) : Interval(d, up);
      }
      d = up;
    } else {
      const double down = round::next_down(d);
      if (down == 0.0) return {0.0, d};
      if (compare_decimal(n, down) >= 0) {
        return compare_decimal(n, down) == 0 ? Interval(down) : Interval(down, d);
      }
      d = down;
    }
  }
  throw Error("decimal conversion failed to converge");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Interval from_decimal_string(std::string_view text) {
  const Numeral n = parse_numeral(trim(text));
  if (n.zero) return Interval(0.0);
  const Interval mag = enclose_positive(n);
  return n.negative ? -mag : mag;
}

Interval parse_interval_literal(std::string_view text) {
  text = trim(text);
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    if (text == "inf" || text == "+inf" || text == "-inf") {
      throw ParseError("a bare infinity is not an interval", 0);
    }
    return from_decimal_string(text);
  }
  const auto lo_text = trim(text.substr(0, dots));
  const auto hi_text = trim(text.substr(dots + 2));
  const double lo = lo_text == "-inf" ? -kInf : from_decimal_string(lo_text).lo();
  const double hi = (hi_text == "inf" || hi_text == "+inf") ? kInf : from_decimal_string(hi_text).hi();
  if (lo > hi) throw ParseError("interval literal with lo > hi: '" + std::string(text) + "'", 0);
  return {lo, hi};
}

double read_binary64(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("malformed number '" + std::string(text) + "'", 0);
  }
  return d;
}

Interval read_binary64_interval(std::string_view text) {
  text = trim(text);
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) return Interval(read_binary64(text));
  return {read_binary64(text.substr(0, dots)), read_binary64(text.substr(dots + 2))};
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_interval(const Interval& a) {
  if (a.is_point()) return format_double(a.lo());
  return format_double(a.lo()) + ".." + format_double(a.hi());
}

}  // namespace rigor
