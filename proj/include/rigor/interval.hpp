#pragma once

// Closed intervals of binary64 values with outward rounding.
//
// Results are computed in the default round-to-nearest mode and each endpoint
// is then moved at most one step outward. Error-free transforms (TwoSum, FMA
// residuals) decide whether the step is needed, so exactly representable
// results stay tight. No floating-point environment state is read or written.

#include <optional>
#include <string>
#include <string_view>

#include "rigor/error.hpp"

namespace rigor {

/// Directed-rounding scalar primitives. Each result is a rigorous bound of
/// the exact real operation on the (finite) arguments.
namespace round {
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);
double next_up(double x);
double next_down(double x);
}  // namespace round

class Interval {
 public:
  constexpr Interval() noexcept : lo_(0.0), hi_(0.0) {}
  /// Degenerate interval [x, x]. Throws IntervalError for NaN.
  explicit Interval(double x);
  /// Throws IntervalError if either endpoint is NaN or lo > hi.
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  bool is_finite() const noexcept;
  bool is_point() const noexcept { return lo_ == hi_; }
  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains_zero() const noexcept { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool subset_of(const Interval& other) const noexcept {
    return other.lo_ <= lo_ && hi_ <= other.hi_;
  }

  /// Upper bound of hi - lo.
  double width() const;
  /// A representable point inside the interval (nearest to the true midpoint).
  double mid() const;
  /// max(|lo|, |hi|).
  double mag() const noexcept;
  /// Smallest absolute value over the interval.
  double mig() const noexcept;

  Interval& operator+=(const Interval& b);
  Interval& operator-=(const Interval& b);
  Interval& operator*=(const Interval& b);
  Interval& operator/=(const Interval& b);

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// Throws DivisionByZeroInterval when 0 ∈ b.
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

/// Exact square: the result is nonnegative even when a straddles zero.
Interval sqr(const Interval& a);
/// Integer power; a negative exponent requires 0 ∉ a.
Interval pow_int(const Interval& a, int k);
Interval abs(const Interval& a);
Interval hull(const Interval& a, const Interval& b);
/// std::nullopt signals an empty intersection.
std::optional<Interval> intersect(const Interval& a, const Interval& b);

/// Result of a square root over an interval that may poke below zero.
struct ClampedInterval {
  Interval value;
  /// Set when the argument's lower end was negative and was raised to 0.
  bool clamped = false;
};

/// Enclosure of {√x : x ∈ a, x ≥ 0}. Throws DomainError when a.hi() < 0.
ClampedInterval sqrt_interval(const Interval& a);
/// Enclosure of {atan(x) : x ∈ a}; requires finite endpoints.
Interval atan_interval(const Interval& a);

/// Enclosure of a signed decimal numeral ("-12.5e-3"), never relying on the
/// platform's conversion rounding. Width is at most one ulp; integers below
/// 2^53 and other exactly representable values come back as points.
Interval from_decimal_string(std::string_view text);

/// Parses the interval literal grammar used by all toolkit files: either
/// "lo..hi" (each side a numeral, or "-inf"/"inf" for unbounded ends) or a
/// bare numeral standing for its tight enclosure.
Interval parse_interval_literal(std::string_view text);

/// Reads a literal written by format_interval/format_double back into the
/// identical binary64 endpoints (round-trip semantics, not decimal
/// enclosure). Used for toolkit-emitted reports.
Interval read_binary64_interval(std::string_view text);
double read_binary64(std::string_view text);

/// Shortest decimal text that reads back to exactly `x` ("inf"/"-inf" for
/// infinities).
std::string format_double(double x);

/// "lo..hi", or the bare numeral for degenerate intervals.
std::string format_interval(const Interval& a);

}  // namespace rigor
