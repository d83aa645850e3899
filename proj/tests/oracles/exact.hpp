#pragma once

// Exact and high-precision reference values for containment checks.

#include <gmpxx.h>
#include <mpfr.h>

#include <cctype>
#include <stdexcept>
#include <string>

#include "rigor/interval.hpp"

namespace oracle {

inline mpq_class exact(double x) {
  mpq_class q(x);
  return q;
}

inline bool contains(const rigor::Interval& iv, const mpq_class& v) {
  return exact(iv.lo()) <= v && v <= exact(iv.hi());
}

/// Exact rational value of a decimal numeral such as "-1.25e-3".
inline mpq_class decimal(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      dot = true;
    } else {
      digits += s[i];
      if (dot) --scale;
    }
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) scale += std::stol(s.substr(i + 1));
  mpz_class m(digits.empty() ? "0" : digits, 10);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  mpq_class q = scale < 0 ? mpq_class(m, p) : mpq_class(m * p);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

/// RAII wrapper around a 256-bit MPFR value.
class Big {
 public:
  Big() { mpfr_init2(v_, 256); }
  explicit Big(double x) : Big() { mpfr_set_d(v_, x, MPFR_RNDN); }
  Big(const Big& o) : Big() { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Big& operator=(const Big& o) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Big() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

inline Big big_atan(double x) {
  Big r(x);
  mpfr_atan(r.get(), r.get(), MPFR_RNDN);
  return r;
}

inline Big big_sqrt(double x) {
  Big r(x);
  mpfr_sqrt(r.get(), r.get(), MPFR_RNDN);
  return r;
}

inline Big big_pi() {
  Big r;
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

/// lo ≤ v ≤ hi, comparing the 256-bit value against the binary64 endpoints.
inline bool contains(const rigor::Interval& iv, const Big& v) {
  return mpfr_cmp_d(v.get(), iv.lo()) >= 0 && mpfr_cmp_d(v.get(), iv.hi()) <= 0;
}

}  // namespace oracle
