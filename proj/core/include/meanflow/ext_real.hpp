#pragma once

#include <mpfr.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace meanflow {

// Thrown when a result leaves the finite range (overflow, NaN, division by zero).
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Precision (bits) used for every newly created value on this thread.
long working_precision();
void set_working_precision(long bits);

class PrecisionScope {
 public:
  explicit PrecisionScope(long bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

class ExtReal {
 public:
  ExtReal();
  ExtReal(int v);
  ExtReal(long v);
  ExtReal(long long v);
  ExtReal(unsigned long v);
  ExtReal(double v);
  explicit ExtReal(std::string_view decimal);
  ExtReal(const ExtReal& o);
  ExtReal(ExtReal&& o) noexcept;
  ExtReal& operator=(const ExtReal& o);
  ExtReal& operator=(ExtReal&& o) noexcept;
  ~ExtReal();

  static ExtReal ratio(long num, long den);

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }

  ExtReal& operator+=(const ExtReal& o);
  ExtReal& operator-=(const ExtReal& o);
  ExtReal& operator*=(const ExtReal& o);
  ExtReal& operator/=(const ExtReal& o);
  ExtReal operator-() const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  // Scientific notation; digits <= 0 picks enough digits to round-trip the precision.
  std::string str(int digits = 0) const;

  // Throws RangeError unless the value is a finite number.
  const ExtReal& checked(const char* what = "arithmetic") const;

 private:
  mpfr_t v_;
};

ExtReal operator+(const ExtReal& a, const ExtReal& b);
ExtReal operator-(const ExtReal& a, const ExtReal& b);
ExtReal operator*(const ExtReal& a, const ExtReal& b);
ExtReal operator/(const ExtReal& a, const ExtReal& b);

std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b);
bool operator==(const ExtReal& a, const ExtReal& b);

ExtReal abs(const ExtReal& x);
ExtReal sqrt(const ExtReal& x);
ExtReal exp(const ExtReal& x);
ExtReal log(const ExtReal& x);
ExtReal log1p(const ExtReal& x);
ExtReal expm1(const ExtReal& x);
ExtReal sin(const ExtReal& x);
ExtReal cos(const ExtReal& x);
ExtReal pow(const ExtReal& x, const ExtReal& y);
ExtReal pow(const ExtReal& x, long n);
ExtReal ldexp(const ExtReal& x, long e);
ExtReal min(const ExtReal& a, const ExtReal& b);
ExtReal max(const ExtReal& a, const ExtReal& b);
ExtReal floor(const ExtReal& x);
ExtReal pi();
ExtReal euler_e();
// Exact n! (rounded once to working precision).
ExtReal factorial_int(unsigned long n);
ExtReal binomial_int(unsigned long n, unsigned long k);

// Distance |a-b| measured in units in the last place of max(|a|,|b|) at working precision.
ExtReal ulp_distance(const ExtReal& a, const ExtReal& b);
// |a-b| / max(|a|,|b|), zero when both vanish.
ExtReal rel_diff(const ExtReal& a, const ExtReal& b);

}  // namespace meanflow
