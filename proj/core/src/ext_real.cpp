#include "meanflow/ext_real.hpp"

#include <gmp.h>

#include <string>
#include <utility>

namespace meanflow {
namespace {

constexpr long kDefaultPrecision = 256;

thread_local long tl_precision = kDefaultPrecision;
thread_local bool tl_range_ready = false;

// The exponent range is per thread in MPFR; widen it before first use.
void ensure_range() {
  if (tl_range_ready) return;
  mpfr_set_emin(mpfr_get_emin_min());
  mpfr_set_emax(mpfr_get_emax_max());
  tl_range_ready = true;
}

void init(mpfr_ptr v) {
  ensure_range();
  mpfr_init2(v, static_cast<mpfr_prec_t>(tl_precision));
}

}  // namespace

long working_precision() { return tl_precision; }

void set_working_precision(long bits) {
  if (bits < MPFR_PREC_MIN || bits > 1L << 24)
    throw std::invalid_argument("precision out of range: " + std::to_string(bits));
  tl_precision = bits;
}

PrecisionScope::PrecisionScope(long bits) : saved_(tl_precision) { set_working_precision(bits); }
PrecisionScope::~PrecisionScope() { tl_precision = saved_; }

ExtReal::ExtReal() {
  init(v_);
  mpfr_set_zero(v_, 1);
}
ExtReal::ExtReal(int v) : ExtReal(static_cast<long>(v)) {}
ExtReal::ExtReal(long v) {
  init(v_);
  mpfr_set_si(v_, v, MPFR_RNDN);
}
ExtReal::ExtReal(long long v) : ExtReal(static_cast<long>(v)) {}
ExtReal::ExtReal(unsigned long v) {
  init(v_);
  mpfr_set_ui(v_, v, MPFR_RNDN);
}
ExtReal::ExtReal(double v) {
  init(v_);
  mpfr_set_d(v_, v, MPFR_RNDN);
  checked("conversion from double");
}
ExtReal::ExtReal(std::string_view decimal) {
  init(v_);
  std::string s(decimal);
  if (s.empty() || mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  if (!mpfr_number_p(v_)) {
    mpfr_clear(v_);
    throw std::invalid_argument("not a finite number: '" + s + "'");
  }
}
ExtReal::ExtReal(const ExtReal& o) {
  ensure_range();
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}
ExtReal::ExtReal(ExtReal&& o) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}
ExtReal& ExtReal::operator=(const ExtReal& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}
ExtReal& ExtReal::operator=(ExtReal&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}
ExtReal::~ExtReal() { mpfr_clear(v_); }

ExtReal ExtReal::ratio(long num, long den) {
  ExtReal r(num);
  mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
  r.checked("ratio");
  return r;
}

const ExtReal& ExtReal::checked(const char* what) const {
  if (!mpfr_number_p(v_)) throw RangeError(std::string("non-finite result in ") + what);
  return *this;
}

ExtReal& ExtReal::operator+=(const ExtReal& o) {
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  checked("addition");
  return *this;
}
ExtReal& ExtReal::operator-=(const ExtReal& o) {
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  checked("subtraction");
  return *this;
}
ExtReal& ExtReal::operator*=(const ExtReal& o) {
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  checked("multiplication");
  return *this;
}
ExtReal& ExtReal::operator/=(const ExtReal& o) {
  if (o.is_zero()) throw RangeError("division by zero");
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  checked("division");
  return *this;
}
ExtReal ExtReal::operator-() const {
  ExtReal r;
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string ExtReal::str(int digits) const {
  if (digits <= 0) digits = static_cast<int>(mpfr_get_str_ndigits(10, mpfr_get_prec(v_)));
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

#define MEANFLOW_BINOP(OP, FN, WHAT)                          \
  ExtReal operator OP(const ExtReal& a, const ExtReal& b) {   \
    ExtReal r;                                                \
    FN(r.raw(), a.raw(), b.raw(), MPFR_RNDN);                 \
    r.checked(WHAT);                                          \
    return r;                                                 \
  }
MEANFLOW_BINOP(+, mpfr_add, "addition")
MEANFLOW_BINOP(-, mpfr_sub, "subtraction")
MEANFLOW_BINOP(*, mpfr_mul, "multiplication")
#undef MEANFLOW_BINOP

ExtReal operator/(const ExtReal& a, const ExtReal& b) {
  if (b.is_zero()) throw RangeError("division by zero");
  ExtReal r;
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  r.checked("division");
  return r;
}

std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
  if (mpfr_unordered_p(a.raw(), b.raw())) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.raw(), b.raw());
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}
bool operator==(const ExtReal& a, const ExtReal& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }

#define MEANFLOW_UNARY(NAME, FN)            \
  ExtReal NAME(const ExtReal& x) {          \
    ExtReal r;                              \
    FN(r.raw(), x.raw(), MPFR_RNDN);        \
    r.checked(#NAME);                       \
    return r;                               \
  }
MEANFLOW_UNARY(abs, mpfr_abs)
MEANFLOW_UNARY(exp, mpfr_exp)
MEANFLOW_UNARY(expm1, mpfr_expm1)
MEANFLOW_UNARY(sin, mpfr_sin)
MEANFLOW_UNARY(cos, mpfr_cos)
#undef MEANFLOW_UNARY

ExtReal sqrt(const ExtReal& x) {
  if (x.sign() < 0) throw DomainError("sqrt of negative value");
  ExtReal r;
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
ExtReal log(const ExtReal& x) {
  if (x.sign() <= 0) throw DomainError("log of non-positive value");
  ExtReal r;
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
ExtReal log1p(const ExtReal& x) {
  if (x <= ExtReal(-1)) throw DomainError("log1p argument <= -1");
  ExtReal r;
  mpfr_log1p(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
ExtReal pow(const ExtReal& x, const ExtReal& y) {
  ExtReal r;
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  r.checked("pow");
  return r;
}
ExtReal pow(const ExtReal& x, long n) {
  ExtReal r;
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  r.checked("pow");
  return r;
}
ExtReal ldexp(const ExtReal& x, long e) {
  ExtReal r;
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  r.checked("ldexp");
  return r;
}
ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }
ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
ExtReal floor(const ExtReal& x) {
  ExtReal r;
  mpfr_floor(r.raw(), x.raw());
  return r;
}
ExtReal pi() {
  ExtReal r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}
ExtReal euler_e() { return exp(ExtReal(1)); }

ExtReal factorial_int(unsigned long n) {
  mpz_t z;
  mpz_init(z);
  mpz_fac_ui(z, n);
  ExtReal r;
  mpfr_set_z(r.raw(), z, MPFR_RNDN);
  mpz_clear(z);
  return r;
}

ExtReal binomial_int(unsigned long n, unsigned long k) {
  mpz_t z;
  mpz_init(z);
  mpz_bin_uiui(z, n, k);
  ExtReal r;
  mpfr_set_z(r.raw(), z, MPFR_RNDN);
  mpz_clear(z);
  return r;
}

ExtReal ulp_distance(const ExtReal& a, const ExtReal& b) {
  ExtReal m = max(abs(a), abs(b));
  if (m.is_zero()) return ExtReal(0);
  // ulp of m at working precision: 2^(exp(m) - prec)
  long e = static_cast<long>(mpfr_get_exp(m.raw()));
  return ldexp(abs(a - b), working_precision() - e);
}

ExtReal rel_diff(const ExtReal& a, const ExtReal& b) {
  ExtReal m = max(abs(a), abs(b));
  if (m.is_zero()) return ExtReal(0);
  return abs(a - b) / m;
}

}  // namespace meanflow
