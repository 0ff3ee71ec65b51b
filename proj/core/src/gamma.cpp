#include "meanflow/gamma.hpp"

#include <gmpxx.h>

#include <cmath>
#include <mutex>
#include <vector>

namespace meanflow {
namespace {

// B_0, B_2, B_4, ... grown on demand from sum_{j<=m} C(m+1, j) B_j = 0.
class BernoulliCache {
 public:
  mpq_class even(std::size_t k) {
    std::lock_guard<std::mutex> lock(mu_);
    while (all_.size() <= 2 * k) extend();
    return all_[2 * k];
  }

 private:
  void extend() {
    std::size_t m = all_.size();
    if (m == 0) {
      all_.emplace_back(1);
      return;
    }
    mpq_class acc = 0;
    mpz_class binom = 1;  // C(m+1, j)
    for (std::size_t j = 0; j < m; ++j) {
      acc += mpq_class(binom) * all_[j];
      binom = binom * static_cast<unsigned long>(m + 1 - j) / static_cast<unsigned long>(j + 1);
    }
    // binom is now C(m+1, m) = m+1
    mpq_class b = -acc / mpq_class(binom);
    b.canonicalize();
    all_.push_back(b);
  }

  std::mutex mu_;
  std::vector<mpq_class> all_;
};

BernoulliCache& bernoulli() {
  static BernoulliCache cache;
  return cache;
}

ExtReal to_real(const mpq_class& q) {
  ExtReal r;
  mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

ExtReal round_to(const ExtReal& x, long bits) {
  PrecisionScope scope(bits);
  ExtReal r;
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

// Works at the caller's working precision; callers add guard bits.
ExtReal lgamma_stirling(const ExtReal& x) {
  const long p = working_precision();
  const double x0 = std::ceil(0.17 * static_cast<double>(p)) + 10.0;
  ExtReal y = x;
  ExtReal shift_product(1);
  while (y.to_double() < x0) {
    shift_product *= y;
    y += ExtReal(1);
  }
  const ExtReal half = ExtReal::ratio(1, 2);
  ExtReal sum = (y - half) * log(y) - y + half * log(ldexp(pi(), 1));
  const ExtReal y2 = y * y;
  ExtReal ypow = y;  // y^(2k-1)
  const ExtReal eps = ldexp(ExtReal(1), -p - 4);
  for (std::size_t k = 1;; ++k) {
    ExtReal term = to_real(bernoulli().even(k)) / (ExtReal(static_cast<long>(2 * k * (2 * k - 1))) * ypow);
    sum += term;
    if (abs(term) < eps) break;
    if (k > static_cast<std::size_t>(4 * p)) throw RangeError("Stirling series did not converge");
    ypow *= y2;
  }
  return sum - log(shift_product);
}

}  // namespace

ExtReal lgamma_positive(const ExtReal& x) {
  if (x.sign() <= 0) throw DomainError("lgamma_positive needs x > 0");
  const long p = working_precision();
  ExtReal r;
  {
    PrecisionScope guard(p + 64);
    r = lgamma_stirling(x);
  }
  return round_to(r, p);
}

ExtReal factorial_real(const ExtReal& x) {
  const long p = working_precision();
  if (x.is_integer()) {
    if (x.sign() < 0) throw DomainError("factorial pole at negative integer " + x.str(6));
    if (x > ExtReal(1L << 30)) throw RangeError("factorial argument too large");
    return factorial_int(static_cast<unsigned long>(x.to_long()));
  }
  ExtReal r;
  {
    PrecisionScope guard(p + 64);
    ExtReal z = x + ExtReal(1);
    if (z.sign() > 0) {
      r = exp(lgamma_stirling(z));
    } else {
      // Γ(z) Γ(1-z) = π / sin(πz)
      ExtReal w = ExtReal(1) - z;
      r = pi() / (sin(pi() * z) * exp(lgamma_stirling(w)));
    }
  }
  return round_to(r, p);
}

ExtReal log_factorial(const ExtReal& x) {
  ExtReal z = x + ExtReal(1);
  if (z.sign() <= 0) throw DomainError("log_factorial needs x > -1");
  return lgamma_positive(z);
}

}  // namespace meanflow
