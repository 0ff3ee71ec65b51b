#include <mpfr.h>

#include "meanflow/gamma.hpp"
#include "support.hpp"

using namespace meanflow;
using meanflow::testing::R;
using meanflow::testing::within_ulp;

namespace {

// Reference values straight from MPFR at the working precision.
ExtReal mpfr_gamma_of(const ExtReal& x) {
  ExtReal r;
  mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

ExtReal mpfr_lngamma_of(const ExtReal& x) {
  ExtReal r;
  mpfr_lngamma(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

}  // namespace

TEST(ExtReal, ParsesDecimalStringsLosslessly) {
  const ExtReal a = R("0.1");
  ExtReal ref;
  mpfr_set_str(ref.raw(), "0.1", 10, MPFR_RNDN);
  EXPECT_EQ(a, ref);
  EXPECT_NE(a, ExtReal(0.1));  // the double is a different number at 256 bits
  EXPECT_THROW(ExtReal(std::string_view("abc")), std::invalid_argument);
  EXPECT_THROW(ExtReal(std::string_view("")), std::invalid_argument);
  EXPECT_THROW(ExtReal(std::string_view("inf")), std::invalid_argument);
}

TEST(ExtReal, DefaultPrecisionIs256) {
  EXPECT_EQ(working_precision(), 256);
  EXPECT_EQ(ExtReal(1).precision(), 256);
  {
    PrecisionScope scope(512);
    EXPECT_EQ(ExtReal(1).precision(), 512);
  }
  EXPECT_EQ(working_precision(), 256);
  EXPECT_THROW(set_working_precision(0), std::invalid_argument);
}

TEST(ExtReal, NonFiniteResultsAreErrors) {
  EXPECT_THROW(ExtReal(1) / ExtReal(0), RangeError);
  EXPECT_THROW(sqrt(ExtReal(-1)), DomainError);
  EXPECT_THROW(log(ExtReal(0)), DomainError);
  // exponent range is wide but finite
  EXPECT_NO_THROW(exp(ExtReal(1e6)));
  EXPECT_THROW(exp(ExtReal(1e300)), RangeError);
}

TEST(ExtReal, WideExponentRange) {
  const ExtReal big = ldexp(ExtReal(1), 1L << 30);
  EXPECT_GT(big, ExtReal(1));
  const ExtReal tiny = ldexp(ExtReal(1), -(1L << 30));
  EXPECT_GT(tiny, ExtReal(0));
}

TEST(ExtReal, DeterministicText) {
  EXPECT_EQ(R("1.5").str(5), "1.5000e+00");
  EXPECT_EQ((R("1") / R("3")).str(), (R("1") / R("3")).str());
}

TEST(Gamma, FactorialMatchesIntegersExactlyToThirty) {
  for (unsigned long n = 0; n <= 30; ++n) EXPECT_EQ(factorial_real(ExtReal(n)), factorial_int(n)) << n;
}

TEST(Gamma, HalfIntegerValues) {
  const ExtReal sqrt_pi = sqrt(pi());
  EXPECT_TRUE(within_ulp(factorial_real(R("-0.5")), sqrt_pi, 2));
  EXPECT_TRUE(within_ulp(factorial_real(R("0.5")), sqrt_pi / ExtReal(2), 2));
}

TEST(Gamma, PolesAreDomainErrors) {
  EXPECT_THROW(factorial_real(ExtReal(-1)), DomainError);
  EXPECT_THROW(factorial_real(ExtReal(-7)), DomainError);
  EXPECT_THROW(lgamma_positive(ExtReal(0)), DomainError);
}

TEST(Gamma, FunctionalEquationOnQuarterGrid) {
  for (int q = 1; q <= 41; q += 1) {
    const ExtReal x = ExtReal::ratio(q, 4);
    // Gamma(x + 1) = x Gamma(x), with Gamma(x) = factorial_real(x - 1)
    EXPECT_TRUE(within_ulp(factorial_real(x), x * factorial_real(x - ExtReal(1)), 2)) << q << "/4";
  }
}

TEST(Gamma, AgreesWithMpfrOracle) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const ExtReal x = meanflow::testing::uniform(rng, 0.01, 80.0);
    EXPECT_TRUE(within_ulp(factorial_real(x - ExtReal(1)), mpfr_gamma_of(x), 8)) << x.str(20);
    const ExtReal lg = lgamma_positive(x);
    // log values near 0 lose relative meaning; compare absolutely there
    EXPECT_LE(abs(lg - mpfr_lngamma_of(x)), ldexp(max(ExtReal(1), abs(lg)), -240)) << x.str(20);
  }
}

TEST(Gamma, LargeArgumentsStayInLogDomain) {
  const ExtReal x = ExtReal(1e7);
  EXPECT_LE(abs(log_factorial(x) - mpfr_lngamma_of(x + ExtReal(1))), ldexp(log_factorial(x), -240));
}

TEST(Gamma, WorksAtHigherPrecision) {
  PrecisionScope scope(1024);
  const ExtReal x = R("0.25");
  EXPECT_TRUE(within_ulp(factorial_real(x), mpfr_gamma_of(x + ExtReal(1)), 8));
}
