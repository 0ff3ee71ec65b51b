#pragma once

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "meanflow/ext_real.hpp"

namespace meanflow::testing {

inline ExtReal R(const char* s) { return ExtReal(std::string_view(s)); }

// Uniform real in [lo, hi) built from 53 random bits, exact in binary.
inline ExtReal uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return ExtReal(d(rng));
}

inline ::testing::AssertionResult rel_close(const ExtReal& a, const ExtReal& b, const ExtReal& tol) {
  const ExtReal d = rel_diff(a, b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a.str(30) << " vs " << b.str(30) << " rel diff " << d.str(6);
}

inline ::testing::AssertionResult abs_close(const ExtReal& a, const ExtReal& b, const ExtReal& tol) {
  const ExtReal d = abs(a - b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a.str(30) << " vs " << b.str(30) << " abs diff " << d.str(6);
}

inline ::testing::AssertionResult within_ulp(const ExtReal& a, const ExtReal& b, long ulps) {
  const ExtReal d = ulp_distance(a, b);
  if (d <= ExtReal(ulps)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a.str(30) << " vs " << b.str(30) << " is " << d.str(6) << " ulp";
}

}  // namespace meanflow::testing
