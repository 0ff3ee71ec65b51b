#pragma once

#include <functional>
#include <vector>

#include "meanflow/ext_real.hpp"

namespace meanflow {

struct GaussRule {
  std::vector<ExtReal> nodes;    // on [-1, 1]
  std::vector<ExtReal> weights;
};

// Gauss-Legendre rule with m points at the working precision (cached).
const GaussRule& gauss_legendre(int m);

// Gauss-Hermite rule for weight e^{-x^2} with m points at the working precision (cached).
const GaussRule& gauss_hermite(int m);

class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive composite Gauss-Legendre over the given breakpoints. Each panel is bisected until
// the one-panel and two-half-panel estimates agree to within its share of abs_tol.
ExtReal integrate_adaptive(const std::function<ExtReal(const ExtReal&)>& f, const std::vector<ExtReal>& breaks,
                           const ExtReal& abs_tol, int max_depth = 48);

}  // namespace meanflow
