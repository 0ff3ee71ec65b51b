#pragma once

#include "meanflow/ext_real.hpp"

namespace meanflow {

// log Γ(x) for x > 0. Stirling series after shifting the argument upward.
ExtReal lgamma_positive(const ExtReal& x);

// Γ(x + 1), the real-argument factorial. Exact for non-negative integers.
// Throws DomainError at the poles (x a negative integer).
ExtReal factorial_real(const ExtReal& x);

// log Γ(x + 1) for x > -1.
ExtReal log_factorial(const ExtReal& x);

}  // namespace meanflow
