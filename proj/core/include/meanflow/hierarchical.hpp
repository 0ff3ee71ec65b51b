#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "meanflow/ext_real.hpp"
#include "meanflow/jet.hpp"
#include "meanflow/report.hpp"

namespace meanflow {

// Local potential u(lambda, x) = sum_n a_n x^n over even n, a_n = 2^{n/2} f_n / n.
// For N > 1 the variable is |x|.
struct PotentialPoly {
  std::map<int, ExtReal> coeffs;  // n -> a_n
  ExtReal lambda = ExtReal(1);

  int degree() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }
  ExtReal operator()(const ExtReal& x) const;
};

enum class MomentDirection { ToF, FromF };

// Exact bijection between potential coefficients a_n and moments f_n (keys are n).
std::map<int, ExtReal> moments_map(MomentDirection direction, const std::map<int, ExtReal>& data);
PotentialPoly potential_from_moments(const std::map<int, ExtReal>& f, const ExtReal& lambda = ExtReal(1));

// -ln int dmu_L(y) exp(-L^4 u(L^{-1} x + y)) at every sample, i.e. u at scale lambda / L (N = 1).
// Gauss-Hermite order doubles from 8 until two successive results agree to 1e-15 relative.
std::vector<ExtReal> convolution_step(const PotentialPoly& u, const ExtReal& L, const std::vector<ExtReal>& x_samples);

// Coefficients of (1/2) Lap u - (1/2)|grad u|^2 + 4u - x.grad u, constant term included.
std::map<int, ExtReal> pde_rhs(const PotentialPoly& u, int N = 1);

// -lambda d/dlambda a_n from the moment system, with f_{n+2} = 0 beyond the stored degree.
std::map<int, ExtReal> moment_system_rate(const PotentialPoly& u, int N = 1);

// RHS - LHS at x, dropping the field-independent constant.
ExtReal pde_residual(const PotentialPoly& u, const ExtReal& x, int N = 1);

// (u(lambda/L, x) - u(lambda, x)) / ln L minus the exact PDE right-hand side at x.
ExtReal convolution_discrepancy(const PotentialPoly& u, const ExtReal& L, const ExtReal& x);

// u at scale mu from the massless flow with the given seeds: ansatz f_2, tower up to n_max.
PotentialPoly potential_from_flow(const ExtReal& f2_0, const ExtReal& f4_0, int N, const ExtReal& mu, int n_max);

// First-order convergence of the convolution step: the discrepancy at L - 1 = step and step/2 must
// shrink by 2 within 20%. One report per sample, lhs = |ratio - 2|.
std::vector<BoundReport> convolution_order_reports(const PotentialPoly& u, const std::vector<ExtReal>& x_samples,
                                                   const ExtReal& step = ExtReal("1e-3"));

// Random f_2 jet, tower from the flow equation, then every moment checked against the
// PDE coefficient identity with -lambda d/dlambda = 2 d/dmu. Passes at <= 1e-30 relative.
BoundReport equivalence_check(int n_max, int N = 1, std::uint64_t seed = 1);

}  // namespace meanflow
