#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "meanflow/ansatz.hpp"
#include "meanflow/ext_real.hpp"
#include "meanflow/massive.hpp"
#include "meanflow/massless.hpp"
#include "meanflow/report.hpp"

namespace meanflow {

// ---- combinatorics ----

// Vandermonde-type sum of binomials, exact in integers.
BoundReport check_eq54(int a, int r, int m);
// Sum of g(n1,n2,k,nu) over nu in [a, k+2-b] against its closed upper bound.
BoundReport check_lemma33(int n1, int n2, int k, int a, int b);
// Weighted sum F(n1,n2,k,a,a,l), l in (0,1).
BoundReport check_lemma34(int n1, int n2, int k, int a, const ExtReal& l);
// n/(n-2) sum 1/(n1^2 n2^2) <= 1/n^2 over even n1, n2 >= 4, exact rationals. n >= 12, even.
BoundReport check_eq194(int n);
// Derivative formula for a quotient against jet division on random jets.
BoundReport check_eq195(int order, std::uint64_t seed);

// Named dispatch for the CLI; params hold decimal strings.
BoundReport check_combinatorics(const std::string& target, const std::map<std::string, std::string>& params);

std::vector<BoundReport> eq54_exhaustive(int limit);
std::vector<BoundReport> eq194_range(int n_lo, int n_hi);

// ---- coefficient growth ----

enum class GrowthRegime { Massless, LargeN, Massive };

// Per-cell bounds on g_{n,k} and f_{2,k}. The table of the LargeN regime is the one filled with the
// coupling divided by N; Massive tables are N = 1 tilded tables.
// Throws PreconditionError when the seed conditions fail for K.
std::vector<BoundReport> check_coefficient_growth(const TaylorTable& table, GrowthRegime regime, const ExtReal& K);

// Smallest K in the doubling sequence from the seed-condition floor for which every cell passes.
// Gives up past 2^64 and returns the last attempt.
struct KSelection {
  ExtReal K;
  int doublings = 0;
  std::vector<BoundReport> reports;
};
KSelection select_K(const TaylorTable& table, GrowthRegime regime);
ExtReal seed_floor_K(const TaylorTable& table, GrowthRegime regime);

// ---- ansatz coefficients ----

// c_{n,N} of the b_n recursion, in the log domain.
ExtReal log_c_nN(int n, int N, const ExtReal& K);
// max over 1 <= m <= m_max of c_{m,N} 2^{m+3} / (m+1)^2.
ExtReal c_tilde(int N, const ExtReal& K, int m_max = 1000);
// max(c_tilde, N sqrt(K)/2) * 1.05
ExtReal c_constant(int N, const ExtReal& K);

struct Summability {
  int n0 = -1;       // first n >= n_start whose tail bound is below tol, -1 if none up to n_cap
  ExtReal tail;      // tail bound at n0 (or at n_cap)
  int growth_end = 0;  // first n from which the terms decrease monotonically
};
Summability c_nN_summability(int N, const ExtReal& K, int n_start = 200, const ExtReal& tol = ExtReal("1e-30"),
                             int n_cap = 1000000);

// |b_n| against C n^2 / 2^n, the recursive chain bound, and summability of c_{n,N}.
std::vector<BoundReport> check_bn_decay(const AnsatzCoefficients& b, int N, const ExtReal& K);

// ---- derivative bounds ----

struct DerivativeConstants {
  ExtReal C1;  // C(1, K)
  ExtReal K1;
  ExtReal K2;
};
// K1 = 25 C(1,K), K2 = 2 K1.
DerivativeConstants derivative_constants(const ExtReal& K);

// Derivatives of the ansatz building block p_n(n mu): the mu-derivative bound and the two-branch
// X-derivative bound.
std::vector<BoundReport> check_pn_bounds(int n_max, int l_max, const std::vector<ExtReal>& mu_grid);
// Derivatives of the ansatz two-point function.
std::vector<BoundReport> check_f2_derivative_bounds(const AnsatzCoefficients& b, int l_max,
                                                    const std::vector<ExtReal>& mu_grid,
                                                    const DerivativeConstants& k);
// Derivatives of the moment tower built from the ansatz (N = 1), plus the radius floor of u.
std::vector<BoundReport> check_tower_derivative_bounds(const AnsatzCoefficients& b, int n_max, int l_max,
                                                       const std::vector<ExtReal>& mu_grid,
                                                       const DerivativeConstants& k);

// ---- massive kernel ----

std::vector<BoundReport> check_H_family(const HKernel& kernel, int l_max, const std::vector<ExtReal>& grid);

// ---- suites ----

struct BoundSuite {
  ExtReal K;
  DerivativeConstants constants;
  int ansatz_depth = 0;
  std::vector<BoundReport> reports;
};

struct BoundSuiteOptions {
  int N = 1;
  int n_max = 40;
  int k_max = 40;
  int l_max = 5;
  int n_tower = 12;
  std::vector<ExtReal> mu_grid = {ExtReal("0.1"), ExtReal("0.5"), ExtReal(1), ExtReal(5), ExtReal(20)};
};

// Growth, b_n decay and derivative bounds for the massless table with the given seeds.
BoundSuite massless_bound_suite(const ExtReal& f2_0, const ExtReal& g4_0, const BoundSuiteOptions& options = {});

// Recompute at twice the working precision; the worst relative change of any margin.
ExtReal margin_drift(const std::function<std::vector<BoundReport>()>& run);

}  // namespace meanflow
