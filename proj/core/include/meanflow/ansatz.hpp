#pragma once

#include <stdexcept>
#include <vector>

#include "meanflow/ext_real.hpp"
#include "meanflow/jet.hpp"

namespace meanflow {

class InsufficientCoefficients : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two-point function f2(mu) = sum_n b_n p_n(n mu), p_n(X) = X^(n-1) / (1 + X^n).
class AnsatzCoefficients {
 public:
  AnsatzCoefficients() = default;
  // b holds b_1..b_M. The tail constant is derived from the stored values.
  explicit AnsatzCoefficients(std::vector<ExtReal> b);
  // b is the whole ansatz (b_n = 0 beyond M): no tail is modelled.
  static AnsatzCoefficients finite(std::vector<ExtReal> b);

  int size() const { return static_cast<int>(b_.size()); }
  // 1-based, b(0) == 0 by convention.
  ExtReal b(int n) const;
  const std::vector<ExtReal>& values() const { return b_; }
  // Smallest C with |b_n| <= C n^2 / 2^n on stored n, times 1.5; zero for finite().
  const ExtReal& tail_constant() const { return tail_c_; }
  // Index n maximizing |b_n| 2^n / n^2.
  int peak_index() const { return peak_; }

 private:
  std::vector<ExtReal> b_;
  ExtReal tail_c_;
  int peak_ = 0;
};

// Taylor coefficient f_{2,k} of the ansatz at mu = 0.
ExtReal f2k_from_b(const AnsatzCoefficients& b, int k);

// Inverse map: b_1..b_M from f_{2,0..M-1}.
AnsatzCoefficients b_from_f2(const std::vector<ExtReal>& f2k, int M);

struct AnsatzJet {
  Jet jet;
  // Analytic bound on the dropped tail, per coefficient.
  std::vector<ExtReal> tail;
};

// Jet of a single term p_n(n mu) around mu0.
Jet pn_jet(int n, const ExtReal& mu0, int order);

// Jet of f2 around mu0 using all stored b's, with the tail bound of the dropped terms.
AnsatzJet f2_jet_with_tail(const AnsatzCoefficients& b, const ExtReal& mu0, int order);

// Same, throwing InsufficientCoefficients when some tail bound exceeds tol.
Jet f2_jet(const AnsatzCoefficients& b, const ExtReal& mu0, int order, const ExtReal& tol);

// C_0 = 1, C_{l+1} = 1 + sum_j binom(l+1, j) C_j. Checks C_l <= 4^l l!.
std::vector<ExtReal> cl_sequence(int l_max);

}  // namespace meanflow
