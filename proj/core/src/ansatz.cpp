#include "meanflow/ansatz.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace meanflow {
namespace {

// Round a wide intermediate back to working precision.
ExtReal narrowed(const ExtReal& wide) {
  ExtReal r;
  mpfr_set(r.raw(), wide.raw(), MPFR_RNDN);
  return r;
}

constexpr long kGuardBits = 64;

// b_{(k+1)/rho} when rho divides k+1, otherwise zero.
const ExtReal* divisor_term(const AnsatzCoefficients& b, int k, int rho) {
  if ((k + 1) % rho != 0) return nullptr;
  return &b.values()[static_cast<std::size_t>((k + 1) / rho - 1)];
}

// Coefficients of (x0 + n t)^p in t, truncated at `order`.
std::vector<ExtReal> shifted_power(const ExtReal& x0, int n, int p, int order) {
  std::vector<ExtReal> c(static_cast<std::size_t>(order) + 1);
  const ExtReal nn(n);
  for (int j = 0; j <= std::min(order, p); ++j) {
    ExtReal term = binomial_int(static_cast<unsigned long>(p), static_cast<unsigned long>(j)) * pow(nn, j);
    if (p - j > 0) term *= pow(x0, p - j);
    c[static_cast<std::size_t>(j)] = std::move(term);
  }
  return c;
}

}  // namespace

AnsatzCoefficients::AnsatzCoefficients(std::vector<ExtReal> b) : b_(std::move(b)) {
  if (b_.empty()) throw std::invalid_argument("ansatz needs at least one coefficient");
  ExtReal best;
  for (std::size_t i = 0; i < b_.size(); ++i) {
    b_[i].checked("ansatz coefficient");
    const long n = static_cast<long>(i) + 1;
    ExtReal scaled = abs(b_[i]) * ldexp(ExtReal(1), n) / ExtReal(n * n);
    if (scaled > best) {
      best = scaled;
      peak_ = static_cast<int>(n);
    }
  }
  tail_c_ = best * ExtReal::ratio(3, 2);
}

AnsatzCoefficients AnsatzCoefficients::finite(std::vector<ExtReal> b) {
  AnsatzCoefficients a(std::move(b));
  a.tail_c_ = ExtReal(0);
  return a;
}

ExtReal AnsatzCoefficients::b(int n) const {
  if (n == 0) return ExtReal(0);
  if (n < 0 || n > size()) throw InsufficientCoefficients("b_" + std::to_string(n) + " not stored");
  return b_[static_cast<std::size_t>(n - 1)];
}

ExtReal f2k_from_b(const AnsatzCoefficients& b, int k) {
  if (k < 0) throw std::invalid_argument("negative Taylor index");
  if (k + 1 > b.size())
    throw InsufficientCoefficients("f2k_from_b: need b_" + std::to_string(k + 1) + ", have " +
                                   std::to_string(b.size()));
  // (k+1)^k / rho^k = ((k+1)/rho)^k is an integer power, so each term is one product
  ExtReal sum;
  {
    PrecisionScope wide(working_precision() + kGuardBits);
    sum = ExtReal(0);
    for (int rho = 1; rho <= k + 1; ++rho) {
      const ExtReal* bn = divisor_term(b, k, rho);
      if (!bn) continue;
      ExtReal term = *bn * pow(ExtReal((k + 1) / rho), k);
      if (rho % 2 == 0) sum -= term; else sum += term;
    }
  }
  return narrowed(sum);
}

AnsatzCoefficients b_from_f2(const std::vector<ExtReal>& f2k, int M) {
  if (M < 1 || static_cast<int>(f2k.size()) < M)
    throw InsufficientCoefficients("b_from_f2: need " + std::to_string(M) + " Taylor coefficients");
  std::vector<ExtReal> b;
  b.reserve(static_cast<std::size_t>(M));
  b.push_back(f2k[0]);
  const long prec = working_precision();
  for (int n = 1; n < M; ++n) {
    ExtReal v;
    {
      PrecisionScope wide(prec + kGuardBits);
      v = f2k[static_cast<std::size_t>(n)] / pow(ExtReal(n + 1), n);
      for (int rho = 2; rho <= n + 1; ++rho) {
        if ((n + 1) % rho != 0) continue;
        ExtReal term = b[static_cast<std::size_t>((n + 1) / rho - 1)] / pow(ExtReal(rho), n);
        if (rho % 2 == 0) v += term; else v -= term;
      }
    }
    b.push_back(narrowed(v));
  }
  return AnsatzCoefficients(std::move(b));
}

Jet pn_jet(int n, const ExtReal& mu0, int order) {
  const ExtReal x0 = ExtReal(n) * mu0;
  Jet num(mu0, shifted_power(x0, n, n - 1, order));
  Jet den(mu0, shifted_power(x0, n, n, order));
  den[0] += ExtReal(1);
  return jet_div(num, den);
}

std::vector<ExtReal> cl_sequence(int l_max) {
  if (l_max < 0) throw std::invalid_argument("l_max must be >= 0");
  std::vector<ExtReal> c{ExtReal(1)};
  for (int l = 0; l < l_max; ++l) {
    ExtReal next(1);
    for (int j = 0; j <= l; ++j)
      next += binomial_int(static_cast<unsigned long>(l + 1), static_cast<unsigned long>(j)) * c[static_cast<std::size_t>(j)];
    c.push_back(std::move(next));
  }
  for (int l = 0; l <= l_max; ++l) {
    if (c[static_cast<std::size_t>(l)] > pow(ExtReal(4), l) * factorial_int(static_cast<unsigned long>(l)))
      throw std::logic_error("C_l exceeds 4^l l! at l = " + std::to_string(l));
  }
  return c;
}

AnsatzJet f2_jet_with_tail(const AnsatzCoefficients& b, const ExtReal& mu0, int order) {
  if (mu0.sign() < 0) throw std::invalid_argument("f2_jet: mu0 must be >= 0");
  if (order < 0) throw std::invalid_argument("f2_jet: negative order");
  const int M = b.size();
  Jet sum = Jet::zero(mu0, order);
  for (int n = 1; n <= M; ++n) {
    const ExtReal& bn = b.values()[static_cast<std::size_t>(n - 1)];
    if (bn.is_zero()) continue;
    sum = jet_add(sum, jet_scale(pn_jet(n, mu0, order), bn));
  }

  std::vector<ExtReal> tail(static_cast<std::size_t>(order) + 1);
  const ExtReal& C = b.tail_constant();
  if (!C.is_zero()) {
    const std::vector<ExtReal> cl = cl_sequence(order);
    for (int k = 0; k <= order; ++k) {
      // The derivative bound n^{2k} (n mu)^{n-k-1} / (1 + (n mu)^n) C_k needs n > k+1.
      if (M + 1 <= k + 1)
        throw InsufficientCoefficients("f2_jet: order " + std::to_string(k) + " needs more than " +
                                       std::to_string(M) + " coefficients for a tail bound");
      if (mu0.is_zero()) continue;  // every dropped term vanishes to order k at the origin
      const ExtReal weight = C * cl[static_cast<std::size_t>(k)] / factorial_int(static_cast<unsigned long>(k));
      const int n_last = std::max(M, 6 * (k + 1)) + 64;
      ExtReal acc;
      for (int n = M + 1; n <= n_last; ++n) {
        const ExtReal x = ExtReal(n) * mu0;
        ExtReal q = pow(x, n - k - 1) / (ExtReal(1) + pow(x, n));
        acc += ExtReal(n) * ExtReal(n) * pow(ExtReal(n), 2 * k) * ldexp(q, -n);
      }
      // Beyond n_last: ratio of consecutive n^{2k+2} 2^{-n} is below 3/4, and q <= (n mu)^{-k-1}, q <= 1.
      const long m = n_last + 1;
      ExtReal q_cap = min(ExtReal(1), pow(ExtReal(m) * mu0, -(k + 1)));
      acc += ExtReal(4) * pow(ExtReal(m), 2 * k + 2) * ldexp(q_cap, -m);
      tail[static_cast<std::size_t>(k)] = weight * acc;
    }
  }
  return AnsatzJet{std::move(sum), std::move(tail)};
}

Jet f2_jet(const AnsatzCoefficients& b, const ExtReal& mu0, int order, const ExtReal& tol) {
  if (tol.sign() <= 0) throw std::invalid_argument("f2_jet: tol must be > 0");
  AnsatzJet r = f2_jet_with_tail(b, mu0, order);
  for (int k = 0; k <= order; ++k) {
    if (r.tail[static_cast<std::size_t>(k)] > tol)
      throw InsufficientCoefficients("f2_jet: tail bound " + r.tail[static_cast<std::size_t>(k)].str(6) +
                                     " exceeds tolerance at coefficient " + std::to_string(k));
  }
  return std::move(r.jet);
}

}  // namespace meanflow
