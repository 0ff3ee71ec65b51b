#include "meanflow/bounds.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "meanflow/gamma.hpp"

namespace meanflow {

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string itos(long v) { return std::to_string(v); }
std::string rtos(const ExtReal& v) { return v.str(12); }

// log |x|! = log Gamma(|x| + 1)
ExtReal lfa(const ExtReal& x) { return log_factorial(abs(x)); }
ExtReal lfa(long x) { return lfa(ExtReal(x)); }

ExtReal from_mpq(const mpq_class& q) {
  ExtReal r;
  mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

ExtReal from_mpz(const mpz_class& z) {
  ExtReal r;
  mpfr_set_z(r.raw(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

mpz_class binom(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

ExtReal quarter(int n) { return ExtReal(n) / ExtReal(4); }

int get_int(const std::map<std::string, std::string>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw PreconditionError("missing parameter '" + key + "'");
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw PreconditionError("parameter '" + key + "' is not an integer: " + it->second);
  }
}

}  // namespace

// ---------------------------------------------------------------- combinatorics

BoundReport check_eq54(int a, int r, int m) {
  if (a < 0 || r < 0 || m < 0) throw PreconditionError("eq54: a, r, m must be >= 0");
  mpz_class lhs = 0;
  for (int nu = 0; nu <= m; ++nu) lhs += binom(a + nu, nu) * binom(r + m - nu, m - nu);
  const mpz_class rhs = binom(a + r + m + 1, m);
  return identity_report("eq54", {{"a", itos(a)}, {"r", itos(r)}, {"m", itos(m)}}, from_mpz(lhs), from_mpz(rhs),
                         lhs == rhs ? "exact" : "integer mismatch");
}

namespace {

void lemma33_hypotheses(int n1, int n2, int k, int a, int b) {
  if (n1 < 4 || n2 < 4 || n1 % 2 || n2 % 2) throw PreconditionError("lemma33: n1, n2 must be even and >= 4");
  if (k < 0 || a < 0 || b < 0) throw PreconditionError("lemma33: k, a, b must be >= 0");
  if (a + b > k + 2) throw PreconditionError("lemma33: a + b <= k + 2 violated");
  if (4 * (3 - a) > n1) throw PreconditionError("lemma33: 3 - n1/4 <= a violated");
  if (4 * (3 - b) > n2) throw PreconditionError("lemma33: 3 - n2/4 <= b violated");
}

// log of the closed bound on S(n1,n2,k,a,b)
ExtReal lemma33_log_rhs(int n1, int n2, int k, int a, int b) {
  const ExtReal s = quarter(n1 + n2);
  return -log(s + ExtReal(a + b - 5)) + lfa(s + ExtReal(k - 3)) - lfa(k + 2 - a - b);
}

}  // namespace

BoundReport check_lemma33(int n1, int n2, int k, int a, int b) {
  lemma33_hypotheses(n1, n2, k, a, b);
  ExtReal S(0);
  for (int nu = a; nu <= k + 2 - b; ++nu)
    S += exp(lfa(quarter(n1) + ExtReal(nu - 3)) + lfa(quarter(n2) + ExtReal(k - nu - 1)) - lfa(k + 2 - nu) - lfa(nu));
  return log_report("lemma33",
                    {{"n1", itos(n1)}, {"n2", itos(n2)}, {"k", itos(k)}, {"a", itos(a)}, {"b", itos(b)}}, S,
                    lemma33_log_rhs(n1, n2, k, a, b));
}

BoundReport check_lemma34(int n1, int n2, int k, int a, const ExtReal& l) {
  if (!(l.sign() > 0 && l < ExtReal(1))) throw PreconditionError("lemma34: l must lie in (0, 1)");
  if (2 * a > k + 2) throw PreconditionError("lemma34: 2a <= k + 2 violated");
  lemma33_hypotheses(n1, n2, k, a, a);
  ExtReal F(0);
  for (int nu = a; nu <= k + 2 - a; ++nu)
    F += exp(lfa(quarter(n1) + ExtReal(nu - 3)) + lfa(quarter(n2) + ExtReal(k - nu - 1)) -
             l * (lfa(k + 2 - nu) + lfa(nu)));
  const ExtReal log_rhs = (ExtReal(1) - l) * (lfa(a) + lfa(k + 2 - a)) + lemma33_log_rhs(n1, n2, k, a, a);
  return log_report("lemma34",
                    {{"n1", itos(n1)}, {"n2", itos(n2)}, {"k", itos(k)}, {"a", itos(a)}, {"l", rtos(l)}}, F, log_rhs);
}

BoundReport check_eq194(int n) {
  if (n < 12 || n % 2) throw PreconditionError("eq194: n must be even and >= 12");
  mpq_class sum = 0;
  for (int n1 = 4; n1 <= n - 2; n1 += 2) {
    const int n2 = n + 2 - n1;
    sum += mpq_class(1, static_cast<unsigned long>(n1) * n1 * n2 * n2);
  }
  mpq_class ratio(n, n - 2);
  ratio.canonicalize();
  const mpq_class lhs = ratio * sum;
  const mpq_class rhs(1, static_cast<unsigned long>(n) * n);
  const mpq_class gap = rhs - lhs;
  BoundReport r = linear_report("eq194", {{"n", itos(n)}}, from_mpq(lhs), from_mpq(rhs), "exact rationals");
  // the sign comes from the exact difference, not the rounded one
  r.margin = from_mpq(gap);
  r.pass = sgn(gap) >= 0;
  return r;
}

BoundReport check_eq195(int order, std::uint64_t seed) {
  if (order < 1) throw PreconditionError("eq195: order must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<ExtReal> fc, gc;
  for (int k = 0; k <= order; ++k) {
    fc.emplace_back(unif(rng));
    gc.emplace_back(unif(rng));
  }
  gc[0] = abs(gc[0]) + ExtReal(1);  // g > 0 at the center
  const Jet f(ExtReal(0), fc), g(ExtReal(0), gc);
  const Jet q = jet_div(f, g);

  // derivatives d_l = l! * coeff
  auto d = [](const Jet& j, int l) { return j.derivative_value(l); };
  std::vector<ExtReal> ql(static_cast<std::size_t>(order) + 1);
  ql[0] = d(f, 0) / d(g, 0);
  ExtReal worst(0);
  for (int l = 1; l <= order; ++l) {
    ExtReal s(0);
    for (int j = 1; j <= l; ++j)
      s += d(g, l + 1 - j) / (factorial_int(static_cast<unsigned long>(l + 1 - j)) *
                              factorial_int(static_cast<unsigned long>(j - 1))) *
           ql[static_cast<std::size_t>(j - 1)];
    ql[static_cast<std::size_t>(l)] = (d(f, l) - factorial_int(static_cast<unsigned long>(l)) * s) / d(g, 0);
    worst = max(worst, rel_diff(ql[static_cast<std::size_t>(l)], d(q, l)));
  }
  return linear_report("eq195", {{"order", itos(order)}, {"seed", itos(static_cast<long>(seed))}}, worst,
                       ExtReal("1e-50"), "relative mismatch against jet division");
}

BoundReport check_combinatorics(const std::string& target, const std::map<std::string, std::string>& params) {
  if (target == "eq54") return check_eq54(get_int(params, "a"), get_int(params, "r"), get_int(params, "m"));
  if (target == "lemma33")
    return check_lemma33(get_int(params, "n1"), get_int(params, "n2"), get_int(params, "k"), get_int(params, "a"),
                         get_int(params, "b"));
  if (target == "lemma34") {
    auto it = params.find("l");
    if (it == params.end()) throw PreconditionError("missing parameter 'l'");
    return check_lemma34(get_int(params, "n1"), get_int(params, "n2"), get_int(params, "k"), get_int(params, "a"),
                         ExtReal(it->second));
  }
  if (target == "eq194") return check_eq194(get_int(params, "n"));
  if (target == "eq195") return check_eq195(get_int(params, "order"), static_cast<std::uint64_t>(get_int(params, "seed")));
  throw PreconditionError("unknown combinatorics target '" + target + "'");
}

std::vector<BoundReport> eq54_exhaustive(int limit) {
  std::vector<BoundReport> out;
  for (int a = 0; a <= limit; ++a)
    for (int r = 0; r <= limit; ++r)
      for (int m = 0; m <= limit; ++m) out.push_back(check_eq54(a, r, m));
  return out;
}

std::vector<BoundReport> eq194_range(int n_lo, int n_hi) {
  std::vector<BoundReport> out;
  for (int n = n_lo + (n_lo % 2); n <= n_hi; n += 2) out.push_back(check_eq194(n));
  return out;
}

// ---------------------------------------------------------------- coefficient growth

ExtReal seed_floor_K(const TaylorTable& table, GrowthRegime regime) {
  const ExtReal f20 = abs(table.f2().at(0));
  const ExtReal g40 = abs(table.g(4, 0));
  const ExtReal N(table.N());
  const ExtReal g_scale = regime == GrowthRegime::LargeN ? ExtReal(32) * N : ExtReal(32);
  const ExtReal a = ExtReal(16) * f20;
  const ExtReal b = g_scale * g40;
  return max(max(a * a, b * b), ExtReal(25));
}

std::vector<BoundReport> check_coefficient_growth(const TaylorTable& table, GrowthRegime regime, const ExtReal& K) {
  if (!(K > ExtReal(1))) throw PreconditionError("coefficient growth: K must exceed 1");
  const int Ni = table.N();
  const ExtReal N(Ni);
  const ExtReal lK = log(K);
  const ExtReal lN = log(N);
  const ExtReal sK = sqrt(K);
  const ExtReal f20 = abs(table.f2().at(0));
  const ExtReal g40 = abs(table.g(4, 0));

  const char* prefix = regime == GrowthRegime::Massless ? "massless" : regime == GrowthRegime::LargeN ? "largeN" : "massive";
  // seed conditions
  {
    const ExtReal f_cap = sK / ExtReal(regime == GrowthRegime::Massive ? 16 : 4);
    const ExtReal g_cap = sK / (ExtReal(32) * (regime == GrowthRegime::LargeN ? N : ExtReal(1)));
    if (f20 > f_cap || g40 > g_cap)
      throw PreconditionError(std::string(prefix) + ": seed conditions fail at K = " + rtos(K));
  }
  if (regime == GrowthRegime::Massive && Ni != 1) throw PreconditionError("massive: table must have N = 1");

  std::vector<BoundReport> out;
  auto kp = [&](int n, int k) {
    return Params{{"N", itos(Ni)}, {"K", rtos(K)}, {"n", itos(n)}, {"k", itos(k)}, {"regime", prefix}};
  };
  const ExtReal root = (regime == GrowthRegime::Massive) ? ExtReal(8) : ExtReal(4);

  // f_{2,k}
  const auto& f2 = table.f2();
  for (int k = 1; k < static_cast<int>(f2.size()); ++k) {
    const ExtReal lhs = abs(f2[static_cast<std::size_t>(k)]);
    if (k == 1) {
      const ExtReal cap = regime == GrowthRegime::Massless ? K * N / ExtReal(2) : K / ExtReal(2);
      out.push_back(log_report(std::string(prefix) + "_f21", kp(2, 1), lhs, log(cap)));
      if (regime == GrowthRegime::Massless) continue;
    }
    if (regime == GrowthRegime::Massless && k < 2) continue;
    // |f_{2,k}| <= [N^{k+1}] K^{k+1/2} |k-3|! / (|k-1|!)^{1/root}
    ExtReal base = (ExtReal(k) + ExtReal("0.5")) * lK + lfa(k - 3) - lfa(k - 1) / root;
    const bool n_weight = regime == GrowthRegime::Massless;
    const ExtReal log_rhs = n_weight ? base + ExtReal(k + 1) * lN : base;
    std::string note;
    if (n_weight && Ni > 1) note = lhs.is_zero() || log(lhs) <= base ? "N-free form also holds" : "N-free form fails";
    out.push_back(log_report(std::string(prefix) + "_f2k", kp(2, k), lhs, log_rhs, note));
  }

  // g_{n,k}
  for (int n = 4; n <= table.n_max(); n += 2) {
    const ExtReal nn(n);
    const ExtReal lnn = log(nn);
    const ExtReal half = ExtReal(n) / ExtReal(2);
    const ExtReal nw = regime == GrowthRegime::LargeN ? -(half - ExtReal(1)) * lN : ExtReal(0);  // N^{1-n/2}
    for (int k = 0; k <= table.k_limit(n); ++k) {
      const ExtReal lhs = abs(table.g(n, k));
      const ExtReal kk(k);
      if (k <= 1 && !(n == 4 && k == 0)) {
        ExtReal log_rhs;
        if (n == 4) {
          log_rhs = lK - log(ExtReal(32)) - (regime == GrowthRegime::LargeN ? lN : ExtReal(0));
        } else if (k == 0) {
          log_rhs = (half - ExtReal("1.5")) * lK - log(ExtReal(2) * nn * nn) + nw;
        } else if (regime == GrowthRegime::Massive) {
          log_rhs = (half - ExtReal("0.5")) * lK - lnn;
        } else {
          log_rhs = (half - ExtReal("1.5")) * lK - ExtReal(2) * lnn + log(ExtReal(1) + nn * K / ExtReal(2)) + nw;
        }
        out.push_back(log_report(std::string(prefix) + "_gn01", kp(n, k), lhs, log_rhs));
        if (regime == GrowthRegime::Massless) continue;
      }
      if (regime == GrowthRegime::Massless && k < 2) continue;
      // K^{n/2+k-3/2} |n/4+k-3|! / (k!)^{1/root}, times N^{n/2+k-2} (massless) or N^{1-n/2} (large N)
      ExtReal log_rhs = (half + kk - ExtReal("1.5")) * lK + lfa(quarter(n) + ExtReal(k - 3)) - lfa(k) / root;
      if (regime == GrowthRegime::Massless) log_rhs += (half + kk - ExtReal(2)) * lN;
      if (regime == GrowthRegime::LargeN) log_rhs += nw;
      out.push_back(log_report(std::string(prefix) + "_gnk", kp(n, k), lhs, log_rhs));
    }
  }
  return out;
}

KSelection select_K(const TaylorTable& table, GrowthRegime regime) {
  KSelection sel;
  sel.K = seed_floor_K(table, regime);
  const ExtReal cap = ldexp(ExtReal(1), 64);
  for (;;) {
    sel.reports = check_coefficient_growth(table, regime, sel.K);
    if (all_pass(sel.reports) || sel.K * ExtReal(2) > cap) return sel;
    sel.K *= ExtReal(2);
    ++sel.doublings;
  }
}

// ---------------------------------------------------------------- b_n decay

ExtReal log_c_nN(int n, int N, const ExtReal& K) {
  if (n < 0) throw std::invalid_argument("log_c_nN: n >= 0");
  return ExtReal(n + 1) * log(ExtReal(N)) + (ExtReal(n) + ExtReal("0.5")) * log(K) + lfa(n - 3) - lfa(n - 1) / ExtReal(4) -
         ExtReal(n) * log(ExtReal(n + 1));
}

ExtReal c_tilde(int N, const ExtReal& K, int m_max) {
  ExtReal best;
  bool first = true;
  for (int m = 1; m <= m_max; ++m) {
    const ExtReal v = log_c_nN(m, N, K) + ExtReal(m + 3) * log(ExtReal(2)) - ExtReal(2) * log(ExtReal(m + 1));
    if (first || v > best) best = v;
    first = false;
  }
  return exp(best);
}

ExtReal c_constant(int N, const ExtReal& K) {
  return max(c_tilde(N, K), ExtReal(N) * sqrt(K) / ExtReal(2)) * ExtReal("1.05");
}

Summability c_nN_summability(int N, const ExtReal& K, int n_start, const ExtReal& tol, int n_cap) {
  // scan in double log-space; the tail at the chosen n is re-evaluated at working precision
  const double lN = std::log(static_cast<double>(N));
  const double lK = log(K).to_double();
  auto lc = [&](int n) {
    return (n + 1) * lN + (n + 0.5) * lK + std::lgamma(std::abs(n - 3) + 1.0) - std::lgamma(std::abs(n - 1) + 1.0) / 4 -
           n * std::log(n + 1.0);
  };
  const double ltol = log(tol).to_double();
  Summability s;
  s.growth_end = -1;
  double prev = lc(3);
  for (int n = 4; n <= n_cap; ++n) {
    const double cur = lc(n);
    if (s.growth_end < 0 && cur < prev) s.growth_end = n - 1;
    prev = cur;
    if (n < n_start || s.growth_end < 0 || n < s.growth_end) continue;
    // tail sum_{m > n} c_m <= c_{n+1} / (1 - r) with r = c_{n+2} / c_{n+1} (ratios decrease from here on)
    const double l1 = lc(n + 1), l2 = lc(n + 2);
    const double r = std::exp(l2 - l1);
    if (r >= 1) continue;
    if (l1 - std::log1p(-r) < ltol - 1.0) {
      s.n0 = n;
      const ExtReal c1 = exp(log_c_nN(n + 1, N, K));
      const ExtReal rr = exp(log_c_nN(n + 2, N, K) - log_c_nN(n + 1, N, K));
      s.tail = c1 / (ExtReal(1) - rr);
      return s;
    }
  }
  s.tail = exp(log_c_nN(n_cap + 1, N, K));
  return s;
}

std::vector<BoundReport> check_bn_decay(const AnsatzCoefficients& b, int N, const ExtReal& K) {
  std::vector<BoundReport> out;
  const ExtReal C = c_constant(N, K);
  const ExtReal lC = log(C);
  const ExtReal l2 = log(ExtReal(2));
  const int M = b.size();
  for (int n = 1; n <= M; ++n) {
    const ExtReal log_rhs = lC + ExtReal(2) * log(ExtReal(n)) - ExtReal(n) * l2;
    out.push_back(log_report("prop33_bn", {{"N", itos(N)}, {"K", rtos(K)}, {"n", itos(n)}}, abs(b.b(n)), log_rhs,
                             "C = " + rtos(C)));
  }
  // |b_{n+1}| <= c_{n,N} + sum_{rho | n+1, rho >= 2} |b_{(n+1)/rho}| / rho^n
  for (int n = 1; n + 1 <= M; ++n) {
    ExtReal rhs = exp(log_c_nN(n, N, K));
    for (int rho = 2; rho <= n + 1; ++rho)
      if ((n + 1) % rho == 0) rhs += abs(b.b((n + 1) / rho)) / pow(ExtReal(rho), static_cast<long>(n));
    out.push_back(log_report("eq86_chain", {{"N", itos(N)}, {"K", rtos(K)}, {"n", itos(n + 1)}}, abs(b.b(n + 1)),
                             log(rhs)));
  }
  const Summability s = c_nN_summability(N, K);
  BoundReport r = linear_report("eq86_summable", {{"N", itos(N)}, {"K", rtos(K)}, {"n0", itos(s.n0)}}, s.tail,
                                ExtReal("1e-30"),
                                "terms decrease from n = " + itos(s.growth_end) +
                                    (s.n0 < 0 ? "; tail never below 1e-30 within the scan" : ""));
  if (s.n0 < 0) r.pass = false, r.margin = -abs(r.margin);
  out.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------- derivative bounds

DerivativeConstants derivative_constants(const ExtReal& K) {
  DerivativeConstants d;
  d.C1 = c_constant(1, K);
  d.K1 = ExtReal(25) * d.C1;
  d.K2 = ExtReal(2) * d.K1;
  return d;
}

std::vector<BoundReport> check_pn_bounds(int n_max, int l_max, const std::vector<ExtReal>& mu_grid) {
  if (n_max < 1 || l_max < 0) throw PreconditionError("pn bounds: n_max >= 1, l_max >= 0");
  const std::vector<ExtReal> cl = cl_sequence(l_max);
  std::vector<BoundReport> out;
  for (const auto& mu : mu_grid) {
    if (mu.sign() <= 0) throw PreconditionError("pn bounds: mu must be > 0");
    const ExtReal lmu = log(mu);
    for (int n = 1; n <= n_max; ++n) {
      const Jet j = pn_jet(n, mu, l_max);
      const ExtReal nn(n);
      const ExtReal X = nn * mu;
      for (int l = 0; l <= l_max; ++l) {
        const ExtReal dmu = abs(j.derivative_value(l));
        const Params p{{"n", itos(n)}, {"l", itos(l)}, {"mu", rtos(mu)}};
        if (n > l + 1) {
          // tight at l = 0, so allow a few ulps of rounding
          const ExtReal log_rhs = ExtReal(n + l - 1) * log(nn) + ExtReal(n - l - 1) * lmu -
                                  log(ExtReal(1) + pow(X, static_cast<long>(n))) + log(cl[static_cast<std::size_t>(l)]) +
                                  ldexp(ExtReal(1), 16 - working_precision());
          out.push_back(log_report("prop34", p, dmu, log_rhs, l == 0 ? "equality case, rounding slack" : ""));
        }
        const ExtReal dX = dmu / pow(nn, static_cast<long>(l));
        ExtReal log_rhs;
        if (X < ExtReal(3))
          log_rhs = lfa(l + 2) + ExtReal(l + 1) * log(ExtReal(3)) + ExtReal(3 * l) / nn - ExtReal(l) * log(nn) -
                    ExtReal(2 * l + 1) * lmu;
        else
          log_rhs = ExtReal(l + 1) * log(ExtReal(3)) + lfa(l) - ExtReal(l) * (lmu + log(nn));
        out.push_back(log_report(X < ExtReal(3) ? "prop36_small" : "prop36_large", p, dX, log_rhs));
      }
    }
  }
  return out;
}

std::vector<BoundReport> check_f2_derivative_bounds(const AnsatzCoefficients& b, int l_max,
                                                    const std::vector<ExtReal>& mu_grid,
                                                    const DerivativeConstants& k) {
  if (k.K1 < ExtReal(24) * k.C1) throw PreconditionError("prop37: K1 >= 24 C(1,K) required");
  std::vector<BoundReport> out;
  for (const auto& mu : mu_grid) {
    if (mu.sign() <= 0) throw PreconditionError("prop37: mu must be > 0");
    const AnsatzJet aj = f2_jet_with_tail(b, mu, l_max);
    for (int l = 0; l <= l_max; ++l) {
      const ExtReal fl = factorial_int(static_cast<unsigned long>(l));
      const ExtReal lhs = fl * (abs(aj.jet[static_cast<std::size_t>(l)]) + aj.tail[static_cast<std::size_t>(l)]);
      const ExtReal log_M = min(ExtReal(2 * l + 1) * log(mu), ExtReal(l) * log(mu));
      const ExtReal log_rhs = ExtReal(l + 1) * log(k.K1) + lfa(l + 2) - log_M;
      out.push_back(log_report("prop37", {{"l", itos(l)}, {"mu", rtos(mu)}}, lhs, log_rhs, "lhs includes tail bound"));
    }
  }
  return out;
}

std::vector<BoundReport> check_tower_derivative_bounds(const AnsatzCoefficients& b, int n_max, int l_max,
                                                       const std::vector<ExtReal>& mu_grid,
                                                       const DerivativeConstants& k) {
  if (!(k.K2 > k.K1)) throw PreconditionError("prop38: K2 > K1 required");
  if (n_max < 4 || n_max % 2) throw PreconditionError("prop38: n_max even and >= 4");
  std::vector<BoundReport> out;
  const ExtReal lK2 = log(k.K2);
  for (const auto& mu : mu_grid) {
    if (mu.sign() <= 0) throw PreconditionError("prop38: mu must be > 0");
    const int order = l_max + n_max / 2 - 1;
    const Jet f2 = f2_jet_with_tail(b, mu, order).jet;
    const MomentTower tower = tower_jets(f2, 1, n_max);
    const bool small = mu < ExtReal(1);
    for (int n = 2; n <= n_max; n += 2) {
      const Jet& fn = tower.at(n);
      for (int l = 0; l <= l_max; ++l) {
        const ExtReal lhs = abs(fn.derivative_value(l));
        ExtReal log_rhs = ExtReal(n + l - 1) * lK2 + lfa(n + l) - ExtReal(2) * log(ExtReal(l + 1)) - lfa(n);
        if (small) log_rhs -= ExtReal(2 * l + n - 1) * log(mu);
        out.push_back(log_report(small ? "prop38_small" : "prop38_large",
                                 {{"n", itos(n)}, {"l", itos(l)}, {"mu", rtos(mu)}}, lhs, log_rhs));
      }
    }
    // radius floor: 1 / max_n |a_n|^{1/n} against min(mu,1) / (sqrt 2 K2)
    ExtReal log_rate;
    bool any = false;
    for (int n = 4; n <= n_max; n += 2) {
      const ExtReal an = abs(ldexp(tower.at(n)[0], n / 2) / ExtReal(n));
      if (an.is_zero()) continue;
      const ExtReal lr = log(an) / ExtReal(n);
      if (!any || lr > log_rate) log_rate = lr;
      any = true;
    }
    const ExtReal floor_r = min(mu, ExtReal(1)) / (sqrt(ExtReal(2)) * k.K2);
    const Params p{{"mu", rtos(mu)}, {"n_max", itos(n_max)}};
    if (any) {
      out.push_back(log_report("eq126_radius", p, floor_r, -log_rate, "lhs is the floor, rhs the fitted radius"));
    } else {
      BoundReport r = linear_report("eq126_radius", p, floor_r, floor_r, "all coefficients vanish");
      r.margin = floor_r;
      r.pass = true;
      out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------- massive kernel

std::vector<BoundReport> check_H_family(const HKernel& kernel, int l_max, const std::vector<ExtReal>& grid) {
  if (l_max < 0 || l_max > 8) throw PreconditionError("H family: 0 <= l_max <= 8");
  const ExtReal top = kernel.mu_max_tilde();
  const ExtReal c = loop_constant();
  const ExtReal C = ExtReal(256) * euler_e() * pi() * pi();
  const ExtReal l5e = log(ExtReal(5) * euler_e());
  const ExtReal lc = log(c);
  std::vector<BoundReport> out;
  for (const auto& mu : grid) {
    if (mu.sign() < 0 || mu - top > ExtReal(1e-20) * max(ExtReal(1), top))
      throw PreconditionError("H family: grid point outside [0, mu_max_tilde]");
    const HJets J = H_jet(kernel, mu, l_max);
    const std::string beta = rtos(kernel.beta0());
    auto p = [&](int l) { return Params{{"beta0", beta}, {"l", itos(l)}, {"mu", rtos(mu)}}; };
    const ExtReal& H0 = J.H[0];
    if (H0.sign() <= 0) {
      BoundReport r = linear_report("lemmaB1", p(0), ExtReal(0), C, "H not positive");
      r.pass = false;
      r.margin = ExtReal(-1);
      out.push_back(std::move(r));
    } else {
      out.push_back(log_report("lemmaB1", p(0), ExtReal(1) / H0, log(C)));
    }
    for (int l = 0; l <= l_max; ++l) {
      const ExtReal base = lc + ExtReal(l) * l5e + lfa(l - 1);
      out.push_back(log_report("lemmaB2", p(l), abs(J.h.derivative_value(l)), base));
      out.push_back(log_report("lemmaB3", p(l), abs(J.H.derivative_value(l)), log(ExtReal(3)) + base));
      if (l >= 1) {
        const ExtReal lhs = abs(J.log_h_prime.derivative_value(l - 1));
        const ExtReal log_rhs = lc + ExtReal(l) * log(C) + ExtReal(l + 1) * l5e + ExtReal(l) * log(ExtReal(2)) + lfa(l - 1);
        out.push_back(log_report("lemmaB4", p(l), lhs, log_rhs));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- suites

BoundSuite massless_bound_suite(const ExtReal& f2_0, const ExtReal& g4_0, const BoundSuiteOptions& o) {
  BoundSuite suite;
  const TaylorTable table = fill_taylor_table(f2_0, g4_0, o.N, o.n_max, o.k_max);
  KSelection sel = select_K(table, GrowthRegime::Massless);
  suite.K = sel.K;
  suite.reports = std::move(sel.reports);
  suite.constants = derivative_constants(suite.K);

  UvScanOptions scan;
  scan.rel_tol = ExtReal(1e-8);
  const int order = o.l_max + o.n_tower / 2 - 1;
  const AnsatzCoefficients b = adaptive_ansatz(
      [&](int depth) {
        const int k_top = depth - 1;
        return fill_taylor_table(f2_0, g4_0, o.N, n_max_for_f2_index(k_top), std::max(k_top, 1)).f2();
      },
      o.mu_grid, order, scan, &suite.ansatz_depth);

  auto append = [&suite](std::vector<BoundReport> r) {
    suite.reports.insert(suite.reports.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  };
  append(check_bn_decay(b, o.N, suite.K));
  append(check_pn_bounds(o.n_tower, o.l_max, o.mu_grid));
  append(check_f2_derivative_bounds(b, o.l_max, o.mu_grid, suite.constants));
  if (o.N == 1) append(check_tower_derivative_bounds(b, o.n_tower, o.l_max, o.mu_grid, suite.constants));
  sort_reports(suite.reports);
  return suite;
}

ExtReal margin_drift(const std::function<std::vector<BoundReport>()>& run) {
  const std::vector<BoundReport> a = run();
  std::vector<BoundReport> b;
  {
    PrecisionScope twice(2 * working_precision());
    b = run();
  }
  if (a.size() != b.size()) throw std::logic_error("margin_drift: report count changed with precision");
  ExtReal worst(0);
  for (std::size_t i = 0; i < a.size(); ++i) worst = max(worst, rel_diff(a[i].margin, b[i].margin));
  return worst;
}

}  // namespace meanflow
