#include "meanflow/hierarchical.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include "meanflow/massless.hpp"
#include "meanflow/quadrature.hpp"

namespace meanflow {

namespace {

ExtReal plus(const ExtReal& a, const ExtReal& b) { return a + b; }
ExtReal times(const ExtReal& a, const ExtReal& b) { return a * b; }
ExtReal scaled(const ExtReal& a, const ExtReal& s) { return a * s; }
Jet plus(const Jet& a, const Jet& b) { return jet_add(a, b); }
Jet times(const Jet& a, const Jet& b) { return jet_mul(a, b); }
Jet scaled(const Jet& a, const ExtReal& s) { return jet_scale(a, s); }

// Radial PDE right-hand side on coefficients: Lap r^n = n (n + N - 2) r^{n-2}.
template <class T>
std::map<int, T> rhs_coeffs(const std::map<int, T>& a, int N) {
  std::map<int, T> out;
  auto acc = [&out](int deg, const T& v) {
    auto it = out.find(deg);
    if (it == out.end())
      out.emplace(deg, v);
    else
      it->second = plus(it->second, v);
  };
  for (const auto& [n, an] : a) {
    acc(n - 2, scaled(an, ExtReal(n * (n + N - 2)) / ExtReal(2)));
    acc(n, scaled(an, ExtReal(4 - n)));
  }
  for (const auto& [n1, a1] : a)
    for (const auto& [n2, a2] : a) acc(n1 + n2 - 2, scaled(times(a1, a2), ExtReal(-n1 * n2) / ExtReal(2)));
  return out;
}

ExtReal eval_poly(const std::map<int, ExtReal>& c, const ExtReal& x) {
  ExtReal s(0);
  for (const auto& [n, v] : c) s += v * pow(x, static_cast<long>(n));
  return s;
}

}  // namespace

ExtReal PotentialPoly::operator()(const ExtReal& x) const { return eval_poly(coeffs, x); }

std::map<int, ExtReal> moments_map(MomentDirection direction, const std::map<int, ExtReal>& data) {
  std::map<int, ExtReal> out;
  for (const auto& [n, v] : data) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("moments_map: only even n >= 2");
    const ExtReal w = ldexp(ExtReal(1), n / 2) / ExtReal(n);
    out.emplace(n, direction == MomentDirection::FromF ? v * w : v / w);
  }
  return out;
}

PotentialPoly potential_from_moments(const std::map<int, ExtReal>& f, const ExtReal& lambda) {
  return PotentialPoly{moments_map(MomentDirection::FromF, f), lambda};
}

std::vector<ExtReal> convolution_step(const PotentialPoly& u, const ExtReal& L, const std::vector<ExtReal>& x_samples) {
  if (!(L > ExtReal(1))) throw std::invalid_argument("convolution_step: L must exceed 1");
  const ExtReal L4 = pow(L, 4L);
  const ExtReal scale = sqrt(ExtReal(2) * (L - ExtReal(1)));
  const ExtReal z_clip = ExtReal(12) / sqrt(ExtReal(2));
  const ExtReal floor_exp(-1e6);
  const ExtReal tol(1e-15);

  auto integrate = [&](const ExtReal& x0, int m) {
    const GaussRule& rule = gauss_hermite(m);
    ExtReal s(0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      if (abs(rule.nodes[i]) > z_clip) continue;
      const ExtReal arg = L4 * u(x0 + scale * rule.nodes[i]);
      if (arg < floor_exp)
        throw DomainError("convolution_step: potential too negative on the quadrature support (L^4 u = " +
                          arg.str(6) + ")");
      s += rule.weights[i] * exp(-arg);
    }
    return -log(s / sqrt(pi()));
  };

  std::vector<ExtReal> out;
  out.reserve(x_samples.size());
  for (const auto& x : x_samples) {
    const ExtReal x0 = x / L;
    ExtReal prev = integrate(x0, 8);
    bool done = false;
    for (int m = 16; m <= 512; m *= 2) {
      ExtReal cur = integrate(x0, m);
      const ExtReal scale_ref = max(max(abs(cur), abs(prev)), ExtReal(1e-30));
      const bool agree = abs(cur - prev) <= tol * scale_ref;
      prev = std::move(cur);
      if (agree) {
        done = true;
        break;
      }
    }
    if (!done) throw AccuracyError("convolution_step: Gauss-Hermite orders did not settle");
    out.push_back(std::move(prev));
  }
  return out;
}

std::map<int, ExtReal> pde_rhs(const PotentialPoly& u, int N) { return rhs_coeffs(u.coeffs, N); }

std::map<int, ExtReal> moment_system_rate(const PotentialPoly& u, int N) {
  const std::map<int, ExtReal> f = moments_map(MomentDirection::ToF, u.coeffs);
  auto fval = [&f](int n) {
    auto it = f.find(n);
    return it == f.end() ? ExtReal(0) : it->second;
  };
  std::map<int, ExtReal> rate;
  for (const auto& [n, fn] : f) {
    const ExtReal nN(n + N);
    ExtReal quad(0);
    for (int n1 = 2; n1 <= n; n1 += 2) quad += fval(n1) * fval(n + 2 - n1);
    // -lambda df_n/dlambda = n(n+N) [f_{n+2} - quad/(n+N) + (4-n)/(n(n+N)) f_n]
    ExtReal df = ExtReal(n) * nN * fval(n + 2) - ExtReal(n) * quad + ExtReal(4 - n) * fn;
    rate.emplace(n, df * ldexp(ExtReal(1), n / 2) / ExtReal(n));
  }
  return rate;
}

ExtReal pde_residual(const PotentialPoly& u, const ExtReal& x, int N) {
  std::map<int, ExtReal> rhs = pde_rhs(u, N);
  rhs.erase(0);
  for (const auto& [n, r] : moment_system_rate(u, N)) rhs[n] -= r;
  return eval_poly(rhs, x);
}

ExtReal convolution_discrepancy(const PotentialPoly& u, const ExtReal& L, const ExtReal& x) {
  const ExtReal moved = convolution_step(u, L, {x}).front();
  const ExtReal fd = (moved - u(x)) / log(L);
  return fd - eval_poly(pde_rhs(u, 1), x);
}

PotentialPoly potential_from_flow(const ExtReal& f2_0, const ExtReal& f4_0, int N, const ExtReal& mu, int n_max) {
  UvScanOptions o;
  o.n_report = n_max;
  const UvScanResult scan = uv_scan(N, f2_0, f4_0, {mu}, o);
  std::map<int, ExtReal> f;
  for (const auto& row : scan.rows) f.emplace(row.n, row.value);
  // lambda = e^{-mu/2} in units of the UV scale
  return potential_from_moments(f, exp(-mu / ExtReal(2)));
}

std::vector<BoundReport> convolution_order_reports(const PotentialPoly& u, const std::vector<ExtReal>& x_samples,
                                                   const ExtReal& step) {
  std::vector<BoundReport> out;
  for (const auto& x : x_samples) {
    const ExtReal d1 = convolution_discrepancy(u, ExtReal(1) + step, x);
    const ExtReal d2 = convolution_discrepancy(u, ExtReal(1) + step / ExtReal(2), x);
    const ExtReal ratio = d1 / d2;
    out.push_back(linear_report("convolution_order", {{"x", x.str(6)}, {"step", step.str(6)}},
                                abs(ratio - ExtReal(2)), ExtReal("0.4"),
                                "discrepancies " + d1.str(6) + " and " + d2.str(6)));
  }
  return out;
}

BoundReport equivalence_check(int n_max, int N, std::uint64_t seed) {
  if (n_max < 2 || n_max % 2 != 0) throw std::invalid_argument("equivalence_check: n_max must be even and >= 2");
  if (N < 1) throw std::invalid_argument("equivalence_check: N >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int top = n_max + 2;
  const int order = top / 2 + 4;
  const ExtReal center(unif(rng) + 2.0);
  std::vector<ExtReal> c(order + 1);
  for (auto& v : c) v = ExtReal(unif(rng));
  const MomentTower tower = tower_jets(Jet(center, c), N, top);
  const int common = tower.at(top).order();

  std::map<int, Jet> a;
  for (int n = 2; n <= top; n += 2)
    a.emplace(n, jet_scale(tower.at(n).truncated(common), ldexp(ExtReal(1), n / 2) / ExtReal(n)));
  const std::map<int, Jet> rhs = rhs_coeffs(a, N);

  ExtReal worst(0);
  for (int n = 2; n <= n_max; n += 2) {
    const Jet lhs = jet_scale(jet_derivative(a.at(n)), ExtReal(2));
    const Jet r = rhs.at(n).truncated(lhs.order());
    ExtReal size(0);
    for (int k = 0; k <= lhs.order(); ++k) size = max(size, max(abs(lhs[k]), abs(r[k])));
    if (size.is_zero()) continue;
    for (int k = 0; k <= lhs.order(); ++k) worst = max(worst, abs(lhs[k] - r[k]) / size);
  }
  return linear_report("hierarchical_equivalence",
                       {{"N", std::to_string(N)}, {"n_max", std::to_string(n_max)}, {"seed", std::to_string(seed)}},
                       worst, ExtReal("1e-30"), "max relative mismatch over jet coefficients");
}

}  // namespace meanflow
