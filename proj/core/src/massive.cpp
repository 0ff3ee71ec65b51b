#include "meanflow/massive.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "meanflow/quadrature.hpp"

namespace meanflow {
namespace {

// 1/j! for j = 0..n
std::vector<ExtReal> inverse_factorials(int n) {
  std::vector<ExtReal> r;
  ExtReal f(1);
  for (int j = 0; j <= n; ++j) {
    if (j > 0) f /= ExtReal(j);
    r.push_back(f);
  }
  return r;
}

// Series of beta0 e^{mu0 + t}.
Jet scaled_exp_jet(const ExtReal& beta0, const ExtReal& mu0, int order) {
  return jet_scale(jet_exp(Jet::identity(mu0, order)), beta0);
}

ExtReal pair_conv(const TaylorTable& t, int n, int total) {
  ExtReal acc;
  for (int n1 = 4; n1 <= n - 2; n1 += 2)
    for (int nu = 0; nu <= total; ++nu) acc += t.g(n1, nu) * t.g(n + 2 - n1, total - nu);
  return acc;
}

ExtReal f2_square(const std::vector<ExtReal>& f2, int total) {
  ExtReal acc;
  for (int nu = 0; nu <= total; ++nu) acc += f2[static_cast<std::size_t>(nu)] * f2[static_cast<std::size_t>(total - nu)];
  return acc;
}

ExtReal g_f2_mix(const TaylorTable& t, int n, int total) {
  ExtReal acc;
  for (int nu = 0; nu <= total; ++nu) acc += t.g(n, nu) * t.f2()[static_cast<std::size_t>(total - nu)];
  return acc;
}

}  // namespace

ExtReal propagator_value(const ExtReal& p2, const ExtReal& m, const ExtReal& alpha0, const ExtReal& alpha,
                         PropagatorVariant variant) {
  if (p2.sign() < 0) throw DomainError("propagator: p^2 must be >= 0");
  if (alpha0.sign() <= 0 || alpha < alpha0) throw DomainError("propagator: need alpha >= alpha0 > 0");
  if (variant == PropagatorVariant::MasslessCutoff) {
    // (e^{-alpha0 p^2} - e^{-alpha p^2}) / p^2, continuous at p = 0
    if (p2.is_zero()) return alpha - alpha0;
    return exp(-alpha0 * p2) * -expm1(-(alpha - alpha0) * p2) / p2;
  }
  if (m.sign() <= 0) throw DomainError("propagator: massive variant needs m > 0");
  const ExtReal m2 = m * m;
  const ExtReal top = ExtReal(1) / m2 + alpha0;
  if (alpha > top) throw DomainError("propagator: alpha beyond 1/m^2 + alpha0");
  const ExtReal s = p2 + m2;
  return (exp(-alpha0 * s) - exp(-alpha * s) * (top - alpha) * m2) / s;
}

ExtReal h_value(const ExtReal& beta, const ExtReal& rel_tol) {
  if (beta.sign() <= 0) throw DomainError("h_value needs beta > 0");
  const ExtReal c = loop_constant();
  auto integrand = [&beta](const ExtReal& u) {
    const ExtReal u2 = u * u;
    return u2 * u * exp(-u2) / (u2 + beta);
  };
  // Graded breakpoints resolve the u ~ sqrt(beta) scale; geometric up to 1, then unit panels.
  std::vector<ExtReal> breaks{ExtReal(0)};
  const ExtReal root = sqrt(beta);
  if (root < ExtReal(1)) {
    ExtReal x = ldexp(root, -4);
    while (x < ExtReal(1)) {
      breaks.push_back(x);
      x = ldexp(x, 1);
    }
  }
  // The integral is at least ~ 1/(2(1 + 2 beta)); the Gaussian tail beyond U is below e^{-U^2}/2.
  const ExtReal floor_value = ExtReal(1) / (ExtReal(2) * (ExtReal(1) + ExtReal(2) * beta));
  const double need = -log(rel_tol * floor_value * ExtReal(1e-3)).to_double();
  const int U = static_cast<int>(std::ceil(std::sqrt(std::max(need, 1.0)))) + 1;
  for (int x = 1; x <= U; ++x) breaks.push_back(ExtReal(x));
  ExtReal integral = integrate_adaptive(integrand, breaks, rel_tol * floor_value * ExtReal(1e-2));
  return ExtReal(2) * c * beta * integral;
}

MassiveModel::MassiveModel(ExtReal beta0_, ExtReal c02_, ExtReal c04_)
    : beta0(std::move(beta0_)), c02(std::move(c02_)), c04(std::move(c04_)) {
  if (beta0.sign() <= 0 || beta0 > ExtReal::ratio(1, 2)) throw std::invalid_argument("beta0 must lie in (0, 1/2]");
}

ExtReal MassiveModel::mu_max_tilde() const { return log1p(ExtReal(1) / beta0); }

HKernel::HKernel(ExtReal beta0) : beta0_(std::move(beta0)) {
  if (beta0_.sign() <= 0) throw std::invalid_argument("beta0 must be > 0");
  if (beta0_ > ExtReal::ratio(1, 2)) throw std::invalid_argument("beta0 must be <= 1/2, got " + beta0_.str(6));
}

HKernel::HKernel(const HKernel& o) : beta0_(o.beta0_) {
  std::lock_guard<std::mutex> lock(o.mu_);
  cache_ = o.cache_;
}

ExtReal HKernel::mu_max_tilde() const { return log1p(ExtReal(1) / beta0_); }

ExtReal HKernel::h_at(const ExtReal& mu0) const {
  const std::string key = mu0.str() + "@" + std::to_string(working_precision());
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  ExtReal v = h_value(beta0_ * exp(mu0));
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(key, v);
  return v;
}

HJets H_jet(const HKernel& kernel, const ExtReal& mu0, int order) {
  if (order < 0) throw std::invalid_argument("H_jet: negative order");
  const ExtReal top = kernel.mu_max_tilde();
  if (mu0.sign() < 0 || mu0 - top > ExtReal("1e-20") * max(ExtReal(1), top))
    throw std::invalid_argument("H_jet: center " + mu0.str(6) + " outside [0, mu_max_tilde]");
  const int full = order + 1;
  const ExtReal c = loop_constant();
  const Jet E = scaled_exp_jet(kernel.beta0(), mu0, full);
  // (k+1) h_{k+1} = 2 h_k + sum_j E_j h_{k-j} - c E_k
  Jet h = Jet::zero(mu0, full);
  h[0] = kernel.h_at(mu0);
  for (int k = 0; k < full; ++k) {
    ExtReal acc = ExtReal(2) * h[k] - c * E[k];
    for (int j = 0; j <= k; ++j) acc += E[j] * h[k - j];
    h[k + 1] = acc / ExtReal(k + 1);
  }
  Jet H = jet_add(jet_scale(E, -c), h);
  H[0] += c * (ExtReal(1) + kernel.beta0());
  Jet logp = jet_div(jet_derivative(H), H.truncated(order));
  return HJets{h.truncated(order), H.truncated(order), std::move(logp)};
}

BoundaryValues massive_boundary(const MassiveModel& model, const HKernel& kernel) {
  const ExtReal two_pi4 = pow(ldexp(pi(), 1), 4);
  const ExtReal H0 = H_jet(kernel, ExtReal(0), 0).H[0];
  BoundaryValues bv;
  bv.f2_0 = ExtReal(2) * two_pi4 * model.beta0 * exp(-model.beta0) * model.c02;
  bv.f4_0 = two_pi4 * exp(ExtReal(-2) * model.beta0) * H0 * model.c04;
  return bv;
}

TaylorTable massive_taylor_table(const ExtReal& f2t_0, const ExtReal& f4t_0, const HKernel& kernel, int n_max,
                                 int k_max) {
  TaylorTable t(1, n_max, k_max);
  const ExtReal& b0 = kernel.beta0();
  const ExtReal two_b0 = ExtReal(2) + b0;
  const Jet hk = H_jet(kernel, ExtReal(0), k_max + 1).log_h_prime;
  const std::vector<ExtReal> inv_fact = inverse_factorials(k_max + 2);

  // Convolutions whose inputs are final are memoized: sq[j], conv[n][j], mix[n][j].
  std::vector<ExtReal> sq;
  std::vector<std::vector<ExtReal>> conv(static_cast<std::size_t>(n_max / 2 + 1)), mix(conv.size());
  auto sq_at = [&](int j) -> const ExtReal& {
    while (static_cast<int>(sq.size()) <= j) sq.push_back(f2_square(t.f2(), static_cast<int>(sq.size())));
    return sq[static_cast<std::size_t>(j)];
  };
  auto conv_at = [&](int n, int j) -> const ExtReal& {
    auto& row = conv[static_cast<std::size_t>(n / 2)];
    while (static_cast<int>(row.size()) <= j) row.push_back(pair_conv(t, n, static_cast<int>(row.size())));
    return row[static_cast<std::size_t>(j)];
  };
  auto mix_at = [&](int n, int j) -> const ExtReal& {
    auto& row = mix[static_cast<std::size_t>(n / 2)];
    while (static_cast<int>(row.size()) <= j) row.push_back(g_f2_mix(t, n, static_cast<int>(row.size())));
    return row[static_cast<std::size_t>(j)];
  };

  // f_{2,k+1} from the n = 2 equation
  auto next_f2 = [&](int k) {
    const std::vector<ExtReal>& f2 = t.f2();
    ExtReal rhs = ExtReal(3) * t.g(4, k) + f2[static_cast<std::size_t>(k)] - two_b0 * sq_at(k);
    for (int nu = 0; nu <= k; ++nu) {
      rhs -= b0 * inv_fact[static_cast<std::size_t>(k - nu)] * f2[static_cast<std::size_t>(nu)];
      rhs += b0 * inv_fact[static_cast<std::size_t>(nu)] * sq_at(k - nu);
    }
    return rhs / ExtReal(k + 1);
  };

  t.push_f2(f2t_0);
  t.set_g(4, 0, f4t_0);
  for (int n = 6; n <= n_max; n += 2)
    t.set_g(n, 0, ExtReal(-2 * n) / ExtReal(n - 4) * pair_conv(t, n, 0));

  t.push_f2(next_f2(0));
  const ExtReal f20 = t.f2()[0];
  for (int n = 4; n <= n_max; n += 2) {
    const ExtReal nn(n);
    ExtReal cross;
    for (int n1 = 4; n1 <= n - 2; n1 += 2) cross += t.g(n1, 0) * t.g(n + 2 - n1, 1);
    const ExtReal linear = ExtReal(4) * f20 + (ExtReal(1) - ExtReal(4) / nn) * (ExtReal(1) + b0 / ExtReal(2)) + b0 -
                           (ExtReal(1) - ExtReal(2) / nn) * hk[0];
    ExtReal rhs = ExtReal(-4) * cross - t.g(n, 0) * linear;
    t.set_g(n, 1, rhs * nn / ExtReal(n - 2));
  }

  for (int kappa = 2; kappa <= k_max; ++kappa) {
    if (!t.in_triangle(4, kappa - 1)) break;
    t.push_f2(next_f2(kappa - 1));
    for (int n = 4; n <= n_max; n += 2) {
      if (!t.in_triangle(n, kappa)) break;
      const ExtReal nn(n);
      ExtReal rhs = nn * (nn + ExtReal(1)) * t.g(n + 2, kappa - 2) - ExtReal(n - 4) * t.g(n, kappa - 1);
      for (int nu = 0; nu <= kappa - 1; ++nu) {
        rhs += ExtReal(n - 2) * t.g(n, nu) * hk[kappa - 1 - nu];
        rhs -= b0 * nn * inv_fact[static_cast<std::size_t>(kappa - 1 - nu)] * t.g(n, nu);
      }
      rhs -= nn * two_b0 * conv_at(n, kappa);
      for (int a = 0; a <= kappa; ++a) rhs += b0 * nn * inv_fact[static_cast<std::size_t>(a)] * conv_at(n, kappa - a);
      rhs -= ExtReal(2) * nn * two_b0 * mix_at(n, kappa - 1);
      for (int a = 0; a <= kappa - 1; ++a)
        rhs += ExtReal(2) * b0 * nn * inv_fact[static_cast<std::size_t>(a)] * mix_at(n, kappa - 1 - a);
      t.set_g(n, kappa, rhs / ExtReal(n + 2 * kappa - 4));
    }
  }
  return t;
}

MomentTower massive_tower_jets(const Jet& f2t, const HKernel& kernel, int n_max) {
  if (n_max < 2 || n_max % 2 != 0) throw std::invalid_argument("n_max must be even and >= 2");
  if (f2t.order() < n_max / 2 - 1)
    throw ContractError("massive_tower_jets: f2 order " + std::to_string(f2t.order()) + " too small for n_max " +
                        std::to_string(n_max));
  const ExtReal& mu0 = f2t.center();
  if (mu0.sign() < 0 || mu0 - kernel.mu_max_tilde() > ExtReal(1e-20) * max(ExtReal(1), kernel.mu_max_tilde()))
    throw std::invalid_argument("massive_tower_jets: center outside [0, mu_max_tilde]");
  const int order = f2t.order();
  const Jet E = scaled_exp_jet(kernel.beta0(), mu0, order);
  Jet A = jet_scale(E, ExtReal(-1));
  A[0] += ExtReal(2) + kernel.beta0();
  const Jet L = H_jet(kernel, mu0, order).log_h_prime;

  MomentTower tower;
  tower.center = mu0;
  tower.n_max = n_max;
  tower.jets.emplace(2, f2t);
  for (int n = 2; n + 2 <= n_max; n += 2) {
    const Jet& fn = tower.at(n);
    const int ord = fn.order() - 1;
    const ExtReal nn(n);
    const ExtReal d = nn * (nn + ExtReal(1));
    const Jet fn_t = fn.truncated(ord);
    Jet quad = Jet::zero(mu0, ord);
    for (int n1 = 2; n1 <= n; n1 += 2)
      quad = jet_add(quad, jet_mul(tower.at(n1).truncated(ord), tower.at(n + 2 - n1).truncated(ord)));
    Jet next = jet_scale(jet_derivative(fn), ExtReal(2) / d);
    next = jet_add(next, jet_scale(fn_t, ExtReal(n - 4) / d));
    next = jet_sub(next, jet_scale(jet_mul(L.truncated(ord), fn_t), ExtReal(n - 2) / d));
    next = jet_add(next, jet_scale(jet_mul(E.truncated(ord), fn_t), ExtReal(1) / (nn + ExtReal(1))));
    next = jet_add(next, jet_scale(jet_mul(A.truncated(ord), quad), ExtReal(1) / (nn + ExtReal(1))));
    tower.jets.emplace(n + 2, std::move(next));
  }
  return tower;
}

namespace {

MassiveScanResult scan_impl(const std::function<BoundaryValues(const MassiveModel&, const HKernel&)>& boundary,
                            const std::vector<ExtReal>& grid, const UvScanOptions& options) {
  if (options.n_report < 2 || options.n_report % 2 != 0) throw std::invalid_argument("n_report must be even >= 2");
  const int order = options.n_report / 2 - 1;
  MassiveScanResult out;
  for (const auto& mu : grid) {
    if (mu.sign() <= 0) throw std::invalid_argument("grid values must be > 0");
    const ExtReal beta0 = ExtReal(1) / expm1(mu);
    MassiveModel model(beta0, ExtReal(0), ExtReal(0));
    HKernel kernel(beta0);
    const BoundaryValues bv = boundary(model, kernel);
    int depth = 0;
    AnsatzCoefficients b = adaptive_ansatz(
        [&](int dep) {
          const int k_top = dep - 1;
          return massive_taylor_table(bv.f2_0, bv.f4_0, kernel, n_max_for_f2_index(k_top), std::max(k_top, 1)).f2();
        },
        std::vector<ExtReal>{mu}, order, options, &depth);
    Jet f2 = f2_jet_with_tail(b, mu, order).jet;
    MomentTower tower = massive_tower_jets(f2, kernel, options.n_report);
    for (int n = 2; n <= options.n_report; n += 2) out.rows.push_back({mu, beta0, n, tower.at(n)[0]});
    ExtReal s;
    for (int n = 1; n <= b.size(); ++n) s += b.b(n) / ExtReal(n);
    out.depths.push_back(depth);
    out.sums.push_back(s);
  }
  return out;
}

}  // namespace

MassiveScanResult massive_uv_scan(const BoundaryValues& fixed, const std::vector<ExtReal>& grid,
                                  const UvScanOptions& options) {
  return scan_impl([&](const MassiveModel&, const HKernel&) { return fixed; }, grid, options);
}

MassiveScanResult massive_uv_scan_couplings(const ExtReal& c02, const ExtReal& c04, const std::vector<ExtReal>& grid,
                                            const UvScanOptions& options) {
  return scan_impl(
      [&](const MassiveModel& m, const HKernel& k) {
        return massive_boundary(MassiveModel(m.beta0, c02, c04), k);
      },
      grid, options);
}

}  // namespace meanflow
