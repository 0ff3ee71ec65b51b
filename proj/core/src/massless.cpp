#include "meanflow/massless.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace meanflow {
namespace {

std::string cell(int n, int k) { return "(" + std::to_string(n) + "," + std::to_string(k) + ")"; }

// sum over ordered pairs n1 + n2 = n + 2, n_i >= 4, of sum_nu g_{n1,nu} g_{n2,total-nu}
ExtReal pair_convolution(const TaylorTable& t, int n, int total) {
  ExtReal acc;
  for (int n1 = 4; n1 <= n - 2; n1 += 2) {
    const int n2 = n + 2 - n1;
    for (int nu = 0; nu <= total; ++nu) acc += t.g(n1, nu) * t.g(n2, total - nu);
  }
  return acc;
}

}  // namespace

ExtReal loop_constant() { return ExtReal(1) / (ExtReal(16) * pi() * pi()); }

BoundaryValues boundary_values(const MasslessModel& model) {
  if (model.N < 1) throw std::invalid_argument("N must be >= 1");
  if (model.mu_max.sign() <= 0) throw std::invalid_argument("mu_max must be > 0");
  const ExtReal two_pi = ldexp(pi(), 1);
  const ExtReal alpha0 = exp(-model.mu_max);
  BoundaryValues bv;
  bv.f2_0 = ExtReal(2) * pow(two_pi, 4) * alpha0 * model.c02;
  bv.f4_0 = ExtReal(4) * pi() * pi() * model.c04;
  if (model.large_n) bv.f4_0 /= ExtReal(model.N);
  return bv;
}

TaylorTable::TaylorTable(int N, int n_max, int k_max) : N_(N), n_max_(n_max), k_max_(k_max) {
  if (n_max < 4 || n_max % 2 != 0) throw std::invalid_argument("n_max must be even and >= 4");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  for (int n = 4; n <= n_max; n += 2) g_.emplace_back(static_cast<std::size_t>(k_limit(n) + 1));
}

bool TaylorTable::in_triangle(int n, int k) const {
  if (n < 4 || n > n_max_ || n % 2 != 0 || k < 0 || k > k_max_) return false;
  if (k <= 1) return true;
  return n + 2 * (k / 2) <= n_max_;
}

int TaylorTable::k_limit(int n) const {
  int k = -1;
  while (in_triangle(n, k + 1)) ++k;
  return k;
}

std::optional<ExtReal> TaylorTable::find(int n, int k) const {
  if (!in_triangle(n, k)) return std::nullopt;
  return g_[static_cast<std::size_t>(n / 2 - 2)][static_cast<std::size_t>(k)];
}

const ExtReal& TaylorTable::g(int n, int k) const {
  if (!in_triangle(n, k)) throw std::out_of_range("g" + cell(n, k) + " outside the computable triangle");
  return g_[static_cast<std::size_t>(n / 2 - 2)][static_cast<std::size_t>(k)];
}

void TaylorTable::set_g(int n, int k, ExtReal v) {
  if (!in_triangle(n, k)) throw std::out_of_range("g" + cell(n, k) + " outside the computable triangle");
  v.checked("table entry");
  g_[static_cast<std::size_t>(n / 2 - 2)][static_cast<std::size_t>(k)] = std::move(v);
}

int n_max_for_f2_index(int k_top) {
  if (k_top <= 1) return 4;
  return 4 + 2 * ((k_top - 1) / 2);
}

TaylorTable fill_taylor_table(const ExtReal& f2_0, const ExtReal& f4_0, int N, int n_max, int k_max) {
  TaylorTable t(N, n_max, k_max);
  const ExtReal NN(N);
  t.push_f2(f2_0);

  // shell 0
  t.set_g(4, 0, f4_0);
  for (int n = 6; n <= n_max; n += 2)
    t.set_g(n, 0, -ExtReal(n) / ExtReal(n - 4) * pair_convolution(t, n, 0));

  // shell 1
  const ExtReal f20 = t.f2()[0];
  t.push_f2((NN + ExtReal(2)) * t.g(4, 0) + f20 - f20 * f20);
  t.set_g(4, 1, ExtReal(-4) * f20 * t.g(4, 0));
  for (int n = 6; n <= n_max; n += 2) {
    ExtReal cross;
    for (int n1 = 4; n1 <= n - 2; n1 += 2) cross += t.g(n1, 0) * t.g(n + 2 - n1, 1);
    const ExtReal linear = ExtReal(2) * f20 + ExtReal(1) - ExtReal(4) / ExtReal(n);
    ExtReal rhs = ExtReal(-2) * cross - t.g(n, 0) * linear;
    t.set_g(n, 1, rhs * ExtReal(n) / ExtReal(n - 2));
  }

  for (int kappa = 2; kappa <= k_max; ++kappa) {
    if (!t.in_triangle(4, kappa - 1)) break;
    {
      const int k = kappa - 1;
      ExtReal sq;
      for (int nu = 0; nu <= k; ++nu) sq += t.f2()[static_cast<std::size_t>(nu)] * t.f2()[static_cast<std::size_t>(k - nu)];
      t.push_f2(((NN + ExtReal(2)) * t.g(4, k) + t.f2()[static_cast<std::size_t>(k)] - sq) / ExtReal(k + 1));
    }
    for (int n = 4; n <= n_max; n += 2) {
      if (!t.in_triangle(n, kappa)) break;
      const ExtReal nn(n);
      ExtReal rhs = nn * (nn + NN) * t.g(n + 2, kappa - 2) - ExtReal(n - 4) * t.g(n, kappa - 1);
      ExtReal mix;
      for (int nu = 0; nu <= kappa - 1; ++nu) mix += t.g(n, nu) * t.f2()[static_cast<std::size_t>(kappa - 1 - nu)];
      rhs -= ExtReal(2) * nn * mix;
      rhs -= nn * pair_convolution(t, n, kappa);
      t.set_g(n, kappa, rhs / ExtReal(n + 2 * kappa - 4));
    }
  }
  return t;
}

SeedResiduals seed_residuals(const TaylorTable& t, const ExtReal& f2_0) {
  SeedResiduals r;
  for (int n = 6; n <= t.n_max(); n += 2) {
    // (n-4)/n g_{n,0} + sum g g = 0
    std::vector<ExtReal> terms{ExtReal(n - 4) / ExtReal(n) * t.g(n, 0)};
    for (int n1 = 4; n1 <= n - 2; n1 += 2) terms.push_back(t.g(n1, 0) * t.g(n + 2 - n1, 0));
    ExtReal sum, scale;
    for (const auto& x : terms) {
      sum += x;
      scale = max(scale, abs(x));
    }
    if (!scale.is_zero()) r.order0 = max(r.order0, abs(sum) / scale);

    // (n-2)/n g_{n,1} + 2 sum g_{n1,0} g_{n2,1} + g_{n,0}(2 f20 + 1 - 4/n) = 0
    std::vector<ExtReal> terms1{ExtReal(n - 2) / ExtReal(n) * t.g(n, 1),
                                t.g(n, 0) * (ExtReal(2) * f2_0 + ExtReal(1) - ExtReal(4) / ExtReal(n))};
    for (int n1 = 4; n1 <= n - 2; n1 += 2) terms1.push_back(ExtReal(2) * t.g(n1, 0) * t.g(n + 2 - n1, 1));
    ExtReal sum1, scale1;
    for (const auto& x : terms1) {
      sum1 += x;
      scale1 = max(scale1, abs(x));
    }
    if (!scale1.is_zero()) r.order1 = max(r.order1, abs(sum1) / scale1);
  }
  return r;
}

const Jet& MomentTower::at(int n) const {
  auto it = jets.find(n);
  if (it == jets.end()) throw std::out_of_range("tower has no jet for n = " + std::to_string(n));
  return it->second;
}

MomentTower tower_jets(const Jet& f2, int N, int n_max) {
  if (n_max < 2 || n_max % 2 != 0) throw std::invalid_argument("n_max must be even and >= 2");
  if (f2.order() < n_max / 2 - 1)
    throw ContractError("tower_jets: f2 order " + std::to_string(f2.order()) + " too small for n_max " +
                        std::to_string(n_max));
  MomentTower tower;
  tower.center = f2.center();
  tower.n_max = n_max;
  tower.jets.emplace(2, f2);
  const ExtReal NN(N);
  for (int n = 2; n + 2 <= n_max; n += 2) {
    const Jet& fn = tower.at(n);
    const int order = fn.order() - 1;
    const ExtReal nn(n);
    const ExtReal denom = nn + NN;
    Jet quad = Jet::zero(f2.center(), order);
    for (int n1 = 2; n1 <= n; n1 += 2)
      quad = jet_add(quad, jet_mul(tower.at(n1).truncated(order), tower.at(n + 2 - n1).truncated(order)));
    Jet next = jet_scale(quad, ExtReal(1) / denom);
    next = jet_add(next, jet_scale(fn.truncated(order), ExtReal(n - 4) / (nn * denom)));
    next = jet_add(next, jet_scale(jet_derivative(fn), ExtReal(2) / (nn * denom)));
    tower.jets.emplace(n + 2, std::move(next));
  }
  return tower;
}

std::vector<int> depth_schedule(int initial, int max_depth) {
  std::vector<int> out;
  int d = std::max(initial, 4);
  while (d < max_depth) {
    out.push_back(d);
    d = d * 3 / 2;
    d += d % 2;
  }
  out.push_back(max_depth);
  return out;
}

bool ansatz_converged(const AnsatzCoefficients& b, const std::vector<ExtReal>& grid, int order,
                      const ExtReal& rel_tol) {
  if (b.tail_constant().is_zero()) return true;
  if (4 * b.peak_index() > 3 * b.size()) return false;
  for (const auto& mu : grid) {
    AnsatzJet aj = f2_jet_with_tail(b, mu, order);
    for (int k = 0; k <= order; ++k) {
      const ExtReal& tail = aj.tail[static_cast<std::size_t>(k)];
      if (tail > rel_tol * abs(aj.jet[k])) return false;
    }
  }
  return true;
}

UvScanResult uv_scan(int N, const ExtReal& f2_0, const ExtReal& f4_0, const std::vector<ExtReal>& grid,
                     const UvScanOptions& options) {
  if (options.n_report < 2 || options.n_report % 2 != 0) throw std::invalid_argument("n_report must be even >= 2");
  for (const auto& mu : grid)
    if (mu.sign() <= 0) throw std::invalid_argument("grid values must be > 0");
  const int order = options.n_report / 2 - 1;
  UvScanResult out;
  out.b = adaptive_ansatz(
      [&](int depth) {
        const int k_top = depth - 1;
        TaylorTable t = fill_taylor_table(f2_0, f4_0, N, n_max_for_f2_index(k_top), std::max(k_top, 1));
        return t.f2();
      },
      grid, order, options, &out.depth);
  for (const auto& mu : grid) {
    Jet f2 = f2_jet_with_tail(out.b, mu, order).jet;
    MomentTower tower = tower_jets(f2, N, options.n_report);
    for (int n = 2; n <= options.n_report; n += 2) out.rows.push_back({mu, n, tower.at(n)[0]});
  }
  return out;
}

}  // namespace meanflow
