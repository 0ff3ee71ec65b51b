#include "meanflow/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace meanflow {
namespace {

struct RuleCache {
  std::mutex mu;
  std::map<std::pair<int, long>, std::unique_ptr<GaussRule>> rules;
};

// Legendre P_m and its derivative at x by the three-term recurrence.
std::pair<ExtReal, ExtReal> legendre(int m, const ExtReal& x) {
  ExtReal p0(1), p1 = x;
  for (int k = 2; k <= m; ++k) {
    ExtReal p2 = (ExtReal(2 * k - 1) * x * p1 - ExtReal(k - 1) * p0) / ExtReal(k);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  ExtReal dp = ExtReal(m) * (x * p1 - p0) / (x * x - ExtReal(1));
  return {p1, dp};
}

// Orthonormal Hermite recurrence; returns (psi_m(x), psi_{m-1}(x)) for weight e^{-x^2}.
std::pair<ExtReal, ExtReal> hermite(int m, const ExtReal& x) {
  ExtReal p0 = pow(pi(), ExtReal::ratio(-1, 4));
  ExtReal p1 = sqrt(ExtReal(2)) * x * p0;
  if (m == 0) return {p0, ExtReal(0)};
  for (int k = 2; k <= m; ++k) {
    ExtReal p2 = sqrt(ExtReal(2) / ExtReal(k)) * x * p1 - sqrt(ExtReal(k - 1) / ExtReal(k)) * p0;
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  return {p1, p0};
}

GaussRule build_legendre(int m) {
  GaussRule r;
  const long p = working_precision();
  const ExtReal eps = ldexp(ExtReal(1), -p + 4);
  for (int i = 1; i <= m; ++i) {
    ExtReal x(std::cos(3.14159265358979323846 * (i - 0.25) / (m + 0.5)));
    for (int it = 0; it < 200; ++it) {
      auto [pm, dp] = legendre(m, x);
      ExtReal dx = pm / dp;
      x -= dx;
      if (abs(dx) < eps) break;
    }
    auto [pm, dp] = legendre(m, x);
    r.nodes.push_back(x);
    r.weights.push_back(ExtReal(2) / ((ExtReal(1) - x * x) * dp * dp));
  }
  return r;
}

GaussRule build_hermite(int m) {
  GaussRule r;
  const long p = working_precision();
  const ExtReal eps = ldexp(ExtReal(1), -p + 4);
  // Initial guesses from the standard asymptotic placement, refined by Newton.
  std::vector<double> guess(static_cast<std::size_t>(m));
  const double mm = m;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z;
    if (i == 0) z = std::sqrt(2 * mm + 1) - 1.85575 * std::pow(2 * mm + 1, -0.16667);
    else if (i == 1) z = guess[0] - 1.14 * std::pow(mm, 0.426) / guess[0];
    else if (i == 2) z = 1.86 * guess[1] - 0.86 * guess[0];
    else if (i == 3) z = 1.91 * guess[2] - 0.91 * guess[1];
    else z = 2.0 * guess[static_cast<std::size_t>(i - 1)] - guess[static_cast<std::size_t>(i - 2)];
    guess[static_cast<std::size_t>(i)] = z;
  }
  std::vector<ExtReal> xs, ws;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    ExtReal x(guess[static_cast<std::size_t>(i)]);
    for (int it = 0; it < 200; ++it) {
      auto [pm, pm1] = hermite(m, x);
      ExtReal dp = sqrt(ExtReal(2 * m)) * pm1;
      ExtReal dx = pm / dp;
      x -= dx;
      if (abs(dx) < eps) break;
    }
    auto [pm, pm1] = hermite(m, x);
    ExtReal dp = sqrt(ExtReal(2 * m)) * pm1;
    xs.push_back(x);
    ws.push_back(ExtReal(2) / (dp * dp));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    r.nodes.push_back(xs[i]);
    r.weights.push_back(ws[i]);
    if (!(xs[i].is_zero() || (m % 2 == 1 && i + 1 == xs.size()))) {
      r.nodes.push_back(-xs[i]);
      r.weights.push_back(ws[i]);
    }
  }
  return r;
}

const GaussRule& cached(RuleCache& cache, int m, GaussRule (*build)(int)) {
  std::lock_guard<std::mutex> lock(cache.mu);
  auto key = std::make_pair(m, working_precision());
  auto it = cache.rules.find(key);
  if (it != cache.rules.end()) return *it->second;
  auto rule = std::make_unique<GaussRule>(build(m));
  const GaussRule& ref = *rule;
  cache.rules.emplace(key, std::move(rule));
  return ref;
}

ExtReal panel(const std::function<ExtReal(const ExtReal&)>& f, const ExtReal& a, const ExtReal& b,
              const GaussRule& rule) {
  const ExtReal half = (b - a) / ExtReal(2);
  const ExtReal mid = (a + b) / ExtReal(2);
  ExtReal acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  static RuleCache cache;
  return cached(cache, m, build_legendre);
}

const GaussRule& gauss_hermite(int m) {
  static RuleCache cache;
  return cached(cache, m, build_hermite);
}

ExtReal integrate_adaptive(const std::function<ExtReal(const ExtReal&)>& f, const std::vector<ExtReal>& breaks,
                           const ExtReal& abs_tol, int max_depth) {
  const GaussRule& rule = gauss_legendre(16);
  const ExtReal span = breaks.back() - breaks.front();
  struct Item {
    ExtReal a, b, whole;
    int depth;
  };
  ExtReal total;
  std::vector<Item> stack;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    stack.push_back({breaks[i], breaks[i + 1], panel(f, breaks[i], breaks[i + 1], rule), 0});
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    const ExtReal mid = (it.a + it.b) / ExtReal(2);
    ExtReal left = panel(f, it.a, mid, rule);
    ExtReal right = panel(f, mid, it.b, rule);
    ExtReal refined = left + right;
    // Tolerance share proportional to the panel width, with a floor for tiny graded panels.
    ExtReal share = abs_tol * max((it.b - it.a) / span, ExtReal(1e-6)) / ExtReal(2);
    if (abs(refined - it.whole) <= share) {
      total += refined;
      continue;
    }
    if (it.depth >= max_depth) throw AccuracyError("adaptive quadrature did not converge");
    stack.push_back({it.a, mid, std::move(left), it.depth + 1});
    stack.push_back({mid, it.b, std::move(right), it.depth + 1});
  }
  return total;
}

}  // namespace meanflow
