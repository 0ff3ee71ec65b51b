#include "meanflow/jet.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace meanflow {
namespace {

void require_same_center(const Jet& a, const Jet& b, const char* op) {
  if (!(a.center() == b.center()))
    throw ContractError(std::string(op) + ": jets expanded around different centers");
}

int shared_order(const Jet& a, const Jet& b) { return std::min(a.order(), b.order()); }

}  // namespace

Jet::Jet(ExtReal center, std::vector<ExtReal> coeffs) : center_(std::move(center)), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ContractError("jet needs at least one coefficient");
}

Jet::Jet(ExtReal center, std::initializer_list<ExtReal> coeffs)
    : Jet(std::move(center), std::vector<ExtReal>(coeffs)) {}

Jet Jet::zero(const ExtReal& center, int order) {
  if (order < 0) throw ContractError("negative jet order");
  return Jet(center, std::vector<ExtReal>(static_cast<std::size_t>(order) + 1));
}

Jet Jet::constant(const ExtReal& center, const ExtReal& value, int order) {
  Jet j = zero(center, order);
  j[0] = value;
  return j;
}

Jet Jet::identity(const ExtReal& center, int order) {
  Jet j = constant(center, center, order);
  if (order >= 1) j[1] = ExtReal(1);
  return j;
}

ExtReal Jet::derivative_value(int k) const {
  return coeffs_.at(static_cast<std::size_t>(k)) * factorial_int(static_cast<unsigned long>(k));
}

Jet Jet::truncated(int order) const {
  if (order > this->order()) throw ContractError("cannot raise jet order by truncation");
  return Jet(center_, std::vector<ExtReal>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

Jet jet_add(const Jet& a, const Jet& b) {
  require_same_center(a, b, "jet_add");
  Jet r = Jet::zero(a.center(), shared_order(a, b));
  for (int k = 0; k <= r.order(); ++k) r[k] = a[k] + b[k];
  return r;
}

Jet jet_sub(const Jet& a, const Jet& b) {
  require_same_center(a, b, "jet_sub");
  Jet r = Jet::zero(a.center(), shared_order(a, b));
  for (int k = 0; k <= r.order(); ++k) r[k] = a[k] - b[k];
  return r;
}

Jet jet_scale(const Jet& a, const ExtReal& s) {
  Jet r = a;
  for (int k = 0; k <= r.order(); ++k) r[k] *= s;
  return r;
}

Jet jet_add_constant(const Jet& a, const ExtReal& s) {
  Jet r = a;
  r[0] += s;
  return r;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  require_same_center(a, b, "jet_mul");
  Jet r = Jet::zero(a.center(), shared_order(a, b));
  ExtReal t;
  for (int k = 0; k <= r.order(); ++k) {
    ExtReal acc;
    for (int i = 0; i <= k; ++i) {
      mpfr_mul(t.raw(), a[i].raw(), b[k - i].raw(), MPFR_RNDN);
      acc += t;
    }
    r[k] = std::move(acc);
  }
  return r;
}

Jet jet_div(const Jet& a, const Jet& b) {
  require_same_center(a, b, "jet_div");
  if (b[0].is_zero()) throw RangeError("jet_div: divisor has zero constant term");
  Jet q = Jet::zero(a.center(), shared_order(a, b));
  for (int k = 0; k <= q.order(); ++k) {
    ExtReal acc = a[k];
    for (int i = 1; i <= k; ++i) acc -= b[i] * q[k - i];
    q[k] = acc / b[0];
  }
  return q;
}

Jet jet_exp(const Jet& a) {
  // k e_k = sum_{j=1}^k j a_j e_{k-j}
  Jet e = Jet::zero(a.center(), a.order());
  e[0] = exp(a[0]);
  for (int k = 1; k <= e.order(); ++k) {
    ExtReal acc;
    for (int j = 1; j <= k; ++j) acc += ExtReal(j) * a[j] * e[k - j];
    e[k] = acc / ExtReal(k);
  }
  return e;
}

Jet jet_derivative(const Jet& a) {
  if (a.order() < 1) throw ContractError("jet_derivative needs order >= 1");
  Jet d = Jet::zero(a.center(), a.order() - 1);
  for (int k = 0; k <= d.order(); ++k) d[k] = ExtReal(k + 1) * a[k + 1];
  return d;
}

ExtReal jet_eval(const Jet& a, const ExtReal& offset) {
  ExtReal acc = a[a.order()];
  for (int k = a.order() - 1; k >= 0; --k) acc = acc * offset + a[k];
  return acc;
}

}  // namespace meanflow
