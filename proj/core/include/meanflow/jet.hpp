#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "meanflow/ext_real.hpp"

namespace meanflow {

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Truncated Taylor expansion around `center`: coeffs[k] = f^(k)(center) / k!.
class Jet {
 public:
  Jet() : coeffs_(1) {}
  Jet(ExtReal center, std::vector<ExtReal> coeffs);
  Jet(ExtReal center, std::initializer_list<ExtReal> coeffs);

  static Jet zero(const ExtReal& center, int order);
  static Jet constant(const ExtReal& center, const ExtReal& value, int order);
  // The function mu -> mu itself: [center, 1, 0, ...].
  static Jet identity(const ExtReal& center, int order);

  const ExtReal& center() const { return center_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<ExtReal>& coeffs() const { return coeffs_; }
  const ExtReal& operator[](std::size_t k) const { return coeffs_[k]; }
  ExtReal& operator[](std::size_t k) { return coeffs_[k]; }

  // k-th derivative at the center: k! * coeffs[k].
  ExtReal derivative_value(int k) const;
  Jet truncated(int order) const;

 private:
  ExtReal center_;
  std::vector<ExtReal> coeffs_;
};

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_scale(const Jet& a, const ExtReal& s);
Jet jet_add_constant(const Jet& a, const ExtReal& s);
Jet jet_mul(const Jet& a, const Jet& b);
// Throws RangeError when b[0] == 0.
Jet jet_div(const Jet& a, const Jet& b);
Jet jet_exp(const Jet& a);
// Derivative with respect to the expansion variable; order drops by one.
Jet jet_derivative(const Jet& a);
// Horner evaluation of sum a[k] * offset^k.
ExtReal jet_eval(const Jet& a, const ExtReal& offset);

}  // namespace meanflow
