#include "meanflow/jet.hpp"
#include "support.hpp"

using namespace meanflow;
using meanflow::testing::R;

namespace {

Jet J(std::initializer_list<ExtReal> c) { return Jet(ExtReal(0), c); }

void expect_coeffs(const Jet& j, std::initializer_list<ExtReal> want, const ExtReal& tol = ExtReal(0)) {
  ASSERT_EQ(j.order() + 1, static_cast<int>(want.size()));
  int k = 0;
  for (const auto& w : want) {
    EXPECT_LE(abs(j[k] - w), tol) << "coefficient " << k << ": " << j[k].str(20);
    ++k;
  }
}

// Rounding error of a Cauchy sum scales with its terms, not with the (possibly cancelled) result.
ExtReal cauchy_scale(const Jet& x, const Jet& y, int k) {
  ExtReal s;
  for (int i = 0; i <= k; ++i) s += abs(x[i]) * abs(y[k - i]);
  return s;
}

ExtReal ulps_of_scale(const ExtReal& a, const ExtReal& b, const ExtReal& scale) {
  if (scale.is_zero()) return abs(a - b);
  const long e = static_cast<long>(mpfr_get_exp(scale.raw()));
  return ldexp(abs(a - b), working_precision() - e);
}

struct RandomJets {
  Jet a, b, c;
};

RandomJets random_jets(std::mt19937_64& rng, int order) {
  std::uniform_real_distribution<double> u(-1, 1), pos(1, 2);
  std::vector<ExtReal> a, b, c;
  for (int k = 0; k <= order; ++k) {
    a.emplace_back(u(rng));
    b.emplace_back(k ? 0.5 * u(rng) : pos(rng));
    c.emplace_back(u(rng));
  }
  return {Jet(ExtReal(0), a), Jet(ExtReal(0), b), Jet(ExtReal(0), c)};
}

}  // namespace

TEST(JetMul, Examples) {
  expect_coeffs(jet_mul(J({1, 1, 0}), J({1, -1, 0})), {1, 0, -1});
  expect_coeffs(jet_mul(J({0, 1}), J({0, 1})), {0, 0});
  expect_coeffs(jet_mul(J({1, 2, 3}), J({1, 1, 1})), {1, 3, 6});
}

TEST(JetMul, OrderIsTheSmallerOne) {
  const Jet p = jet_mul(J({1, 2, 3, 4}), J({1, 1}));
  EXPECT_EQ(p.order(), 1);
  expect_coeffs(p, {1, 3});
}

TEST(JetMul, MismatchedCentersViolateContract) {
  const Jet a(ExtReal(0), {1, 1});
  const Jet b(ExtReal(1), {1, 1});
  EXPECT_THROW(jet_mul(a, b), ContractError);
  EXPECT_THROW(jet_add(a, b), ContractError);
  EXPECT_THROW(jet_div(a, b), ContractError);
}

TEST(JetDiv, Examples) {
  expect_coeffs(jet_div(J({1, 0, 0}), J({1, 1, 0})), {1, -1, 1});
  expect_coeffs(jet_div(J({1, 1, 0, 0}), J({1, 1, 0, 0})), {1, 0, 0, 0});
  expect_coeffs(jet_div(J({0, 1, 0, 0}), J({1, 0, 1, 0})), {0, 1, 0, -1});
}

TEST(JetDiv, ZeroConstantTermIsAnError) { EXPECT_THROW(jet_div(J({1, 1}), J({0, 1})), RangeError); }

TEST(JetExp, Examples) {
  expect_coeffs(jet_exp(J({0, 1, 0})), {1, 1, R("0.5")});
  expect_coeffs(jet_exp(J({0, 0, 0, 0})), {1, 0, 0, 0});
  const ExtReal tol = ldexp(ExtReal(1), -250);
  expect_coeffs(jet_exp(Jet(ExtReal(0), {log(ExtReal(2)), ExtReal(1)})), {2, 2}, tol);
}

TEST(JetEval, Examples) {
  EXPECT_EQ(jet_eval(J({1, -1, 1}), ExtReal(0)), ExtReal(1));
  EXPECT_EQ(jet_eval(J({0, 1}), R("0.5")), R("0.5"));
  EXPECT_EQ(jet_eval(J({1, 2, 3}), ExtReal(2)), ExtReal(17));
}

TEST(JetDerivative, ShiftsAndScales) {
  const Jet d = jet_derivative(J({5, 1, 2, 3}));
  expect_coeffs(d, {1, 4, 9});
  EXPECT_EQ(J({5, 1, 2, 3}).derivative_value(3), ExtReal(18));
}

TEST(JetProperties, MulCommutesAndAssociates) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const int order = 1 + it % 10;
    const RandomJets r = random_jets(rng, order);
    const Jet ab = jet_mul(r.a, r.b);
    const Jet ba = jet_mul(r.b, r.a);
    for (int k = 0; k <= order; ++k) EXPECT_EQ(ab[k], ba[k]);
    const Jet left = jet_mul(ab, r.c);
    const Jet right = jet_mul(r.a, jet_mul(r.b, r.c));
    for (int k = 0; k <= order; ++k) {
      ExtReal scale;
      for (int i = 0; i <= k; ++i)
        for (int j = 0; i + j <= k; ++j) scale += abs(r.a[i]) * abs(r.b[j]) * abs(r.c[k - i - j]);
      EXPECT_LE(ulps_of_scale(left[k], right[k], scale), ExtReal(4)) << it << " k=" << k;
    }
  }
}

TEST(JetProperties, DivThenMulRoundTrips) {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 1000; ++it) {
    const int order = 1 + it % 12;
    const RandomJets r = random_jets(rng, order);
    const Jet q = jet_div(r.a, r.b);
    const Jet back = jet_mul(q, r.b);
    for (int k = 0; k <= order; ++k)
      ASSERT_LE(ulps_of_scale(back[k], r.a[k], cauchy_scale(q, r.b, k)), ExtReal(4)) << it << " k=" << k;
  }
}

TEST(JetProperties, ExpIsAdditive) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 1000; ++it) {
    const int order = 1 + it % 12;
    const RandomJets r = random_jets(rng, order);
    const Jet ea = jet_exp(r.a);
    const Jet ec = jet_exp(r.c);
    const Jet lhs = jet_exp(jet_add(r.a, r.c));
    const Jet rhs = jet_mul(ea, ec);
    for (int k = 0; k <= order; ++k)
      ASSERT_LE(ulps_of_scale(lhs[k], rhs[k], cauchy_scale(ea, ec, k)), ExtReal(8)) << it << " k=" << k;
  }
}

TEST(JetProperties, EvalMatchesFunctionNearCenter) {
  // exp(t) around 0, order 40, at t = 1/2
  const Jet e = jet_exp(Jet::identity(ExtReal(0), 40));
  EXPECT_TRUE(meanflow::testing::rel_close(jet_eval(e, R("0.5")), exp(R("0.5")), ExtReal("1e-60")));
}
