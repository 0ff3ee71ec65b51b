#include "meanflow/bounds.hpp"
#include "meanflow/massive.hpp"
#include "support.hpp"

using namespace meanflow;
using meanflow::testing::R;
using meanflow::testing::rel_close;

namespace {

void expect_all_pass(const std::vector<BoundReport>& reports, const char* what) {
  EXPECT_FALSE(reports.empty()) << what;
  int shown = 0;
  for (const auto& r : reports)
    if (!r.pass && shown++ < 5) ADD_FAILURE() << what << ": " << r.target << " " << r.params_text() << " lhs " << r.lhs.str(8) << " rhs " << r.rhs.str(8) << " " << r.note;
}

}  // namespace

TEST(Reports, MarginSemantics) {
  const BoundReport lin = linear_report("t", {}, ExtReal(1), ExtReal(3));
  EXPECT_EQ(lin.margin, ExtReal(2));
  EXPECT_TRUE(lin.pass);
  const BoundReport lg = log_report("t", {}, ExtReal(0), log(ExtReal(5)));
  EXPECT_TRUE(lg.pass);
  EXPECT_TRUE(rel_close(lg.margin, ExtReal(5), R("1e-70")));
  const BoundReport bad = log_report("t", {}, ExtReal(6), log(ExtReal(5)));
  EXPECT_FALSE(bad.pass);
  EXPECT_LT(bad.margin, ExtReal(0));
  const BoundReport eq = identity_report("t", {}, ExtReal(4), ExtReal(4));
  EXPECT_TRUE(eq.pass);
  EXPECT_EQ(eq.margin.sign(), 0);
  EXPECT_FALSE(identity_report("t", {}, ExtReal(4), ExtReal(5)).pass);
}

TEST(Reports, SortIsByTargetThenParams) {
  std::vector<BoundReport> v = {linear_report("b", {{"n", "1"}}, 0, 1), linear_report("a", {{"n", "2"}}, 0, 1),
                                linear_report("a", {{"n", "1"}}, 0, 1)};
  sort_reports(v);
  EXPECT_EQ(v[0].target + v[0].params_text(), "an=1");
  EXPECT_EQ(v[1].target + v[1].params_text(), "an=2");
  EXPECT_EQ(v[2].target, "b");
}

TEST(BinomialIdentity, Examples) {
  const BoundReport r = check_eq54(1, 1, 2);
  EXPECT_EQ(r.lhs, ExtReal(10));
  EXPECT_EQ(r.rhs, ExtReal(10));
  EXPECT_TRUE(r.pass);
  for (int m = 0; m <= 6; ++m) EXPECT_EQ(check_eq54(0, 0, m).lhs, ExtReal(m + 1));
}

TEST(BinomialIdentity, Exhaustive) {
  const auto all = eq54_exhaustive(12);
  EXPECT_EQ(all.size(), 13u * 13u * 13u);
  expect_all_pass(all, "eq54");
}

TEST(RationalTailSum, SmallestCase) {
  const BoundReport r = check_eq194(12);
  EXPECT_TRUE(rel_close(r.lhs, R("2.54e-3"), R("0.01")));
  EXPECT_TRUE(rel_close(r.rhs, ExtReal(1) / ExtReal(144), R("1e-70")));
  EXPECT_GT(r.margin, ExtReal(0));
  EXPECT_THROW(check_eq194(10), PreconditionError);
}

TEST(RationalTailSum, EvenRange) {
  const auto all = eq194_range(12, 400);
  EXPECT_EQ(all.size(), 195u);
  expect_all_pass(all, "eq194");
  for (const auto& r : all) EXPECT_GT(r.margin, ExtReal(0));
}

TEST(QuotientDerivative, MatchesGeneralFormula) {
  for (int order : {1, 4, 8})
    for (std::uint64_t seed : {1u, 2u}) EXPECT_TRUE(check_eq195(order, seed).pass) << order << " " << seed;
}

TEST(PairProductBound, RandomHypothesisRespectingSample) {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> nd(2, 20), kd(0, 40);
  int checked = 0;
  while (checked < 1000) {
    const int n1 = 2 * nd(rng), n2 = 2 * nd(rng), k = kd(rng);
    std::uniform_int_distribution<int> ad(0, k + 2);
    const int a = ad(rng);
    std::uniform_int_distribution<int> bd(0, k + 2 - a);
    const int b = bd(rng);
    if (4 * (3 - a) > n1 || 4 * (3 - b) > n2) {
      EXPECT_THROW(check_lemma33(n1, n2, k, a, b), PreconditionError);
      continue;
    }
    const BoundReport r = check_lemma33(n1, n2, k, a, b);
    ASSERT_GT(r.lhs, ExtReal(0)) << r.params_text();
    ASSERT_TRUE(r.pass) << r.params_text() << " " << r.lhs.str(8) << " " << r.rhs.str(8);
    ++checked;
  }
}

TEST(PairProductBound, HypothesisViolationsAreNotFailures) {
  EXPECT_THROW(check_lemma33(4, 4, 2, 3, 2), PreconditionError);  // a + b > k + 2
  EXPECT_THROW(check_lemma33(4, 8, 5, 1, 1), PreconditionError);  // 3 - n1/4 > a
  EXPECT_THROW(check_lemma33(3, 8, 5, 2, 2), PreconditionError);
}

TEST(InterpolatedPairBound, Sample) {
  for (const char* l : {"0.1", "0.25", "0.5", "0.9"})
    for (int k = 0; k <= 20; k += 4) {
      const BoundReport r = check_lemma34(12, 16, k, 1, R(l));
      EXPECT_TRUE(r.pass) << l << " " << k;
    }
  EXPECT_THROW(check_lemma34(12, 12, 4, 1, ExtReal(1)), PreconditionError);
  EXPECT_THROW(check_lemma34(12, 12, 2, 3, R("0.5")), PreconditionError);
}

TEST(Combinatorics, Dispatch) {
  EXPECT_TRUE(check_combinatorics("eq54", {{"a", "2"}, {"r", "3"}, {"m", "4"}}).pass);
  EXPECT_TRUE(check_combinatorics("eq194", {{"n", "20"}}).pass);
  EXPECT_THROW(check_combinatorics("eq54", {{"a", "2"}}), PreconditionError);
  EXPECT_THROW(check_combinatorics("nope", {}), PreconditionError);
}

TEST(CoefficientGrowth, ZeroTablePassesWithMarginRhs) {
  // g40 = 0 still needs a nonzero seed check; the zero table passes everywhere
  const TaylorTable t = fill_taylor_table(ExtReal(0), ExtReal(0), 1, 12, 8);
  const auto reports = check_coefficient_growth(t, GrowthRegime::Massless, ExtReal(25));
  expect_all_pass(reports, "zero table");
  for (const auto& r : reports) EXPECT_EQ(r.margin, r.rhs) << r.target;
}

TEST(CoefficientGrowth, ReferenceRunSelectsK) {
  const TaylorTable t = fill_taylor_table(R("0.1"), R("0.01"), 1, 40, 40);
  EXPECT_EQ(seed_floor_K(t, GrowthRegime::Massless), ExtReal(25));
  const KSelection sel = select_K(t, GrowthRegime::Massless);
  expect_all_pass(sel.reports, "reference growth");
  EXPECT_GE(sel.K, ExtReal(25));
}

TEST(CoefficientGrowth, SeedConditionViolation) {
  const TaylorTable t = fill_taylor_table(ExtReal(3), R("0.01"), 1, 12, 8);
  EXPECT_THROW(check_coefficient_growth(t, GrowthRegime::Massless, ExtReal(25)), PreconditionError);
  EXPECT_EQ(seed_floor_K(t, GrowthRegime::Massless), ExtReal(2304));
}

TEST(CoefficientGrowth, LargeNWeightedBound) {
  for (int N : {1, 2, 4, 8}) {
    const BoundaryValues bv = boundary_values(MasslessModel{N, ExtReal(0), R("0.01"), ExtReal(1), true});
    const TaylorTable t = fill_taylor_table(bv.f2_0, bv.f4_0, N, 24, 24);
    const KSelection sel = select_K(t, GrowthRegime::LargeN);
    expect_all_pass(sel.reports, "largeN");
  }
}

TEST(CoefficientGrowth, MassiveTable) {
  const HKernel k(R("0.1"));
  const TaylorTable t = massive_taylor_table(R("0.05"), R("0.005"), k, 16, 16);
  const KSelection sel = select_K(t, GrowthRegime::Massive);
  expect_all_pass(sel.reports, "massive");
}

TEST(AnsatzConstants, Values) {
  const ExtReal C = c_constant(1, ExtReal(25));
  EXPECT_GE(C, ExtReal("1.05") * c_tilde(1, ExtReal(25)));
  EXPECT_GE(C, ExtReal("1.05") * ExtReal(5) / ExtReal(2));
  const DerivativeConstants d = derivative_constants(ExtReal(25));
  EXPECT_EQ(d.K1, ExtReal(25) * d.C1);
  EXPECT_EQ(d.K2, ExtReal(2) * d.K1);
}

TEST(AnsatzConstants, SummableTail) {
  const Summability s = c_nN_summability(1, ExtReal(2));
  EXPECT_GE(s.n0, 200);
  EXPECT_LE(s.tail, R("1e-30"));
}

TEST(BnDecay, ZeroCoefficients) {
  const AnsatzCoefficients b(std::vector<ExtReal>(10, ExtReal(0)));
  expect_all_pass(check_bn_decay(b, 1, ExtReal(25)), "zero b");
}

TEST(DerivativeBounds, BuildingBlocks) {
  expect_all_pass(check_pn_bounds(12, 5, {R("0.1"), R("0.5"), ExtReal(1), ExtReal(5), ExtReal(20)}), "p_n");
}

TEST(Suite, ReferenceRun) {
  const BoundSuite s = massless_bound_suite(R("0.1"), R("0.01"));
  expect_all_pass(s.reports, "suite");
  EXPECT_EQ(s.K, ExtReal(25));
  bool has[5] = {};
  for (const auto& r : s.reports) {
    has[0] |= r.target.rfind("massless_", 0) == 0;
    has[1] |= r.target == "prop33_bn";
    has[2] |= r.target == "prop37";
    has[3] |= r.target.rfind("prop38", 0) == 0;
    has[4] |= r.target.rfind("prop36", 0) == 0;
  }
  for (bool h : has) EXPECT_TRUE(h);
}

TEST(HFamily, AllBetasPass) {
  for (const char* b : {"1e-2", "1e-4", "0.5"}) {
    const HKernel k(R(b));
    std::vector<ExtReal> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(k.mu_max_tilde() * ExtReal(i) / ExtReal(49));
    expect_all_pass(check_H_family(k, 8, grid), b);
  }
  EXPECT_THROW(check_H_family(HKernel(R("0.5")), 9, {ExtReal(0)}), PreconditionError);
  EXPECT_THROW(check_H_family(HKernel(R("0.5")), 2, {ExtReal(3)}), PreconditionError);
}

TEST(Stability, MarginsSurviveDoubledPrecision) {
  const ExtReal drift = margin_drift([] {
    const TaylorTable t = fill_taylor_table(ExtReal("0.1"), ExtReal("0.01"), 1, 24, 24);
    auto r = check_coefficient_growth(t, GrowthRegime::Massless, ExtReal(25));
    auto e = eq194_range(12, 60);
    r.insert(r.end(), e.begin(), e.end());
    return r;
  });
  EXPECT_LT(drift, R("1e-10"));
}
