#include "meanflow/massless.hpp"
#include "support.hpp"

using namespace meanflow;
using meanflow::testing::R;
using meanflow::testing::rel_close;

TEST(BoundaryValues, Examples) {
  MasslessModel free_model{1, ExtReal(0), ExtReal(0), ExtReal(5), false};
  const BoundaryValues z = boundary_values(free_model);
  EXPECT_TRUE(z.f2_0.is_zero());
  EXPECT_TRUE(z.f4_0.is_zero());

  MasslessModel quartic{1, ExtReal(0), ExtReal(1), ExtReal(17), false};
  EXPECT_EQ(boundary_values(quartic).f4_0, ExtReal(4) * pi() * pi());

  MasslessModel mass{1, ExtReal(1), ExtReal(0), log(ExtReal(2)), false};
  EXPECT_TRUE(rel_close(boundary_values(mass).f2_0, pow(ExtReal(2) * pi(), 4L), R("1e-70")));

  MasslessModel largeN{4, ExtReal(0), ExtReal(1), ExtReal(3), true};
  EXPECT_TRUE(rel_close(boundary_values(largeN).f4_0, pi() * pi(), R("1e-70")));
  EXPECT_THROW(boundary_values(MasslessModel{1, ExtReal(0), ExtReal(1), ExtReal(0), false}), std::invalid_argument);
}

TEST(LoopConstant, Value) { EXPECT_TRUE(rel_close(loop_constant() * ExtReal(16) * pi() * pi(), ExtReal(1), R("1e-70"))); }

TEST(TaylorTable, ZeroSeedsGiveZeroTable) {
  const TaylorTable t = fill_taylor_table(ExtReal(0), ExtReal(0), 1, 12, 8);
  for (const auto& f : t.f2()) EXPECT_TRUE(f.is_zero());
  for (int n = 4; n <= 12; n += 2)
    for (int k = 0; k <= t.k_limit(n); ++k) EXPECT_TRUE(t.g(n, k).is_zero());
}

TEST(TaylorTable, HandValues) {
  const ExtReal f20 = R("0.1"), g40 = R("0.01");
  const TaylorTable t = fill_taylor_table(f20, g40, 1, 12, 6);
  // f21 = 3 f40 - f20 (f20 - 1) = 0.03 + 0.09
  EXPECT_TRUE(rel_close(t.f2()[1], R("0.12"), R("1e-70")));
  EXPECT_EQ(t.g(4, 1), ExtReal(-4) * f20 * g40);
  for (int N : {1, 2, 7}) {
    const TaylorTable tn = fill_taylor_table(f20, g40, N, 12, 2);
    EXPECT_TRUE(rel_close(tn.g(6, 0), R("-3e-4"), R("1e-70"))) << N;
    EXPECT_TRUE(rel_close(tn.g(8, 0), R("1.2e-5"), R("1e-70"))) << N;
  }
}

TEST(TaylorTable, TriangleShape) {
  const TaylorTable t = fill_taylor_table(R("0.1"), R("0.01"), 1, 10, 10);
  EXPECT_TRUE(t.in_triangle(10, 1));
  EXPECT_TRUE(t.in_triangle(8, 2));
  EXPECT_FALSE(t.in_triangle(10, 2));
  EXPECT_TRUE(t.in_triangle(4, 7));
  EXPECT_FALSE(t.in_triangle(4, 8));
  EXPECT_FALSE(t.find(10, 2).has_value());
  EXPECT_TRUE(t.find(8, 3).has_value());
  EXPECT_THROW(t.g(10, 2), std::out_of_range);
  EXPECT_THROW(fill_taylor_table(ExtReal(0), ExtReal(0), 1, 5, 3), std::invalid_argument);
}

TEST(TaylorTable, SeedIdentitiesHold) {
  for (int N : {1, 3}) {
    const TaylorTable t = fill_taylor_table(R("0.1"), R("0.01"), N, 40, 4);
    const SeedResiduals r = seed_residuals(t, R("0.1"));
    EXPECT_LE(r.order0, ldexp(ExtReal(1), -128));
    EXPECT_LE(r.order1, ldexp(ExtReal(1), -128));
  }
}

TEST(TowerJets, SecondMomentFromFlow) {
  // f4 = f2^2/3 - f2/3 + f2'/3 for N = 1
  const Jet f2(ExtReal(1), {R("0.3"), R("-0.2"), R("0.7"), R("0.11")});
  const MomentTower tw = tower_jets(f2, 1, 4);
  const Jet& f4 = tw.at(4);
  ASSERT_EQ(f4.order(), 2);
  const Jet want = jet_scale(
      jet_add(jet_sub(jet_mul(f2.truncated(2), f2.truncated(2)), f2.truncated(2)), jet_derivative(f2)),
      ExtReal(1) / ExtReal(3));
  for (int k = 0; k <= 2; ++k) EXPECT_TRUE(rel_close(f4[k], want[k], R("1e-70"))) << k;
}

TEST(TowerJets, EachLevelLosesOneOrder) {
  const Jet f2 = Jet::constant(ExtReal(0), R("0.1"), 9);
  const MomentTower tw = tower_jets(f2, 2, 12);
  for (int n = 2; n + 2 <= 12; n += 2) EXPECT_EQ(tw.at(n + 2).order(), tw.at(n).order() - 1);
  EXPECT_THROW(tower_jets(Jet::constant(ExtReal(0), R("0.1"), 3), 1, 12), ContractError);
  EXPECT_THROW(tw.at(14), std::out_of_range);
}

TEST(TowerJets, RegularityAtOrigin) {
  // Built from the table's f2 series, f_n vanishes to order n/2 - 3 at mu = 0.
  const TaylorTable t = fill_taylor_table(R("0.1"), R("0.01"), 1, 24, 24);
  const Jet f2(ExtReal(0), t.f2());
  const MomentTower tw = tower_jets(f2, 1, 16);
  for (int n = 6; n <= 16; n += 2) {
    const Jet& fn = tw.at(n);
    const ExtReal scale = abs(fn[static_cast<std::size_t>(n / 2 - 2)]);
    ASSERT_FALSE(scale.is_zero());
    for (int k = 0; k <= n / 2 - 3; ++k) EXPECT_LE(abs(fn[static_cast<std::size_t>(k)]), R("1e-30") * scale) << n << "," << k;
  }
}

TEST(TowerJets, AgreesWithTableThroughTheAnsatz) {
  for (int N : {1, 2, 4}) {
    const TaylorTable t = fill_taylor_table(R("0.1"), R("0.01"), N, 24, 24);
    const int M = static_cast<int>(t.f2().size());
    ASSERT_GE(M, 22);
    const AnsatzCoefficients b = b_from_f2(t.f2(), M);
    const Jet f2 = f2_jet(b, ExtReal(0), M - 1, R("1e-60"));
    const MomentTower tw = tower_jets(f2, N, 24);
    int cells = 0;
    for (int n = 4; n <= 24; n += 2)
      for (int k = 0; n + k <= 24 && k <= t.k_limit(n); ++k) {
        const Jet& fn = tw.at(n);
        const int idx = n / 2 - 2 + k;
        ASSERT_LE(idx, fn.order()) << n << "," << k;
        EXPECT_TRUE(rel_close(fn[static_cast<std::size_t>(idx)], t.g(n, k), R("1e-20"))) << "N=" << N << " " << n << "," << k;
        ++cells;
      }
    EXPECT_GT(cells, 60);
  }
}

TEST(UvScan, FreeTheoryStaysZero) {
  const UvScanResult r = uv_scan(1, ExtReal(0), ExtReal(0), {ExtReal(10), ExtReal(100)});
  for (const auto& row : r.rows) EXPECT_TRUE(row.value.is_zero());
}

TEST(UvScan, QuarticCouplingDecreasesAndMatchesLimit) {
  const BoundaryValues bv = boundary_values(MasslessModel{1, ExtReal(0), ExtReal(1), ExtReal(1), false});
  const std::vector<ExtReal> grid = {ExtReal(10), ExtReal(100), ExtReal(1000), ExtReal(10000)};
  const UvScanResult r = uv_scan(1, bv.f2_0, bv.f4_0, grid);
  std::vector<ExtReal> f2, f4;
  for (const auto& row : r.rows) {
    if (row.n == 2) f2.push_back(abs(row.value));
    if (row.n == 4) f4.push_back(abs(row.value));
  }
  ASSERT_EQ(f4.size(), grid.size());
  for (std::size_t i = 1; i < f4.size(); ++i) {
    EXPECT_LT(f4[i], f4[i - 1]);
    EXPECT_LT(f2[i], f2[i - 1]);
  }
  ExtReal limit;
  for (int n = 1; n <= r.b.size(); ++n) limit += r.b.b(n) / ExtReal(n);
  EXPECT_TRUE(rel_close(ExtReal(10000) * f2.back(), abs(limit), R("0.01")));
}

TEST(DepthSchedule, EndsAtMaximum) {
  const auto d = depth_schedule(24, 192);
  EXPECT_EQ(d.front(), 24);
  EXPECT_EQ(d.back(), 192);
  for (std::size_t i = 1; i < d.size(); ++i) EXPECT_GT(d[i], d[i - 1]);
}
