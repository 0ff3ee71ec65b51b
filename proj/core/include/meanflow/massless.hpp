#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meanflow/ansatz.hpp"
#include "meanflow/ext_real.hpp"
#include "meanflow/jet.hpp"

namespace meanflow {

// 1 / (16 pi^2)
ExtReal loop_constant();

struct MasslessModel {
  int N = 1;
  ExtReal c02;
  ExtReal c04;
  ExtReal mu_max = ExtReal(1);  // ln(1/alpha0)
  bool large_n = false;         // bare quartic is c04 / N
};

struct BoundaryValues {
  ExtReal f2_0;
  ExtReal f4_0;
};

BoundaryValues boundary_values(const MasslessModel& model);

// Coefficients f_{2,k} and g_{n,k} at mu = 0, where f_n = mu^{n/2-2} g_n.
// Shared by the massless and the massive (tilded) recursions.
class TaylorTable {
 public:
  TaylorTable(int N, int n_max, int k_max);

  int N() const { return N_; }
  int n_max() const { return n_max_; }
  int k_max() const { return k_max_; }

  // Whether (n, k) lies on the computable triangle.
  bool in_triangle(int n, int k) const;
  // Largest k with g_{n,k} stored, or -1.
  int k_limit(int n) const;

  std::optional<ExtReal> find(int n, int k) const;
  // Throws std::out_of_range outside the triangle.
  const ExtReal& g(int n, int k) const;
  void set_g(int n, int k, ExtReal v);

  const std::vector<ExtReal>& f2() const { return f2_; }
  void push_f2(ExtReal v) { f2_.push_back(std::move(v)); }

 private:
  int N_;
  int n_max_;
  int k_max_;
  std::vector<ExtReal> f2_;
  std::vector<std::vector<ExtReal>> g_;  // g_[n/2-2][k]
};

// Wavefront fill of the massless coefficient triangle.
TaylorTable fill_taylor_table(const ExtReal& f2_0, const ExtReal& f4_0, int N, int n_max, int k_max);

// Smallest even n_max for which the table provides f_{2,k_top}.
int n_max_for_f2_index(int k_top);

// Residuals of the regularity seeds, relative to the largest term in each identity.
struct SeedResiduals {
  ExtReal order0;
  ExtReal order1;
};
SeedResiduals seed_residuals(const TaylorTable& table, const ExtReal& f2_0);

struct MomentTower {
  ExtReal center;
  int n_max = 2;
  std::map<int, Jet> jets;
  const Jet& at(int n) const;
};

MomentTower tower_jets(const Jet& f2, int N, int n_max);

struct ScanRow {
  ExtReal mu_max;
  int n = 2;
  ExtReal value;
};

struct UvScanOptions {
  int n_report = 12;
  int initial_depth = 24;
  int max_depth = 192;
  // Per-coefficient tail bound relative to the coefficient itself.
  ExtReal rel_tol = ExtReal(1e-12);
};

struct UvScanResult {
  std::vector<ScanRow> rows;
  AnsatzCoefficients b;
  int depth = 0;  // number of ansatz coefficients used
};

// Builds the ansatz from the table once (bare values fixed) and evaluates f_n(mu_max) on the grid.
// The table depth grows until the ansatz tail is controlled at every grid point.
UvScanResult uv_scan(int N, const ExtReal& f2_0, const ExtReal& f4_0, const std::vector<ExtReal>& grid,
                     const UvScanOptions& options = {});

// Shared by the massless and massive scans: grows the coefficient count until the ansatz
// tail is below rel_tol at every grid point and |b_n| 2^n / n^2 has peaked.
template <class BuildF2>
AnsatzCoefficients adaptive_ansatz(BuildF2&& f2_for_depth, const std::vector<ExtReal>& grid, int order,
                                   const UvScanOptions& options, int* depth_used);

bool ansatz_converged(const AnsatzCoefficients& b, const std::vector<ExtReal>& grid, int order,
                      const ExtReal& rel_tol);
std::vector<int> depth_schedule(int initial, int max_depth);

template <class BuildF2>
AnsatzCoefficients adaptive_ansatz(BuildF2&& f2_for_depth, const std::vector<ExtReal>& grid, int order,
                                   const UvScanOptions& options, int* depth_used) {
  for (int depth : depth_schedule(options.initial_depth, options.max_depth)) {
    std::vector<ExtReal> f2k = f2_for_depth(depth);
    AnsatzCoefficients b = b_from_f2(f2k, depth);
    if (ansatz_converged(b, grid, order, options.rel_tol)) {
      if (depth_used) *depth_used = depth;
      return b;
    }
  }
  throw InsufficientCoefficients("ansatz tail not controlled up to depth " + std::to_string(options.max_depth));
}

}  // namespace meanflow
