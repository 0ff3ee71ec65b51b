#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "meanflow/ansatz.hpp"
#include "meanflow/ext_real.hpp"
#include "meanflow/jet.hpp"
#include "meanflow/massless.hpp"

namespace meanflow {

enum class PropagatorVariant { MasslessCutoff, Massive };

// Regularized momentum-space propagator at squared momentum p2 and flow parameter alpha.
ExtReal propagator_value(const ExtReal& p2, const ExtReal& m, const ExtReal& alpha0, const ExtReal& alpha,
                         PropagatorVariant variant);

// h = 2 c beta int_0^inf u^3 e^{-u^2} / (u^2 + beta) du, by adaptive quadrature.
ExtReal h_value(const ExtReal& beta, const ExtReal& rel_tol = ExtReal(1e-25));

// Massive model in units m = 1, so alpha0 = beta0.
struct MassiveModel {
  ExtReal beta0;
  ExtReal c02;
  ExtReal c04;

  MassiveModel(ExtReal beta0_, ExtReal c02_, ExtReal c04_);
  ExtReal mu_max_tilde() const;  // ln(1 + 1/beta0)
};

// Flow kernel H(mu) = c(1+beta0) - c beta0 e^mu + h(beta0 e^mu).
class HKernel {
 public:
  explicit HKernel(ExtReal beta0);
  HKernel(const HKernel& o);

  const ExtReal& beta0() const { return beta0_; }
  ExtReal mu_max_tilde() const;
  // Quadrature value of h at beta0 e^mu0, cached per center.
  ExtReal h_at(const ExtReal& mu0) const;

 private:
  ExtReal beta0_;
  mutable std::mutex mu_;
  mutable std::map<std::string, ExtReal> cache_;
};

struct HJets {
  Jet h;
  Jet H;
  Jet log_h_prime;  // jet of d/dmu log H
};

// Jets of h, H and (log H)' at mu0, all of the requested order.
HJets H_jet(const HKernel& kernel, const ExtReal& mu0, int order);

BoundaryValues massive_boundary(const MassiveModel& model, const HKernel& kernel);

// Tilded coefficient triangle (N = 1). hk[k] are the Taylor coefficients of (log H)' at 0.
TaylorTable massive_taylor_table(const ExtReal& f2t_0, const ExtReal& f4t_0, const HKernel& kernel, int n_max,
                                 int k_max);

MomentTower massive_tower_jets(const Jet& f2t, const HKernel& kernel, int n_max);

struct MassiveScanRow {
  ExtReal mu_max_tilde;
  ExtReal beta0;
  int n = 2;
  ExtReal value;
};

struct MassiveScanResult {
  std::vector<MassiveScanRow> rows;
  std::vector<int> depths;
  std::vector<ExtReal> sums;  // sum_n b_n / n per grid point
};

// For each mu_max_tilde: beta0 = 1/(e^mu - 1), rebuild kernel and table, evaluate the tower at mu_max_tilde.
// Boundary values held fixed across the grid.
MassiveScanResult massive_uv_scan(const BoundaryValues& fixed, const std::vector<ExtReal>& grid,
                                  const UvScanOptions& options = {});
// Bare couplings held fixed; boundary values follow beta0 at each grid point.
MassiveScanResult massive_uv_scan_couplings(const ExtReal& c02, const ExtReal& c04, const std::vector<ExtReal>& grid,
                                            const UvScanOptions& options = {});

}  // namespace meanflow
