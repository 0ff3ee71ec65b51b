#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "meanflow/report.hpp"

namespace meanflow {

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

using Index = std::vector<int>;  // 0-based components

// Dense rank-r tensor over {0..N-1}^r with exact rational entries. Slot 0 is the most significant digit.
class SymTensor {
 public:
  SymTensor(int N, int rank);

  int N() const { return N_; }
  int rank() const { return rank_; }
  std::size_t size() const { return entries_.size(); }

  const mpq_class& at(const Index& idx) const { return entries_[flat(idx)]; }
  mpq_class& at(const Index& idx) { return entries_[flat(idx)]; }
  const mpq_class& at_flat(std::size_t i) const { return entries_[i]; }
  mpq_class& at_flat(std::size_t i) { return entries_[i]; }

  std::size_t flat(const Index& idx) const;
  Index unflat(std::size_t i) const;

  // Exhaustive for rank <= 6; `samples` random transpositions per entry otherwise.
  bool is_symmetric(std::uint64_t seed = 1, int samples = 4) const;

  bool operator==(const SymTensor& o) const = default;

 private:
  int N_;
  int rank_;
  std::vector<mpq_class> entries_;
};

constexpr int kMaxTensorN = 4;
constexpr int kMaxTensorRank = 8;

// Closed form of the symmetrized pairing tensor at one index: prod (m_j - 1)!! / (r - 1)!!
// over component multiplicities m_j, zero when some m_j is odd. No size limit.
mpq_class pairing_entry(int N, const Index& idx);

// F = symmetrized product of Kronecker deltas. Throws CapacityError beyond N <= 4, rank <= 8.
SymTensor build_pairing_tensor(int N, int rank);

// Contraction over the last two slots.
SymTensor trace_last_pair(const SymTensor& t);

// Average over all slot permutations.
SymTensor symmetrize(const SymTensor& t);

// sum_j S[ A_{i_1..i_{n1-1} j} B_{j i_{n1}..i_n} ]: average over the choices of which output slots feed A.
SymTensor symmetrized_contraction(const SymTensor& a, const SymTensor& b);

// Applies the matrix M to every slot: T'_{i..} = sum M_{i1 j1} ... M_{ir jr} T_{j..}.
SymTensor transform_all_slots(const SymTensor& t, const std::vector<std::vector<mpq_class>>& m);

// Reflection through the hyperplane orthogonal to e_k.
std::vector<std::vector<mpq_class>> reflection_matrix(int N, int k);

// Both trace and split identities for output rank `rank`, exact. lhs counts mismatching entries.
BoundReport verify_contraction_identities(int N, int rank);

// sum_j d_j^2 |x|^{2m} evaluated three ways at rational x: per-coordinate derivative,
// closed form 2m(N+2m-2)|x|^{2m-2}, and contraction of trace(F) with x.
struct LaplacianRoutes {
  mpq_class per_coordinate;
  mpq_class closed_form;
  mpq_class tensor;
};
LaplacianRoutes laplacian_power_routes(int N, int m, const std::vector<mpq_class>& x);

// Full contraction of t with x in every slot.
mpq_class contract_with_vector(const SymTensor& t, const std::vector<mpq_class>& x);

// Product of deltas along the given pairing of slots (pairs[2i], pairs[2i+1]).
SymTensor delta_product(int N, const std::vector<int>& pairing);

}  // namespace meanflow
