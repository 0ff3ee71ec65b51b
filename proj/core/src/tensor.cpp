#include "meanflow/tensor.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace meanflow {

namespace {

void check_capacity(int N, int rank) {
  if (N < 1 || rank < 0) throw std::invalid_argument("tensor: N >= 1 and rank >= 0 required");
  if (N > kMaxTensorN || rank > kMaxTensorRank)
    throw CapacityError("tensor: N=" + std::to_string(N) + " rank=" + std::to_string(rank) +
                        " exceeds the dense limit N<=4, rank<=8");
}

mpz_class double_factorial(int n) {
  mpz_class r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

std::string index_text(const Index& idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(idx[i] + 1);
  }
  return s + ")";
}

// Visits every distinct permutation of a sorted tuple.
template <class F>
void for_each_permutation(Index sorted, F&& f) {
  do {
    f(sorted);
  } while (std::next_permutation(sorted.begin(), sorted.end()));
}

}  // namespace

SymTensor::SymTensor(int N, int rank) : N_(N), rank_(rank) {
  std::size_t n = 1;
  for (int i = 0; i < rank; ++i) n *= static_cast<std::size_t>(N);
  entries_.assign(n, mpq_class(0));
}

std::size_t SymTensor::flat(const Index& idx) const {
  std::size_t f = 0;
  for (int v : idx) f = f * static_cast<std::size_t>(N_) + static_cast<std::size_t>(v);
  return f;
}

Index SymTensor::unflat(std::size_t i) const {
  Index idx(static_cast<std::size_t>(rank_));
  for (int s = rank_ - 1; s >= 0; --s) {
    idx[static_cast<std::size_t>(s)] = static_cast<int>(i % static_cast<std::size_t>(N_));
    i /= static_cast<std::size_t>(N_);
  }
  return idx;
}

bool SymTensor::is_symmetric(std::uint64_t seed, int samples) const {
  if (rank_ < 2) return true;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> slot(0, rank_ - 1);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    Index idx = unflat(i);
    if (rank_ <= 6) {
      Index sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      bool ok = true;
      for_each_permutation(sorted, [&](const Index& p) { ok = ok && at(p) == entries_[i]; });
      if (!ok) return false;
    } else {
      for (int s = 0; s < samples; ++s) {
        Index p = idx;
        std::swap(p[static_cast<std::size_t>(slot(rng))], p[static_cast<std::size_t>(slot(rng))]);
        if (at(p) != entries_[i]) return false;
      }
    }
  }
  return true;
}

mpq_class pairing_entry(int N, const Index& idx) {
  const int r = static_cast<int>(idx.size());
  if (r % 2 != 0) return 0;
  std::vector<int> mult(static_cast<std::size_t>(N), 0);
  for (int v : idx) ++mult.at(static_cast<std::size_t>(v));
  mpz_class num = 1;
  for (int m : mult) {
    if (m % 2 != 0) return 0;
    num *= double_factorial(m - 1);
  }
  mpq_class q(num, double_factorial(r - 1));
  q.canonicalize();
  return q;
}

SymTensor build_pairing_tensor(int N, int rank) {
  check_capacity(N, rank);
  if (rank % 2 != 0) throw std::invalid_argument("build_pairing_tensor: rank must be even");
  SymTensor t(N, rank);
  std::map<Index, mpq_class> memo;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Index key = t.unflat(i);
    std::sort(key.begin(), key.end());
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, pairing_entry(N, key)).first;
    t.at_flat(i) = it->second;
  }
  return t;
}

SymTensor trace_last_pair(const SymTensor& t) {
  if (t.rank() < 2) throw std::invalid_argument("trace_last_pair: rank >= 2 required");
  SymTensor out(t.N(), t.rank() - 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Index idx = out.unflat(i);
    idx.push_back(0);
    idx.push_back(0);
    mpq_class s = 0;
    for (int j = 0; j < t.N(); ++j) {
      idx[idx.size() - 1] = idx[idx.size() - 2] = j;
      s += t.at(idx);
    }
    out.at_flat(i) = s;
  }
  return out;
}

SymTensor symmetrize(const SymTensor& t) {
  SymTensor out(t.N(), t.rank());
  std::map<Index, mpq_class> memo;
  for (std::size_t i = 0; i < out.size(); ++i) {
    Index key = out.unflat(i);
    std::sort(key.begin(), key.end());
    auto it = memo.find(key);
    if (it == memo.end()) {
      mpq_class s = 0;
      long count = 0;
      for_each_permutation(key, [&](const Index& p) {
        s += t.at(p);
        ++count;
      });
      s /= count;
      it = memo.emplace(key, s).first;
    }
    out.at_flat(i) = it->second;
  }
  return out;
}

SymTensor symmetrized_contraction(const SymTensor& a, const SymTensor& b) {
  if (a.N() != b.N()) throw std::invalid_argument("symmetrized_contraction: N mismatch");
  if (a.rank() < 1 || b.rank() < 1) throw std::invalid_argument("symmetrized_contraction: ranks >= 1");
  const int N = a.N();
  const int left = a.rank() - 1;
  const int rank = a.rank() + b.rank() - 2;
  SymTensor out(N, rank);

  // Contraction for fixed slot assignment depends only on the two sorted halves (a and b symmetric).
  std::map<std::pair<Index, Index>, mpq_class> pair_memo;
  auto contracted = [&](Index l, Index r) -> const mpq_class& {
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    auto key = std::make_pair(l, r);
    auto it = pair_memo.find(key);
    if (it != pair_memo.end()) return it->second;
    mpq_class s = 0;
    l.push_back(0);
    r.insert(r.begin(), 0);
    for (int j = 0; j < N; ++j) {
      l.back() = j;
      r.front() = j;
      s += a.at(l) * b.at(r);
    }
    return pair_memo.emplace(std::move(key), s).first->second;
  };

  std::map<Index, mpq_class> memo;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Index idx = out.unflat(i);
    Index key = idx;
    std::sort(key.begin(), key.end());
    auto it = memo.find(key);
    if (it == memo.end()) {
      // Subsets of output slots of size `left`, enumerated by a selection mask.
      std::vector<char> mask(static_cast<std::size_t>(rank), 0);
      std::fill(mask.begin(), mask.begin() + left, 1);
      mpq_class s = 0;
      long count = 0;
      do {
        Index l, r;
        for (int p = 0; p < rank; ++p) (mask[static_cast<std::size_t>(p)] ? l : r).push_back(idx[static_cast<std::size_t>(p)]);
        s += contracted(l, r);
        ++count;
      } while (std::prev_permutation(mask.begin(), mask.end()));
      s /= count;
      it = memo.emplace(key, s).first;
    }
    out.at_flat(i) = it->second;
  }
  return out;
}

SymTensor transform_all_slots(const SymTensor& t, const std::vector<std::vector<mpq_class>>& m) {
  const int N = t.N();
  if (static_cast<int>(m.size()) != N) throw std::invalid_argument("transform_all_slots: matrix size");
  SymTensor cur = t;
  for (int slot = 0; slot < t.rank(); ++slot) {
    SymTensor next(N, t.rank());
    for (std::size_t i = 0; i < next.size(); ++i) {
      Index idx = next.unflat(i);
      const int row = idx[static_cast<std::size_t>(slot)];
      mpq_class s = 0;
      for (int j = 0; j < N; ++j) {
        const mpq_class& mij = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        if (mij == 0) continue;
        idx[static_cast<std::size_t>(slot)] = j;
        s += mij * cur.at(idx);
      }
      next.at_flat(i) = s;
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<std::vector<mpq_class>> reflection_matrix(int N, int k) {
  if (k < 0 || k >= N) throw std::invalid_argument("reflection_matrix: k out of range");
  std::vector<std::vector<mpq_class>> r(static_cast<std::size_t>(N), std::vector<mpq_class>(static_cast<std::size_t>(N), 0));
  for (int i = 0; i < N; ++i) r[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = i == k ? -1 : 1;
  return r;
}

BoundReport verify_contraction_identities(int N, int rank) {
  check_capacity(N, rank);
  if (rank < 2 || rank % 2 != 0) throw std::invalid_argument("verify_contraction_identities: even rank >= 2");
  const SymTensor F = build_pairing_tensor(N, rank);
  long bad = 0;
  std::string first;
  auto flag = [&](const std::string& what, const Index& idx) {
    if (bad++ == 0) first = what + " at " + index_text(idx);
  };

  // Trace identity; the rank+2 tensor may exceed the dense limit, so its entries come from the closed form.
  mpq_class factor(N + rank, rank + 1);
  factor.canonicalize();
  for (std::size_t i = 0; i < F.size(); ++i) {
    Index idx = F.unflat(i);
    const mpq_class expect = factor * F.at_flat(i);
    idx.push_back(0);
    idx.push_back(0);
    mpq_class s = 0;
    for (int j = 0; j < N; ++j) {
      idx[idx.size() - 1] = idx[idx.size() - 2] = j;
      s += pairing_entry(N, idx);
    }
    if (s != expect) flag("trace", F.unflat(i));
  }

  int splits = 0;
  for (int n1 = 2; n1 <= rank; n1 += 2) {
    const int n2 = rank + 2 - n1;
    const SymTensor S = symmetrized_contraction(build_pairing_tensor(N, n1), build_pairing_tensor(N, n2));
    ++splits;
    for (std::size_t i = 0; i < F.size(); ++i)
      if (S.at_flat(i) != F.at_flat(i)) flag("split n1=" + std::to_string(n1), F.unflat(i));
  }
  return linear_report("eq185", {{"N", std::to_string(N)}, {"rank", std::to_string(rank)}}, ExtReal(bad), ExtReal(0),
                       bad ? "first mismatch: " + first : "exact over " + std::to_string(splits) + " splits");
}

mpq_class contract_with_vector(const SymTensor& t, const std::vector<mpq_class>& x) {
  if (static_cast<int>(x.size()) != t.N()) throw std::invalid_argument("contract_with_vector: size");
  mpq_class s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.at_flat(i) == 0) continue;
    mpq_class term = t.at_flat(i);
    for (int v : t.unflat(i)) term *= x[static_cast<std::size_t>(v)];
    s += term;
  }
  return s;
}

LaplacianRoutes laplacian_power_routes(int N, int m, const std::vector<mpq_class>& x) {
  if (m < 1) throw std::invalid_argument("laplacian_power_routes: m >= 1");
  if (static_cast<int>(x.size()) != N) throw std::invalid_argument("laplacian_power_routes: size");
  mpq_class r2 = 0;
  for (const auto& v : x) r2 += v * v;
  auto rpow = [&r2](int e) {
    mpq_class p = 1;
    for (int i = 0; i < e; ++i) p *= r2;
    return p;
  };
  LaplacianRoutes out;
  // d_j^2 (r^2)^m = 2m (r^2)^{m-1} + 4m(m-1) x_j^2 (r^2)^{m-2}
  out.per_coordinate = 0;
  for (const auto& xj : x) {
    out.per_coordinate += 2 * m * rpow(m - 1);
    if (m >= 2) out.per_coordinate += 4 * m * (m - 1) * xj * xj * rpow(m - 2);
  }
  out.closed_form = 2 * m * (N + 2 * m - 2) * rpow(m - 1);
  // |x|^{2m} = F . x^{2m}, so the Laplacian is 2m(2m-1) trace(F) . x^{2m-2}
  const SymTensor trace = trace_last_pair(build_pairing_tensor(N, 2 * m));
  out.tensor = 2 * m * (2 * m - 1) * contract_with_vector(trace, x);
  return out;
}

SymTensor delta_product(int N, const std::vector<int>& pairing) {
  const int rank = static_cast<int>(pairing.size());
  check_capacity(N, rank);
  SymTensor t(N, rank);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Index idx = t.unflat(i);
    bool on = true;
    for (std::size_t p = 0; p + 1 < pairing.size() && on; p += 2)
      on = idx[static_cast<std::size_t>(pairing[p])] == idx[static_cast<std::size_t>(pairing[p + 1])];
    t.at_flat(i) = on ? 1 : 0;
  }
  return t;
}

}  // namespace meanflow
