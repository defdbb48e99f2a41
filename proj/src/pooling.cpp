#include "poolbp/pooling.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "poolbp/errors.hpp"
#include "poolbp/field.hpp"
#include "poolbp/geometry.hpp"

namespace poolbp {

namespace {

__extension__ typedef unsigned __int128 u128;

PlaneSet normalized(const PlaneSet& planes, std::uint32_t q, const char* name) {
  PlaneSet s = planes;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw ValidationError(std::string("plane set ") + name + " repeats an index");
  }
  if (!s.empty() && s.back() >= q) {
    throw ValidationError(std::string("plane set ") + name + " has index " +
                          std::to_string(s.back()) + " >= q = " + std::to_string(q));
  }
  return s;
}

bool intersects(const PlaneSet& a, const PlaneSet& b) {
  for (auto x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

IncidenceMatrix stack_or_empty(std::uint32_t q, const PlaneSet& planes) {
  if (planes.empty()) return IncidenceMatrix(0, static_cast<std::size_t>(q) * q * q * q, {});
  return stack_planes(q, planes);
}

// Dense bitset over the rows of a matrix, one per column support.
class RowBits {
 public:
  explicit RowBits(std::size_t n_rows) : words_((n_rows + 63) / 64, 0) {}
  void set(std::size_t r) { words_[r / 64] |= std::uint64_t{1} << (r % 64); }
  void unite(const RowBits& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
  }
  bool covers(const RowBits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if ((o.words_[w] & ~words_[w]) != 0) return false;
    }
    return true;
  }
  bool meets(const RowBits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if ((o.words_[w] & words_[w]) != 0) return true;
    }
    return false;
  }
  friend bool operator==(const RowBits&, const RowBits&) = default;

  std::size_t hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : words_) h = (h ^ w) * 0xbf58476d1ce4e5b9ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct RowBitsHash {
  std::size_t operator()(const RowBits& b) const noexcept { return b.hash(); }
};

std::vector<RowBits> supports_as_bits(const IncidenceMatrix& m) {
  std::vector<RowBits> bits(m.n_cols(), RowBits(m.n_rows()));
  for (std::size_t j = 0; j < m.n_cols(); ++j) {
    for (Index r : m.col(j)) bits[j].set(r);
  }
  return bits;
}

// Is there a choice of at most `depth` columns from candidates[from..] whose
// union together with `acc` covers `target`?
bool coverable(const std::vector<RowBits>& bits, const std::vector<Index>& candidates,
               std::size_t from, std::uint32_t depth, const RowBits& acc, const RowBits& target) {
  if (acc.covers(target)) return true;
  if (depth == 0) return false;
  for (std::size_t i = from; i < candidates.size(); ++i) {
    RowBits next = acc;
    next.unite(bits[candidates[i]]);
    if (coverable(bits, candidates, i + 1, depth - 1, next, target)) return true;
  }
  return false;
}

void require_budget(std::uint64_t work, WorkBudget budget, const char* what) {
  if (work > budget.max_work) {
    throw BudgetExceeded(std::string(what) + " needs " +
                         (work == kWorkSaturated ? std::string("more than 2^64") : std::to_string(work)) +
                         " steps, budget is " + std::to_string(budget.max_work));
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kWorkSaturated / a) return kWorkSaturated;
  return a * b;
}

}  // namespace

void PoolingDesign::validate() const {
  if (m_b.n_cols() != m_a.n_cols() || m_ab.n_cols() != m_a.n_cols()) {
    throw ValidationError("M_A, M_B and M_AB must have the same number of items");
  }
  if (provenance) {
    if (intersects(provenance->k_a, provenance->k_ab)) {
      throw ValidationError("K_A and K_AB share a plane");
    }
    if (intersects(provenance->k_b, provenance->k_ab)) {
      throw ValidationError("K_B and K_AB share a plane");
    }
  }
}

IncidenceMatrix stack_planes(std::uint32_t q, const PlaneSet& planes) {
  if (!is_prime(q)) throw ValidationError("q = " + std::to_string(q) + " is not prime");
  if (planes.empty()) throw ValidationError("cannot stack an empty plane set");
  const PlaneSet sorted = normalized(planes, q, "K");
  IncidenceMatrix result = plane_incidence(q, sorted.front());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    result = IncidenceMatrix::vstack(result, plane_incidence(q, sorted[i]));
  }
  return result;
}

PoolingDesign build_design(std::uint32_t q, const PlaneSet& k_a, const PlaneSet& k_b,
                           const PlaneSet& k_ab) {
  if (!is_prime(q)) throw ValidationError("q = " + std::to_string(q) + " is not prime");
  PlaneProvenance prov{q, normalized(k_a, q, "K_A"), normalized(k_b, q, "K_B"),
                       normalized(k_ab, q, "K_AB")};
  if (intersects(prov.k_a, prov.k_ab)) throw ValidationError("K_A and K_AB share a plane");
  if (intersects(prov.k_b, prov.k_ab)) throw ValidationError("K_B and K_AB share a plane");
  PoolingDesign design{stack_or_empty(q, prov.k_a), stack_or_empty(q, prov.k_b),
                       stack_or_empty(q, prov.k_ab), std::move(prov)};
  design.validate();
  return design;
}

PoolingDesign build_split_design(std::uint32_t q, std::uint32_t k) {
  if (k > q) throw ValidationError("k must not exceed q");
  PlaneSet individual;
  PlaneSet joint;
  for (std::uint32_t i = 0; i < q; ++i) (i < k ? individual : joint).push_back(i);
  return build_design(q, individual, individual, joint);
}

CollinearityReport unique_collinearity_check(const IncidenceMatrix& m) {
  // seen[r] == i + 1 once row r has been found to share a column with row i.
  std::vector<std::size_t> seen(m.n_rows(), 0);
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    for (Index j : m.row(i)) {
      for (Index r : m.col(j)) {
        if (r <= i) continue;
        if (seen[r] == i + 1) {
          return {false, std::make_pair(static_cast<Index>(i), r)};
        }
        seen[r] = i + 1;
      }
    }
  }
  return {};
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // Exact while it fits; C(n, i) * (n - i) stays divisible by i + 1.
  u128 acc = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    acc = acc * (n - i) / (i + 1);
    if (acc > kWorkSaturated) return kWorkSaturated;
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t disjunct_work(const IncidenceMatrix& m, std::uint32_t d) {
  return saturating_mul(binomial(m.n_cols(), d), m.n_cols());
}

std::uint64_t separable_work(const IncidenceMatrix& m, std::uint32_t d) {
  std::uint64_t total = 0;
  for (std::uint32_t i = 0; i <= d && i <= m.n_cols(); ++i) {
    const std::uint64_t c = binomial(m.n_cols(), i);
    if (c > kWorkSaturated - total) return kWorkSaturated;
    total += c;
  }
  return total;
}

bool is_disjunct(const IncidenceMatrix& m, std::uint32_t d, WorkBudget budget) {
  if (d == 0) throw ValidationError("disjunctness order d must be positive");
  require_budget(disjunct_work(m, d), budget, "d-disjunct check");
  const std::size_t n = m.n_cols();
  if (n == 0) return true;
  const auto depth = static_cast<std::uint32_t>(std::min<std::size_t>(d, n - 1));
  const auto bits = supports_as_bits(m);
  const RowBits none(m.n_rows());
  for (std::size_t t0 = 0; t0 < n; ++t0) {
    // Columns missing T_0 cannot help cover it and only pad the selection.
    std::vector<Index> candidates;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != t0 && bits[j].meets(bits[t0])) candidates.push_back(static_cast<Index>(j));
    }
    if (coverable(bits, candidates, 0, depth, none, bits[t0])) return false;
  }
  return true;
}

bool is_separable_bar(const IncidenceMatrix& m, std::uint32_t d, WorkBudget budget) {
  if (d == 0) throw ValidationError("separability order d must be positive");
  require_budget(separable_work(m, d), budget, "d-bar-separable check");
  const std::size_t n = m.n_cols();
  const auto bits = supports_as_bits(m);
  std::unordered_set<RowBits, RowBitsHash> unions;
  bool distinct = true;

  // Depth-first over subsets in lexicographic order; stops at first clash.
  auto visit = [&](auto&& self, std::size_t from, std::uint32_t left, const RowBits& acc) -> void {
    if (!unions.insert(acc).second) {
      distinct = false;
      return;
    }
    if (left == 0) return;
    for (std::size_t j = from; j < n && distinct; ++j) {
      RowBits next = acc;
      next.unite(bits[j]);
      self(self, j + 1, left - 1, next);
    }
  };
  visit(visit, 0, d, RowBits(m.n_rows()));
  return distinct;
}

bool is_2d_separable(const PoolingDesign& design, std::uint32_t d, WorkBudget budget) {
  if (d == 0) throw ValidationError("separability order d must be positive");
  design.validate();
  if (d >= 2) {
    if (!is_disjunct(design.m_a, d - 1, budget)) return false;
    if (!is_disjunct(design.m_b, d - 1, budget)) return false;
  }
  return is_separable_bar(design.stacked_a(), d, budget) &&
         is_separable_bar(design.stacked_b(), d, budget);
}

}  // namespace poolbp
