#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "poolbp/incidence_matrix.hpp"

namespace poolbp {

using PlaneSet = std::vector<std::uint32_t>;

// Which planes of AG(3, q) each pool family was stacked from.
struct PlaneProvenance {
  std::uint32_t q = 0;
  PlaneSet k_a;
  PlaneSet k_b;
  PlaneSet k_ab;
};

/// Three pool families over a common item set: pools that react to type A,
/// to type B, and to either type (AB).
struct PoolingDesign {
  IncidenceMatrix m_a;
  IncidenceMatrix m_b;
  IncidenceMatrix m_ab;
  // Absent for designs read from files.
  std::optional<PlaneProvenance> provenance;

  std::size_t n_items() const noexcept { return m_a.n_cols(); }
  std::size_t n_pools() const noexcept { return m_a.n_rows() + m_b.n_rows() + m_ab.n_rows(); }

  /// Throws ValidationError if the column counts differ, or if provenance is
  /// present and an individual-type plane set meets K_AB.
  void validate() const;

  /// [M_A; M_AB] and [M_B; M_AB].
  IncidenceMatrix stacked_a() const { return IncidenceMatrix::vstack(m_a, m_ab); }
  IncidenceMatrix stacked_b() const { return IncidenceMatrix::vstack(m_b, m_ab); }
};

/// Vertical concatenation of the plane matrices M_i for i in `planes`, in
/// ascending i. Every column has weight |planes|.
IncidenceMatrix stack_planes(std::uint32_t q, const PlaneSet& planes);

/// M_A, M_B and M_AB stacked from the given plane sets. K_A and K_B may
/// overlap; neither may meet K_AB. An empty set yields a family with no pools.
PoolingDesign build_design(std::uint32_t q, const PlaneSet& k_a, const PlaneSet& k_b,
                           const PlaneSet& k_ab);

/// Split design k: K_A = K_B = {0..k-1}, K_AB = {k..q-1}.
PoolingDesign build_split_design(std::uint32_t q, std::uint32_t k);

struct CollinearityReport {
  bool holds = true;
  // First pair of rows found sharing two or more columns.
  std::optional<std::pair<Index, Index>> violation;
};

/// Every two distinct rows share at most one column, i.e. the pool/item
/// bipartite graph has no 4-cycle.
CollinearityReport unique_collinearity_check(const IncidenceMatrix& m);

// Upper bound on the number of elementary steps an exact checker may take.
struct WorkBudget {
  std::uint64_t max_work = 1'000'000'000;
};

inline constexpr std::uint64_t kWorkSaturated = UINT64_MAX;

// Saturating binomial coefficient.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// C(n, d) * n: the nominal cost of the d-disjunct check.
std::uint64_t disjunct_work(const IncidenceMatrix& m, std::uint32_t d);
/// Sum_{i <= d} C(n, i): the number of unions the separability check enumerates.
std::uint64_t separable_work(const IncidenceMatrix& m, std::uint32_t d);

/// No support T_0 is contained in the union of d supports of other columns.
/// Columns are distinct items even when their supports coincide. With fewer
/// than d other columns all of them are used. Throws BudgetExceeded when
/// disjunct_work exceeds the budget.
bool is_disjunct(const IncidenceMatrix& m, std::uint32_t d, WorkBudget budget = {});

/// Unions of supports over distinct column subsets of size 0..d (the empty
/// union included) are pairwise distinct. Throws BudgetExceeded when
/// separable_work exceeds the budget.
bool is_separable_bar(const IncidenceMatrix& m, std::uint32_t d, WorkBudget budget = {});

/// M_A and M_B are (d-1)-disjunct and [M_A; M_AB], [M_B; M_AB] are
/// d-bar-separable. For d = 1 the disjunct half is vacuous.
bool is_2d_separable(const PoolingDesign& design, std::uint32_t d, WorkBudget budget = {});

}  // namespace poolbp
