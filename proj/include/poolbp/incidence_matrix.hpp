#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace poolbp {

using Index = std::uint32_t;

/// Binary pools x items matrix. Rows are pools, columns are items.
///
/// Stored sparsely twice: each row keeps the sorted list of columns it
/// contains and each column keeps its support (the sorted list of rows that
/// contain it). Both views are built together and never diverge.
class IncidenceMatrix {
 public:
  IncidenceMatrix() = default;

  /// Builds from per-row column lists. Lists may arrive unsorted; duplicate
  /// or out-of-range entries throw ValidationError.
  IncidenceMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::vector<Index>> rows);

  /// Builds from a dense row-major 0/1 table.
  static IncidenceMatrix from_dense(const std::vector<std::vector<int>>& dense);

  std::size_t n_rows() const noexcept { return rows_.size(); }
  std::size_t n_cols() const noexcept { return cols_.size(); }
  std::size_t nnz() const noexcept { return nnz_; }

  std::span<const Index> row(std::size_t i) const { return rows_[i]; }
  // The support T_j of item j.
  std::span<const Index> col(std::size_t j) const { return cols_[j]; }

  bool at(std::size_t i, std::size_t j) const;

  std::vector<std::vector<int>> to_dense() const;

  /// Column j of the result is column perm[j] of this matrix.
  IncidenceMatrix permute_columns(std::span<const Index> perm) const;

  /// Rows of `top` followed by rows of `bottom`; column counts must agree.
  static IncidenceMatrix vstack(const IncidenceMatrix& top, const IncidenceMatrix& bottom);

  friend bool operator==(const IncidenceMatrix& a, const IncidenceMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_.size() == b.cols_.size();
  }

 private:
  std::vector<std::vector<Index>> rows_;
  std::vector<std::vector<Index>> cols_;
  std::size_t nnz_ = 0;
};

}  // namespace poolbp
