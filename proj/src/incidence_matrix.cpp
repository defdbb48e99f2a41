#include "poolbp/incidence_matrix.hpp"

#include <algorithm>
#include <string>

#include "poolbp/errors.hpp"

namespace poolbp {

IncidenceMatrix::IncidenceMatrix(std::size_t n_rows, std::size_t n_cols,
                                 std::vector<std::vector<Index>> rows)
    : rows_(std::move(rows)), cols_(n_cols) {
  if (rows_.size() != n_rows) {
    throw ValidationError("expected " + std::to_string(n_rows) + " rows, got " +
                          std::to_string(rows_.size()));
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto& r = rows_[i];
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end()) {
      throw ValidationError("row " + std::to_string(i) + " lists a column twice");
    }
    if (!r.empty() && r.back() >= n_cols) {
      throw ValidationError("row " + std::to_string(i) + " references column " +
                            std::to_string(r.back()) + " of " + std::to_string(n_cols));
    }
    for (Index j : r) cols_[j].push_back(static_cast<Index>(i));
    nnz_ += r.size();
  }
}

IncidenceMatrix IncidenceMatrix::from_dense(const std::vector<std::vector<int>>& dense) {
  std::size_t n_cols = dense.empty() ? 0 : dense.front().size();
  std::vector<std::vector<Index>> rows(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i].size() != n_cols) throw ValidationError("ragged dense matrix");
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (dense[i][j] == 1) {
        rows[i].push_back(static_cast<Index>(j));
      } else if (dense[i][j] != 0) {
        throw ValidationError("dense matrix entry is not 0/1");
      }
    }
  }
  return IncidenceMatrix(dense.size(), n_cols, std::move(rows));
}

bool IncidenceMatrix::at(std::size_t i, std::size_t j) const {
  const auto& r = rows_.at(i);
  return std::binary_search(r.begin(), r.end(), static_cast<Index>(j));
}

std::vector<std::vector<int>> IncidenceMatrix::to_dense() const {
  std::vector<std::vector<int>> dense(n_rows(), std::vector<int>(n_cols(), 0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (Index j : rows_[i]) dense[i][j] = 1;
  }
  return dense;
}

IncidenceMatrix IncidenceMatrix::permute_columns(std::span<const Index> perm) const {
  if (perm.size() != n_cols()) throw ValidationError("permutation length differs from column count");
  std::vector<Index> where(n_cols(), static_cast<Index>(n_cols()));
  for (std::size_t j = 0; j < perm.size(); ++j) {
    if (perm[j] >= n_cols() || where[perm[j]] != n_cols()) {
      throw ValidationError("not a permutation");
    }
    where[perm[j]] = static_cast<Index>(j);
  }
  std::vector<std::vector<Index>> rows(n_rows());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    rows[i].reserve(rows_[i].size());
    for (Index j : rows_[i]) rows[i].push_back(where[j]);
  }
  return IncidenceMatrix(n_rows(), n_cols(), std::move(rows));
}

IncidenceMatrix IncidenceMatrix::vstack(const IncidenceMatrix& top, const IncidenceMatrix& bottom) {
  if (top.n_cols() != bottom.n_cols()) {
    throw ValidationError("cannot stack matrices with " + std::to_string(top.n_cols()) + " and " +
                          std::to_string(bottom.n_cols()) + " columns");
  }
  std::vector<std::vector<Index>> rows = top.rows_;
  rows.insert(rows.end(), bottom.rows_.begin(), bottom.rows_.end());
  const std::size_t n_rows = rows.size();
  return IncidenceMatrix(n_rows, top.n_cols(), std::move(rows));
}

}  // namespace poolbp
