#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psm/corpus.hpp"

namespace psm {

// Binary document-term presence matrix, stored compressed in both row and
// column order. Rows follow the corpus document order; that order is the
// canonical index used throughout the pipeline. Immutable once built.
class BinaryTermMatrix {
 public:
  BinaryTermMatrix() = default;

  // row_cols[i] lists the columns set in row i (any order, duplicates ok).
  static BinaryTermMatrix from_rows(int n_cols, std::vector<std::vector<int>> row_cols,
                                    std::vector<int> labels);

  int rows() const { return n_rows_; }
  int cols() const { return n_cols_; }
  int64_t nnz() const { return static_cast<int64_t>(row_cols_.size()); }

  // Sorted column ids present in row i.
  std::span<const int> row(int i) const {
    return {row_cols_.data() + row_ptr_[static_cast<size_t>(i)],
            row_cols_.data() + row_ptr_[static_cast<size_t>(i) + 1]};
  }
  // Sorted row ids containing column j.
  std::span<const int> col(int j) const {
    return {col_rows_.data() + col_ptr_[static_cast<size_t>(j)],
            col_rows_.data() + col_ptr_[static_cast<size_t>(j) + 1]};
  }
  int col_count(int j) const {
    return static_cast<int>(col_ptr_[static_cast<size_t>(j) + 1] - col_ptr_[static_cast<size_t>(j)]);
  }
  bool cell(int i, int j) const;

  const std::vector<int>& labels() const { return labels_; }

  // 0/1 dense copy of row i (length cols()).
  std::vector<int> dense_row(int i) const;

  // Submatrix with the given columns (ascending original ids -> 0..k-1),
  // same rows and labels.
  BinaryTermMatrix select_columns(const std::vector<int>& columns) const;

  // Mixes the structural content (shape + sparsity pattern) into hash h.
  uint64_t content_hash(uint64_t h) const;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<size_t> row_ptr_;
  std::vector<int> row_cols_;
  std::vector<size_t> col_ptr_;
  std::vector<int> col_rows_;
  std::vector<int> labels_;
};

// Presence matrix for the corpus over the vocabulary. Repeated occurrences
// still yield 1.
BinaryTermMatrix vectorize(const Corpus& corpus, const Vocabulary& vocab);

}  // namespace psm
