#include "psm/matrix.hpp"

#include <algorithm>
#include <stdexcept>

#include "psm/util.hpp"

namespace psm {

BinaryTermMatrix BinaryTermMatrix::from_rows(int n_cols, std::vector<std::vector<int>> row_cols,
                                             std::vector<int> labels) {
  if (labels.size() != row_cols.size())
    throw std::runtime_error("matrix: label count must equal row count");

  BinaryTermMatrix m;
  m.n_rows_ = static_cast<int>(row_cols.size());
  m.n_cols_ = n_cols;
  m.labels_ = std::move(labels);

  m.row_ptr_.resize(static_cast<size_t>(m.n_rows_) + 1, 0);
  std::vector<int> col_counts(static_cast<size_t>(n_cols), 0);
  for (auto& cols : row_cols) {
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (int c : cols) {
      if (c < 0 || c >= n_cols) throw std::runtime_error("matrix: column id out of range");
      ++col_counts[static_cast<size_t>(c)];
    }
  }
  size_t nnz = 0;
  for (size_t i = 0; i < row_cols.size(); ++i) {
    m.row_ptr_[i] = nnz;
    nnz += row_cols[i].size();
  }
  m.row_ptr_[row_cols.size()] = nnz;

  m.row_cols_.reserve(nnz);
  for (const auto& cols : row_cols) {
    m.row_cols_.insert(m.row_cols_.end(), cols.begin(), cols.end());
  }

  m.col_ptr_.resize(static_cast<size_t>(n_cols) + 1, 0);
  for (int j = 0; j < n_cols; ++j) {
    m.col_ptr_[static_cast<size_t>(j) + 1] =
        m.col_ptr_[static_cast<size_t>(j)] + static_cast<size_t>(col_counts[static_cast<size_t>(j)]);
  }
  m.col_rows_.resize(nnz);
  std::vector<size_t> cursor(m.col_ptr_.begin(), m.col_ptr_.end() - 1);
  for (int i = 0; i < m.n_rows_; ++i) {
    for (int c : m.row(i)) m.col_rows_[cursor[static_cast<size_t>(c)]++] = i;
  }
  return m;
}

bool BinaryTermMatrix::cell(int i, int j) const {
  const auto r = row(i);
  return std::binary_search(r.begin(), r.end(), j);
}

std::vector<int> BinaryTermMatrix::dense_row(int i) const {
  std::vector<int> out(static_cast<size_t>(n_cols_), 0);
  for (int c : row(i)) out[static_cast<size_t>(c)] = 1;
  return out;
}

BinaryTermMatrix BinaryTermMatrix::select_columns(const std::vector<int>& columns) const {
  std::vector<int> sorted = columns;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> remap(static_cast<size_t>(n_cols_), -1);
  for (size_t k = 0; k < sorted.size(); ++k) {
    const int c = sorted[k];
    if (c < 0 || c >= n_cols_) throw std::runtime_error("select_columns: column id out of range");
    remap[static_cast<size_t>(c)] = static_cast<int>(k);
  }
  std::vector<std::vector<int>> rows_out(static_cast<size_t>(n_rows_));
  for (int i = 0; i < n_rows_; ++i) {
    for (int c : row(i)) {
      const int nc = remap[static_cast<size_t>(c)];
      if (nc >= 0) rows_out[static_cast<size_t>(i)].push_back(nc);
    }
  }
  return from_rows(static_cast<int>(sorted.size()), std::move(rows_out), labels_);
}

uint64_t BinaryTermMatrix::content_hash(uint64_t h) const {
  h = fnv1a64_raw(&n_rows_, sizeof(n_rows_), h);
  h = fnv1a64_raw(&n_cols_, sizeof(n_cols_), h);
  h = fnv1a64_span<size_t>(row_ptr_, h);
  h = fnv1a64_span<int>(row_cols_, h);
  return h;
}

BinaryTermMatrix vectorize(const Corpus& corpus, const Vocabulary& vocab) {
  std::vector<std::vector<int>> rows(corpus.docs.size());
  std::vector<int> labels(corpus.docs.size());
  for (size_t i = 0; i < corpus.docs.size(); ++i) {
    labels[i] = corpus.docs[i].label;
    for (const auto& tok : tokenize(document_text(corpus.docs[i]))) {
      const int c = vocab.lookup(tok);
      if (c >= 0) rows[i].push_back(c);
    }
  }
  return BinaryTermMatrix::from_rows(vocab.size(), std::move(rows), std::move(labels));
}

}  // namespace psm
