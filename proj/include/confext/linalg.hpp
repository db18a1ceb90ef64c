#ifndef CONFEXT_LINALG_HPP
#define CONFEXT_LINALG_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "confext/scalar.hpp"

namespace confext {

/// Sparse row vector: (column, value) pairs sorted by column, no zeros.
using SparseVec = std::vector<std::pair<int, Scalar>>;

inline SparseVec sparse_axpy(const SparseVec& x, const Scalar& c,
                             const SparseVec& y) {
  // x + c*y, merged
  SparseVec r;
  r.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j >= y.size() || (i < x.size() && x[i].first < y[j].first)) {
      r.push_back(x[i++]);
    } else if (i >= x.size() || y[j].first < x[i].first) {
      Scalar v = c * y[j].second;
      if (!v.is_zero()) r.emplace_back(y[j].first, v);
      ++j;
    } else {
      Scalar v = x[i].second + c * y[j].second;
      if (!v.is_zero()) r.emplace_back(x[i].first, v);
      ++i;
      ++j;
    }
  }
  return r;
}

inline SparseVec sparse_scale(const SparseVec& x, const Scalar& c) {
  SparseVec r;
  r.reserve(x.size());
  for (auto& [col, v] : x) r.emplace_back(col, v * c);
  return r;
}

/// Reduced row echelon form held incrementally: rows_ is kept sorted by
/// pivot column, each pivot is 1 and is the only nonzero in its column
/// among the stored rows.
class Rref {
 public:
  /// Reduce v against the current rows; does not insert.
  SparseVec reduce(SparseVec v) const { return reduce_full(std::move(v)); }

  /// Insert v if independent; returns true when the rank grew.
  bool add(SparseVec v) {
    v = reduce_full(std::move(v));
    if (v.empty()) return false;
    v = sparse_scale(v, v.front().second.inverse());
    int pc = v.front().first;
    for (size_t i = 0; i < rows_.size(); ++i) {
      // eliminate the new pivot column from existing rows
      auto it = std::lower_bound(
          rows_[i].begin(), rows_[i].end(), pc,
          [](const std::pair<int, Scalar>& p, int c) { return p.first < c; });
      if (it != rows_[i].end() && it->first == pc)
        rows_[i] = sparse_axpy(rows_[i], -it->second, v);
    }
    size_t at = std::lower_bound(pivots_.begin(), pivots_.end(), pc) -
                pivots_.begin();
    pivots_.insert(pivots_.begin() + at, pc);
    rows_.insert(rows_.begin() + at, std::move(v));
    return true;
  }

  int rank() const { return (int)rows_.size(); }
  const std::vector<SparseVec>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }
  bool is_pivot(int col) const {
    return std::binary_search(pivots_.begin(), pivots_.end(), col);
  }
  bool contains(const SparseVec& v) const { return reduce_full(v).empty(); }

 private:
  std::vector<SparseVec> rows_;
  std::vector<int> pivots_;

  SparseVec reduce_full(SparseVec v) const {
    // cancel every pivot-column entry; after one cancellation only columns
    // to the right of it can change, so a single left-to-right pass suffices
    for (size_t k = 0; k < v.size();) {
      size_t i = std::lower_bound(pivots_.begin(), pivots_.end(),
                                  v[k].first) -
                 pivots_.begin();
      if (i < pivots_.size() && pivots_[i] == v[k].first) {
        int col = v[k].first;
        v = sparse_axpy(v, -v[k].second, rows_[i]);
        // restart scan at the first column >= col
        k = std::lower_bound(v.begin(), v.end(), col,
                             [](const std::pair<int, Scalar>& p, int c) {
                               return p.first < c;
                             }) -
            v.begin();
      } else {
        ++k;
      }
    }
    return v;
  }
};

/// RREF of a set of rows.  Rows are processed sparsest-first for speed; the
/// result is canonical for the row space regardless of order.
inline Rref rref(std::vector<SparseVec> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SparseVec& a, const SparseVec& b) {
                     return a.size() < b.size();
                   });
  Rref r;
  for (auto& row : rows) r.add(std::move(row));
  return r;
}

/// Basis of {x : A x = 0}, one vector per non-pivot column, in column order.
/// Each basis vector has a 1 in its free column.
inline std::vector<SparseVec> nullspace(const std::vector<SparseVec>& rows,
                                        int ncols) {
  Rref r = rref(rows);
  std::vector<SparseVec> basis;
  for (int f = 0; f < ncols; ++f) {
    if (r.is_pivot(f)) continue;
    SparseVec v;
    for (size_t i = 0; i < r.rows().size(); ++i) {
      auto& row = r.rows()[i];
      auto it = std::lower_bound(
          row.begin(), row.end(), f,
          [](const std::pair<int, Scalar>& p, int c) { return p.first < c; });
      if (it != row.end() && it->first == f)
        v.emplace_back(r.pivots()[i], -it->second);
    }
    v.emplace_back(f, Scalar(1));
    std::sort(v.begin(), v.end(),
              [](auto& a, auto& b) { return a.first < b.first; });
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace confext

#endif
