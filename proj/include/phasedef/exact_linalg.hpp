#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "phasedef/rational.hpp"

namespace phasedef {

/// Sparse vector over Q: (column, coefficient) pairs, sorted by column,
/// no zero coefficients.
using SparseVec = std::vector<std::pair<int, Rat>>;

SparseVec sparse_axpy(const SparseVec& x, const Rat& c, const SparseVec& y);  // x + c*y
void sparse_scale(SparseVec& x, const Rat& c);
Rat sparse_get(const SparseVec& x, int col);

/// Incremental row-echelon dictionary over Q. Rows are inserted one at a
/// time, reduced against the pivots found so far; each stored pivot row is
/// normalized so its leading (smallest-column) coefficient is 1. Rank is
/// the number of pivots. Reduction order is deterministic, so quotient
/// representatives derived from it are reproducible.
class Echelon {
 public:
  /// Fully reduce a row against current pivots (eliminates every column
  /// that currently carries a pivot).
  SparseVec reduce(SparseVec row) const;

  /// Reduce and, if nonzero, adopt the row as a new pivot. Returns true
  /// if the rank increased.
  bool insert(SparseVec row);

  int rank() const { return static_cast<int>(pivots_.size()); }
  bool has_pivot(int col) const { return pivots_.count(col) != 0; }
  const std::map<int, SparseVec>& pivot_rows() const { return pivots_; }

  /// Back-eliminate so every pivot row is supported on its pivot column
  /// and free columns only (reduced row echelon form).
  void back_eliminate();

 private:
  std::map<int, SparseVec> pivots_;  // pivot column -> normalized row
};

/// Rank of the row span.
int sparse_rank(const std::vector<SparseVec>& rows);

/// Basis of the right kernel {v : M v = 0} where the rows of M are given.
/// Basis vectors are indexed by the free columns in increasing order and
/// are normalized with a 1 in their free column.
std::vector<SparseVec> sparse_nullspace(const std::vector<SparseVec>& rows, int ncols);

/// Dense matrix over an exact field scalar (Rat or QuadExt).
template <class K>
struct DenseMat {
  int rows = 0, cols = 0;
  std::vector<K> a;  // row-major

  DenseMat() = default;
  DenseMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, K(0)) {}
  K& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const K& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

template <class K>
bool scalar_is_zero(const K& x) {
  return x.is_zero();
}
template <>
inline bool scalar_is_zero<Rat>(const Rat& x) {
  return x == 0;
}

/// Determinant by Gaussian elimination over the field.
template <class K>
K dense_det(DenseMat<K> m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
  K det(1);
  for (int c = 0; c < m.cols; ++c) {
    int piv = -1;
    for (int r = c; r < m.rows; ++r)
      if (!scalar_is_zero(m(r, c))) {
        piv = r;
        break;
      }
    if (piv < 0) return K(0);
    if (piv != c) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det = det * m(c, c);
    for (int r = c + 1; r < m.rows; ++r) {
      if (scalar_is_zero(m(r, c))) continue;
      K f = m(r, c) / m(c, c);
      for (int j = c; j < m.cols; ++j) m(r, j) = m(r, j) - f * m(c, j);
    }
  }
  return det;
}

template <class K>
int dense_rank(DenseMat<K> m) {
  int rank = 0;
  for (int c = 0; c < m.cols && rank < m.rows; ++c) {
    int piv = -1;
    for (int r = rank; r < m.rows; ++r)
      if (!scalar_is_zero(m(r, c))) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(rank, j));
    for (int r = rank + 1; r < m.rows; ++r) {
      if (scalar_is_zero(m(r, c))) continue;
      K f = m(r, c) / m(rank, c);
      for (int j = c; j < m.cols; ++j) m(r, j) = m(r, j) - f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

}  // namespace phasedef
