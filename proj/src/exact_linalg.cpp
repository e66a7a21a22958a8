#include "phasedef/exact_linalg.hpp"

#include <numeric>

namespace phasedef {

SparseVec sparse_axpy(const SparseVec& x, const Rat& c, const SparseVec& y) {
  SparseVec out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j >= y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i >= x.size() || y[j].first < x[i].first) {
      Rat v = c * y[j].second;
      if (v != 0) out.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      Rat v = x[i].second + c * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

void sparse_scale(SparseVec& x, const Rat& c) {
  if (c == 0) {
    x.clear();
    return;
  }
  for (auto& t : x) t.second *= c;
}

Rat sparse_get(const SparseVec& x, int col) {
  auto it = std::lower_bound(x.begin(), x.end(), col,
                             [](const auto& t, int c) { return t.first < c; });
  if (it != x.end() && it->first == col) return it->second;
  return Rat(0);
}

SparseVec Echelon::reduce(SparseVec row) const {
  // The smallest reducible column strictly increases each step: a pivot
  // row's support starts at its pivot column.
  size_t scan = 0;
  while (scan < row.size()) {
    auto it = pivots_.find(row[scan].first);
    if (it == pivots_.end()) {
      ++scan;
      continue;
    }
    row = sparse_axpy(row, -row[scan].second, it->second);
  }
  return row;
}

bool Echelon::insert(SparseVec row) {
  row = reduce(std::move(row));
  if (row.empty()) return false;
  Rat inv = 1 / row.front().second;
  sparse_scale(row, inv);
  int pcol = row.front().first;
  pivots_.emplace(pcol, std::move(row));
  return true;
}

void Echelon::back_eliminate() {
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    SparseVec& row = it->second;
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t k = 1; k < row.size(); ++k) {
        auto jt = pivots_.find(row[k].first);
        if (jt == pivots_.end()) continue;
        row = sparse_axpy(row, -row[k].second, jt->second);
        changed = true;
        break;
      }
    }
  }
}

int sparse_rank(const std::vector<SparseVec>& rows) {
  // Processing short rows first keeps fill-in low on the structured
  // matrices this library produces.
  std::vector<int> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rows[a].size() < rows[b].size(); });
  Echelon ech;
  for (int idx : order) ech.insert(rows[idx]);
  return ech.rank();
}

std::vector<SparseVec> sparse_nullspace(const std::vector<SparseVec>& rows, int ncols) {
  std::vector<int> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rows[a].size() < rows[b].size(); });
  Echelon ech;
  for (int idx : order) ech.insert(rows[idx]);
  ech.back_eliminate();

  const auto& piv = ech.pivot_rows();
  std::vector<SparseVec> basis;
  for (int f = 0; f < ncols; ++f) {
    if (piv.count(f)) continue;
    SparseVec v;
    for (const auto& [pcol, prow] : piv) {
      Rat c = sparse_get(prow, f);
      if (c != 0) v.emplace_back(pcol, -c);
    }
    v.emplace_back(f, Rat(1));
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace phasedef
