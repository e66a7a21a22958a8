#include "phasedef/cohomology.hpp"

#include <algorithm>
#include <stdexcept>

namespace phasedef {

namespace {

void enumerate_tuples(int m, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  int start = cur.empty() ? 0 : cur.back() + 1;
  for (int v = start; v <= m - (k - static_cast<int>(cur.size())); ++v) {
    cur.push_back(v);
    enumerate_tuples(m, k, cur, out);
    cur.pop_back();
  }
}

/// Bracket of two h-generators expanded in the h-basis. Throws if a
/// component escapes span(h).
SparseVec sub_bracket(const StructureConstants& g, const std::vector<int>& sub,
                      const std::vector<int>& pos_in_sub, int u, int v) {
  SparseVec out;
  for (const auto& [c, coeff] : g.bracket_basis(sub[u], sub[v])) {
    int p = pos_in_sub[c];
    if (p < 0) throw std::invalid_argument("subset is not bracket-closed");
    out.emplace_back(p, coeff);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<int> positions_in_sub(const StructureConstants& g, const std::vector<int>& sub) {
  std::vector<int> pos(g.dim(), -1);
  for (size_t i = 0; i < sub.size(); ++i) pos[sub[i]] = static_cast<int>(i);
  return pos;
}

void sort_terms(SparseVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec merged;
  for (auto& t : v) {
    if (!merged.empty() && merged.back().first == t.first)
      merged.back().second += t.second;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0; });
  v = std::move(merged);
}

std::vector<SparseVec> columns_of(const CoboundaryMatrix& m) {
  std::vector<SparseVec> cols(m.cols);
  for (int r = 0; r < static_cast<int>(m.row_vecs.size()); ++r)
    for (const auto& [c, v] : m.row_vecs[r]) cols[c].emplace_back(r, v);
  return cols;
}

}  // namespace

int CochainIndexer::index(const std::vector<int>& sorted_tuple, int target) const {
  auto it = tuple_rank.find(sorted_tuple);
  if (it == tuple_rank.end()) throw std::invalid_argument("tuple not in cochain basis");
  return it->second * module_dim + target;
}

std::pair<int, int> CochainIndexer::index_signed(std::vector<int> tuple, int target) const {
  int sign = 1;
  for (size_t i = 1; i < tuple.size(); ++i)
    for (size_t j = i; j > 0 && tuple[j] < tuple[j - 1]; --j) {
      std::swap(tuple[j], tuple[j - 1]);
      sign = -sign;
    }
  for (size_t i = 1; i < tuple.size(); ++i)
    if (tuple[i] == tuple[i - 1]) return {-1, 0};
  return {index(tuple, target), sign};
}

std::string CochainIndexer::describe(int flat_index, const StructureConstants& g) const {
  int tr = flat_index / module_dim;
  int target = flat_index % module_dim;
  std::string s = "f(";
  for (size_t i = 0; i < tuples[tr].size(); ++i) {
    if (i) s += ",";
    s += label_str(g.labels[sub[tuples[tr][i]]]);
  }
  s += ") -> " + label_str(g.labels[target]);
  return s;
}

CochainIndexer cochain_indexer(const StructureConstants& g, const std::vector<int>& sub, int k) {
  CochainIndexer ix;
  ix.k = k;
  ix.module_dim = g.dim();
  ix.sub = sub;
  std::vector<int> cur;
  enumerate_tuples(static_cast<int>(sub.size()), k, cur, ix.tuples);
  for (size_t r = 0; r < ix.tuples.size(); ++r)
    ix.tuple_rank[ix.tuples[r]] = static_cast<int>(r);
  return ix;
}

bool is_subalgebra(const StructureConstants& g, const std::vector<int>& sub) {
  auto pos = positions_in_sub(g, sub);
  for (size_t u = 0; u < sub.size(); ++u)
    for (size_t v = u + 1; v < sub.size(); ++v)
      for (const auto& [c, coeff] : g.bracket_basis(sub[u], sub[v])) {
        (void)coeff;
        if (pos[c] < 0) return false;
      }
  return true;
}

bool is_ideal(const StructureConstants& g, const std::vector<int>& sub) {
  auto pos = positions_in_sub(g, sub);
  for (int a = 0; a < g.dim(); ++a)
    for (int s : sub)
      for (const auto& [c, coeff] : g.bracket_basis(a, s)) {
        (void)coeff;
        if (pos[c] < 0) return false;
      }
  return true;
}

CoboundaryMatrix coboundary_matrix_subalgebra(const StructureConstants& g,
                                              const std::vector<int>& sub, int k) {
  if (!is_subalgebra(g, sub)) throw std::invalid_argument("subset is not a subalgebra");
  const int m = static_cast<int>(sub.size());
  const int D = g.dim();
  auto pos = positions_in_sub(g, sub);

  CochainIndexer src = cochain_indexer(g, sub, k);
  CochainIndexer dst = cochain_indexer(g, sub, k + 1);

  // ad columns for each h-generator: act[r][t] = [h_r, e_t] sparse
  std::vector<std::vector<SparseVec>> act(m, std::vector<SparseVec>(D));
  for (int r = 0; r < m; ++r)
    for (int t = 0; t < D; ++t) act[r][t] = g.bracket_basis(sub[r], t);

  CoboundaryMatrix out;
  out.rows = dst.dim();
  out.cols = src.dim();
  out.row_vecs.assign(out.rows, {});

  for (size_t R = 0; R < dst.tuples.size(); ++R) {
    const auto& T = dst.tuples[R];
    const int base_row = static_cast<int>(R) * D;
    // sum_i (-1)^i  y_i . f(T \ i)
    for (int i = 0; i <= k; ++i) {
      std::vector<int> S;
      S.reserve(k);
      for (int q = 0; q <= k; ++q)
        if (q != i) S.push_back(T[q]);
      int sr = src.tuple_rank.at(S);
      int sign = (i % 2 == 0) ? 1 : -1;
      for (int t = 0; t < D; ++t) {
        int col = sr * D + t;
        for (const auto& [rr, val] : act[T[i]][t])
          out.row_vecs[base_row + rr].emplace_back(col, sign * val);
      }
    }
    // sum_{i<j} (-1)^{i+j} f([y_i, y_j], T \ {i,j})
    for (int i = 0; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        SparseVec br = sub_bracket(g, sub, pos, T[i], T[j]);
        if (br.empty()) continue;
        std::vector<int> rest;
        rest.reserve(k - 1);
        for (int q = 0; q <= k; ++q)
          if (q != i && q != j) rest.push_back(T[q]);
        int sign_ij = ((i + j) % 2 == 0) ? 1 : -1;
        for (const auto& [r, cr] : br) {
          // the bracket fills the first argument slot
          std::vector<int> U{r};
          U.insert(U.end(), rest.begin(), rest.end());
          auto [idx0, sigma] = src.index_signed(U, 0);
          if (sigma == 0) continue;
          int ur = idx0 / D;
          Rat coeff = Rat(sign_ij * sigma) * cr;
          for (int t = 0; t < D; ++t)
            out.row_vecs[base_row + t].emplace_back(ur * D + t, coeff);
        }
      }
  }
  for (auto& row : out.row_vecs) sort_terms(row);
  return out;
}

CoboundaryMatrix coboundary_matrix(const StructureConstants& g, const std::vector<int>& h,
                                   int k) {
  if (!is_ideal(g, h)) throw std::invalid_argument("subset is not an ideal of the algebra");
  return coboundary_matrix_subalgebra(g, h, k);
}

namespace {

CohomologyResult cohomology_from_matrices(const StructureConstants& /*g*/,
                                          const std::vector<int>& sub, int k,
                                          const CoboundaryMatrix& d_in,
                                          const CoboundaryMatrix& d_out) {
  CohomologyResult res;
  res.degree = k;
  res.rank_out = sparse_rank(d_out.row_vecs);

  Echelon image;
  for (auto& col : columns_of(d_in)) image.insert(std::move(col));
  res.rank_in = image.rank();
  image.back_eliminate();

  auto kernel = sparse_nullspace(d_out.row_vecs, d_out.cols);

  Echelon quotient;
  for (const auto& z : kernel) quotient.insert(image.reduce(z));
  quotient.back_eliminate();

  res.dimension = quotient.rank();
  int nullity = d_out.cols - res.rank_out;
  if (res.dimension != nullity - res.rank_in)
    throw std::logic_error("cohomology dimension bookkeeping mismatch");
  for (const auto& [pcol, row] : quotient.pivot_rows()) {
    (void)pcol;
    CochainMap rep;
    rep.degree = k;
    rep.sub = sub;
    rep.coeffs = row;
    res.representatives.push_back(std::move(rep));
  }
  return res;
}

}  // namespace

CohomologyResult subalgebra_cohomology(const StructureConstants& g, const std::vector<int>& sub,
                                       int k) {
  if (k < 1) throw std::invalid_argument("cohomology degree must be >= 1");
  CoboundaryMatrix d_in = coboundary_matrix_subalgebra(g, sub, k - 1);
  CoboundaryMatrix d_out = coboundary_matrix_subalgebra(g, sub, k);
  return cohomology_from_matrices(g, sub, k, d_in, d_out);
}

CohomologyResult cohomology_dim(const StructureConstants& g, int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("supported degrees are 1, 2, 3");
  std::vector<int> all(g.dim());
  for (int i = 0; i < g.dim(); ++i) all[i] = i;
  return subalgebra_cohomology(g, all, k);
}

std::vector<SparseVec> cocycle_action_matrix(const StructureConstants& g,
                                             const CochainIndexer& deg2, int kappa) {
  const int D = g.dim();
  auto pos = positions_in_sub(g, deg2.sub);
  std::vector<SparseVec> rows(deg2.dim());
  for (size_t R = 0; R < deg2.tuples.size(); ++R) {
    int u = deg2.tuples[R][0], v = deg2.tuples[R][1];
    int base_row = static_cast<int>(R) * D;
    // [kappa, f(u, v)]
    for (int t = 0; t < D; ++t) {
      int col = static_cast<int>(R) * D + t;
      for (const auto& [rr, val] : g.bracket_basis(kappa, t))
        rows[base_row + rr].emplace_back(col, val);
    }
    // - f([kappa, y_u], v) - f(y_u, [kappa, y_v])
    auto subtract_arg = [&](int arg_pos, int other_pos, bool arg_is_first) {
      for (const auto& [c, val] : g.bracket_basis(kappa, deg2.sub[arg_pos])) {
        int p = pos[c];
        if (p < 0) throw std::invalid_argument("ideal not closed under k_part action");
        std::vector<int> tup = arg_is_first ? std::vector<int>{p, other_pos}
                                            : std::vector<int>{other_pos, p};
        auto [idx0, sigma] = deg2.index_signed(tup, 0);
        if (sigma == 0) continue;
        int tr = idx0 / D;
        Rat coeff = Rat(-sigma) * val;
        for (int t = 0; t < D; ++t) rows[base_row + t].emplace_back(tr * D + t, coeff);
      }
    };
    subtract_arg(u, v, true);
    subtract_arg(v, u, false);
  }
  for (auto& row : rows) sort_terms(row);
  return rows;
}

CohomologyResult invariant_cocycles(const StructureConstants& g, const std::vector<int>& h,
                                    const std::vector<int>& k_part) {
  if (!is_ideal(g, h)) throw std::invalid_argument("h must be an ideal");
  if (!is_subalgebra(g, k_part))
    throw std::invalid_argument("k_part must be a subalgebra");
  if (static_cast<int>(h.size() + k_part.size()) != g.dim())
    throw std::invalid_argument("h and k_part must be complementary");
  {
    std::vector<int> all = h;
    all.insert(all.end(), k_part.begin(), k_part.end());
    std::sort(all.begin(), all.end());
    for (int i = 0; i < g.dim(); ++i)
      if (all[i] != i) throw std::invalid_argument("h and k_part must be complementary");
  }

  CoboundaryMatrix d1 = coboundary_matrix(g, h, 1);
  CoboundaryMatrix d2 = coboundary_matrix(g, h, 2);
  CochainIndexer deg2 = cochain_indexer(g, h, 2);

  const int nf = d2.cols;             // C^2 unknowns
  const int nl = d1.cols;             // one C^1 slack block per generator
  const int m = static_cast<int>(k_part.size());

  // [ d2 f = 0 ;  P_r f - d1 l_r = 0 ]
  std::vector<SparseVec> rows;
  rows.reserve(d2.row_vecs.size() + static_cast<size_t>(m) * d1.row_vecs.size());
  for (const auto& r : d2.row_vecs) rows.push_back(r);
  for (int r = 0; r < m; ++r) {
    auto paction = cocycle_action_matrix(g, deg2, k_part[r]);
    int off = nf + r * nl;
    for (int rr = 0; rr < static_cast<int>(paction.size()); ++rr) {
      SparseVec row = paction[rr];
      for (const auto& [c, v] : d1.row_vecs[rr]) row.emplace_back(off + c, -v);
      sort_terms(row);
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }

  auto solutions = sparse_nullspace(rows, nf + m * nl);

  Echelon invariant_space;
  for (const auto& sol : solutions) {
    SparseVec f_part;
    for (const auto& [c, v] : sol)
      if (c < nf) f_part.emplace_back(c, v);
    invariant_space.insert(std::move(f_part));
  }

  Echelon image;
  for (auto& col : columns_of(d1)) image.insert(std::move(col));
  int rank_in = image.rank();
  image.back_eliminate();

  Echelon quotient;
  for (const auto& [pcol, row] : invariant_space.pivot_rows()) {
    (void)pcol;
    quotient.insert(image.reduce(row));
  }
  quotient.back_eliminate();

  CohomologyResult res;
  res.degree = 2;
  res.rank_in = rank_in;
  res.rank_out = sparse_rank(d2.row_vecs);
  res.dimension = quotient.rank();
  for (const auto& [pcol, row] : quotient.pivot_rows()) {
    (void)pcol;
    CochainMap rep;
    rep.degree = 2;
    rep.sub = h;
    rep.coeffs = row;
    res.representatives.push_back(std::move(rep));
  }
  return res;
}

HsReport hochschild_serre_check(const StructureConstants& g, const std::vector<int>& h,
                                const std::vector<int>& k_part) {
  HsReport rep;
  rep.dim_full = cohomology_dim(g, 2).dimension;
  rep.dim_invariant = invariant_cocycles(g, h, k_part).dimension;
  rep.equal = rep.dim_full == rep.dim_invariant;
  return rep;
}

bool is_coboundary(const StructureConstants& g, const std::vector<int>& h,
                   const SparseVec& cochain) {
  CoboundaryMatrix d1 = coboundary_matrix(g, h, 1);
  Echelon image;
  for (auto& col : columns_of(d1)) image.insert(std::move(col));
  return image.reduce(cochain).empty();
}

SparseVec deformation_direction_cocycle(const StructureConstants& g0,
                                        const std::vector<int>& h, int which) {
  if (which < 1 || which > 3) throw std::invalid_argument("direction must be 1, 2 or 3");
  DeformationParams d{Rat(which == 1), Rat(which == 2), Rat(which == 3), g0.n};
  StructureConstants g1 = build_deformed(d);
  if (g1.dim() != g0.dim())
    throw std::invalid_argument("algebra is not a member of the deformed family");
  CochainIndexer ix = cochain_indexer(g0, h, 2);
  auto pos = positions_in_sub(g0, h);
  SparseVec f;
  for (int a = 0; a < g0.dim(); ++a)
    for (int b = a + 1; b < g0.dim(); ++b) {
      if (pos[a] < 0 || pos[b] < 0) continue;
      SparseVec diff = sparse_axpy(g1.bracket_basis(a, b), Rat(-1), g0.bracket_basis(a, b));
      for (const auto& [c, v] : diff) f.emplace_back(ix.index({pos[a], pos[b]}, c), v);
    }
  std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return f;
}

std::vector<int> labels_of_kind(const StructureConstants& g,
                                std::initializer_list<LabelKind> kinds) {
  std::vector<int> out;
  for (int i = 0; i < g.dim(); ++i)
    for (LabelKind k : kinds)
      if (g.labels[i].kind == k) {
        out.push_back(i);
        break;
      }
  return out;
}

}  // namespace phasedef
