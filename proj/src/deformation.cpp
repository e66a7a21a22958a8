#include "phasedef/deformation.hpp"

#include <stdexcept>

namespace phasedef {

namespace {

std::string ortho_label(int p, int q, bool complex_field) {
  std::string body = std::to_string(p);
  if (q > 0) body += "," + std::to_string(q);
  if (complex_field) return "o(" + std::to_string(p + q) + ",C)";
  return "o(" + body + ")";
}

std::string semidirect_flat_label(int p, int q, int fiber, bool complex_field) {
  if (complex_field)
    return "o(" + std::to_string(p + q) + ",C) |x C^" + std::to_string(fiber);
  return ortho_label(p, q, false) + " |x R^" + std::to_string(fiber);
}

std::string dn_label(int n, bool complex_field) {
  if (complex_field) return "o(" + std::to_string(n) + ",C) |x d_" + std::to_string(n) + "^C";
  return "o(" + std::to_string(n) + ") |x d_" + std::to_string(n);
}

void require_classifiable(const DeformationParams& params) {
  if (params.is_zero()) throw std::invalid_argument("zero triple has no stratum");
  if (params.n < 3)
    throw std::invalid_argument("classification operations require n >= 3");
}

Rat cone_gap(const DeformationParams& p) { return p.eps3 * p.eps3 - p.eps1 * p.eps2; }

}  // namespace

std::string stratum_str(ComplexStratum s) {
  switch (s) {
    case ComplexStratum::U: return "U";
    case ComplexStratum::Conic: return "Conic";
    case ComplexStratum::LLine: return "LLine";
  }
  return "?";
}

std::string stratum_str(RealStratum s) {
  switch (s) {
    case RealStratum::Rpp: return "R++";
    case RealStratum::Rpm: return "R+-";
    case RealStratum::Rmm: return "R--";
    case RealStratum::Cplus: return "C+";
    case RealStratum::Cminus: return "C-";
    case RealStratum::L: return "L";
    case RealStratum::Zero: return "Zero";
  }
  return "?";
}

ComplexClassReport classify_complex(const DeformationParams& params) {
  require_classifiable(params);
  const int n = params.n;
  ComplexClassReport rep;
  Rat gap = cone_gap(params);
  bool on_lines = params.eps1 == 0 || params.eps2 == 0;
  if (gap == 0) {
    rep.stratum = ComplexStratum::Conic;
    rep.paper_label = semidirect_flat_label(n + 1, 0, n + 1, true);
    rep.b_rank = n + 1;
  } else if (!on_lines) {
    rep.stratum = ComplexStratum::U;
    rep.paper_label = ortho_label(n + 2, 0, true);
    rep.b_rank = n + 2;
  } else {
    rep.stratum = ComplexStratum::LLine;
    rep.paper_label = dn_label(n, true);
    rep.b_rank = n + 2;  // det of the W-block is -eps3^2 != 0
    rep.conflict = true;
    rep.conflict_note =
        "B_eps is nondegenerate on the line stratum, so the quadratic-form "
        "correspondence forces o(" + std::to_string(n + 2) + ",C); span{I,x_i,p_i} "
        "is not bracket-closed under the deformed table";
  }
  return rep;
}

std::array<int, 3> b_form_signature(const DeformationParams& params) {
  // diag(1,...,1) contributes (n,0,0); the W-block [[e1,e3],[e3,e2]] is
  // classified by determinant and trace, exactly.
  std::array<int, 3> sig{params.n, 0, 0};
  Rat det = params.eps1 * params.eps2 - params.eps3 * params.eps3;
  Rat tr = params.eps1 + params.eps2;
  if (det > 0) {
    if (tr > 0)
      sig[0] += 2;
    else
      sig[1] += 2;
  } else if (det < 0) {
    sig[0] += 1;
    sig[1] += 1;
  } else if (params.eps1 == 0 && params.eps2 == 0 && params.eps3 == 0) {
    sig[2] += 2;
  } else {
    // rank-1 block: the nonzero eigenvalue equals the trace
    if (tr > 0)
      sig[0] += 1;
    else
      sig[1] += 1;
    sig[2] += 1;
  }
  return sig;
}

IsoClassReport classify_real(const DeformationParams& params) {
  require_classifiable(params);
  const int n = params.n;
  IsoClassReport rep;

  Rat gap = cone_gap(params);
  if (gap == 0) {
    bool plus = params.eps1 >= 0 && params.eps2 >= 0;
    rep.stratum = plus ? RealStratum::Cplus : RealStratum::Cminus;
    rep.paper_label = plus ? semidirect_flat_label(n + 1, 0, n + 1, false)
                           : semidirect_flat_label(n, 1, n + 1, false);
  } else if (params.eps1 == 0 || params.eps2 == 0) {
    rep.stratum = RealStratum::L;
    rep.paper_label = dn_label(n, false);
  } else if (params.eps1 > 0 && params.eps2 > 0) {
    rep.stratum = RealStratum::Rpp;
    rep.paper_label = ortho_label(n + 2, 0, false);
  } else if (params.eps1 < 0 && params.eps2 < 0) {
    rep.stratum = RealStratum::Rmm;
    rep.paper_label = ortho_label(n, 2, false);
  } else {
    rep.stratum = RealStratum::Rpm;
    rep.paper_label = ortho_label(n + 1, 1, false);
  }

  rep.b_signature = b_form_signature(params);
  auto [bp, bq, bn] = rep.b_signature;
  if (bn == 0)
    rep.derived_label = ortho_label(bp, bq, false);
  else
    rep.derived_label = semidirect_flat_label(bp, bq, n + 1, false);

  StructureConstants A = build_deformed(params);
  Signature ks = killing_signature(A);
  rep.killing_signature = {ks.positives, ks.negatives, ks.nulls};
  rep.radical_dim = trace_form_nullity(A);

  if (rep.derived_label != rep.paper_label) {
    rep.conflict = true;
    if (rep.stratum == RealStratum::L)
      rep.conflict_note =
          "B_eps is nondegenerate with signature (" + std::to_string(bp) + "," +
          std::to_string(bq) + "); the table label " + rep.paper_label +
          " disagrees with the quadratic-form correspondence";
    else
      rep.conflict_note = "B_eps signature (" + std::to_string(bp) + "," +
                          std::to_string(bq) + "," + std::to_string(bn) +
                          ") disagrees with the table label " + rep.paper_label;
  }
  return rep;
}

namespace {

DenseMat<QuadExt> block_matrix(int n, const QuadExt& xx, const QuadExt& xp, const QuadExt& px,
                               const QuadExt& pp) {
  // phi(x_i) = xx * x_i + xp * p_i ; phi(p_i) = px * x_i + pp * p_i ;
  // identity on l_ij ; phi(I) = det * I.
  const int lcount = n * (n - 1) / 2;
  const int dim = lcount + 2 * n + 1;
  DenseMat<QuadExt> m(dim, dim);
  for (int i = 0; i < lcount; ++i) m(i, i) = QuadExt(Rat(1));
  for (int i = 0; i < n; ++i) {
    int x = lcount + i, p = lcount + n + i;
    m(x, x) = xx;
    m(p, x) = xp;
    m(x, p) = px;
    m(p, p) = pp;
  }
  m(dim - 1, dim - 1) = xx * pp - xp * px;
  return m;
}

}  // namespace

Rat is_isomorphism(const LinearBasisMap& map, const StructureConstants& A,
                   const StructureConstants& B) {
  const int d = A.dim();
  if (d != B.dim() || map.matrix.rows != d || map.matrix.cols != d)
    throw std::invalid_argument("dimension mismatch in isomorphism check");

  // phi(e_k) columns
  auto col = [&](int k) {
    std::vector<QuadExt> v(d);
    for (int i = 0; i < d; ++i) v[i] = map.matrix(i, k);
    return v;
  };

  Rat worst(0);
  std::vector<QuadExt> defect(d);
  for (int a = 0; a < d; ++a) {
    auto pa = col(a);
    for (int b = a + 1; b < d; ++b) {
      auto pb = col(b);
      for (auto& q : defect) q = QuadExt(Rat(0));
      // phi([a,b]_A)
      for (const auto& [c, v] : A.bracket_basis(a, b))
        for (int i = 0; i < d; ++i)
          if (!map.matrix(i, c).is_zero()) defect[i] += map.matrix(i, c) * QuadExt(v);
      // - [phi(a), phi(b)]_B
      for (int i = 0; i < d; ++i) {
        if (pa[i].is_zero()) continue;
        for (int j = 0; j < d; ++j) {
          if (pb[j].is_zero() || i == j) continue;
          QuadExt coeff = pa[i] * pb[j];
          for (const auto& [c, v] : B.bracket_basis(i, j)) defect[c] -= coeff * QuadExt(v);
        }
      }
      for (const auto& q : defect) {
        Rat mag = q.magnitude();
        if (mag > worst) worst = mag;
      }
    }
  }
  return worst;
}

bool map_invertible(const LinearBasisMap& map) {
  return !dense_det(map.matrix).is_zero();
}

namespace {

LinearBasisMap validated(LinearBasisMap map) {
  StructureConstants A = build_deformed(map.source);
  StructureConstants B = build_deformed(map.target);
  Rat res = is_isomorphism(map, A, B);
  if (res != 0)
    throw std::logic_error("normal-form construction failed the bracket check (" +
                           map.construction + ")");
  if (!map_invertible(map)) throw std::logic_error("normal-form map is singular");
  return map;
}

}  // namespace

LinearBasisMap normal_form_map(const DeformationParams& params) {
  require_classifiable(params);
  const Rat& e1 = params.eps1;
  const Rat& e2 = params.eps2;
  const Rat& e3 = params.eps3;
  Rat gap = cone_gap(params);

  LinearBasisMap map;
  map.source = params;
  map.lambda = QuadExt(Rat(1));

  if (gap == 0) {
    // conic: shear off the mixed term; the printed square root
    // sqrt(e2/e1) is rational on the rational cone, |e3/e1|.
    if (e1 != 0) {
      map.target = {e1, Rat(0), Rat(0), params.n};
      map.matrix = block_matrix(params.n, QuadExt(Rat(1)), QuadExt(Rat(0)),
                                QuadExt(e3 / e1), QuadExt(Rat(1)));
      map.construction = "conic shear p -> p + (eps3/eps1) x";
      // printed principal-root shear validates in the reverse reading
      // exactly when eps3/eps1 > 0
      map.reversed = e3 != 0 && rat_sign(e3) == rat_sign(e1);
    } else if (e2 != 0) {
      map.target = {Rat(0), e2, Rat(0), params.n};
      map.matrix = block_matrix(params.n, QuadExt(Rat(1)), QuadExt(e3 / e2),
                                QuadExt(Rat(0)), QuadExt(Rat(1)));
      map.construction = "conic shear x -> x + (eps3/eps2) p";
      map.reversed = e3 != 0;
    } else {
      throw std::logic_error("unreachable: zero triple already rejected");
    }
    return validated(map);
  }

  if (e1 == 0 || e2 == 0) {
    // line stratum (eps3 != 0 here): target (0,0,eps3); the printed
    // coefficient -eps2/(2 eps3) validates in the opposite direction.
    map.target = {Rat(0), Rat(0), e3, params.n};
    if (e1 == 0 && e2 == 0) {
      map.matrix = block_matrix(params.n, QuadExt(Rat(1)), QuadExt(Rat(0)), QuadExt(Rat(0)),
                                QuadExt(Rat(1)));
      map.construction = "identity (already in line normal form)";
      map.reversed = false;
    } else if (e1 == 0) {
      map.matrix = block_matrix(params.n, QuadExt(Rat(1)), QuadExt(Rat(0)),
                                QuadExt(e2 / (2 * e3)), QuadExt(Rat(1)));
      map.construction = "line shear p -> p + (eps2/(2 eps3)) x";
      map.reversed = true;
    } else {
      map.matrix = block_matrix(params.n, QuadExt(Rat(1)), QuadExt(e1 / (2 * e3)),
                                QuadExt(Rat(0)), QuadExt(Rat(1)));
      map.construction = "line shear x -> x + (eps1/(2 eps3)) p";
      map.reversed = true;
    }
    return validated(map);
  }

  // open stratum: target (e1, e2, 0)
  map.target = {e1, e2, Rat(0), params.n};
  if (e3 == 0) {
    map.matrix = block_matrix(params.n, QuadExt(Rat(1)), QuadExt(Rat(0)), QuadExt(Rat(0)),
                              QuadExt(Rat(1)));
    map.construction = "identity (already in open normal form)";
    return validated(map);
  }
  Rat w2 = 1 - e3 * e3 / (e1 * e2);
  if (w2 < 0)
    throw std::domain_error(
        "not real-representable: eps3^2 > eps1*eps2 with eps1*eps2 > 0");
  auto wopt = sqrt_rat(w2);
  if (!wopt) throw std::logic_error("unreachable: nonnegative radicand");
  QuadExt w = *wopt;
  // lambda as the open-stratum mixing coefficient (recorded; the bracket
  // check rules out the printed lambda-scaled transformation, so the map
  // itself is the triangular congruence of the W-block).
  map.lambda = QuadExt(2 * e1 * e2 / (e3 * e3)) * (QuadExt(Rat(1)) - w);
  map.matrix =
      block_matrix(params.n, QuadExt(Rat(1)), QuadExt(Rat(0)), QuadExt(e3 / e1), w);
  map.construction =
      "triangular congruence p -> (eps3/eps1) x + sqrt(1 - eps3^2/(eps1 eps2)) p";
  map.reversed = false;
  return validated(map);
}

LinearBasisMap scaling_map(const DeformationParams& params, const Rat& lambda) {
  if (lambda <= 0) throw std::invalid_argument("generator rescaling needs lambda > 0");
  auto s = sqrt_rat(lambda);
  LinearBasisMap map;
  map.source = {lambda * params.eps1, lambda * params.eps2, lambda * params.eps3, params.n};
  map.target = params;
  map.matrix = block_matrix(params.n, *s, QuadExt(Rat(0)), QuadExt(Rat(0)), *s);
  map.lambda = *s;
  map.construction = "generator rescaling (x,p) -> sqrt(lambda) (x,p), I -> lambda I";
  return map;
}

LinearBasisMap compose(const LinearBasisMap& second, const LinearBasisMap& first) {
  if (first.target.eps1 != second.source.eps1 || first.target.eps2 != second.source.eps2 ||
      first.target.eps3 != second.source.eps3 || first.target.n != second.source.n)
    throw std::invalid_argument("composition mismatch: first.target != second.source");
  const int d = first.matrix.rows;
  LinearBasisMap out;
  out.source = first.source;
  out.target = second.target;
  out.matrix = DenseMat<QuadExt>(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      QuadExt acc(Rat(0));
      for (int k = 0; k < d; ++k) {
        if (second.matrix(i, k).is_zero() || first.matrix(k, j).is_zero()) continue;
        acc += second.matrix(i, k) * first.matrix(k, j);
      }
      out.matrix(i, j) = acc;
    }
  out.lambda = second.lambda * first.lambda;
  out.construction = second.construction + " after " + first.construction;
  return out;
}

}  // namespace phasedef
