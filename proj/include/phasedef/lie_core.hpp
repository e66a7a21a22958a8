#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "phasedef/exact_linalg.hpp"
#include "phasedef/rational.hpp"

// Finite-dimensional Lie algebras by structure constants over Q, with the
// builders for the orthogonal, Euclidean and Heisenberg families, the
// three-parameter deformed family, and the wedge-square algebra of a
// symmetric bilinear form.

namespace phasedef {

enum class LabelKind { L, X, P, Iz, E };

/// Basis label: L(i,j) with i<j, X(i), P(i), E(i), or the central Iz.
struct BasisLabel {
  LabelKind kind;
  int i = 0;
  int j = 0;

  static BasisLabel l(int i, int j) { return {LabelKind::L, i, j}; }
  static BasisLabel x(int i) { return {LabelKind::X, i, 0}; }
  static BasisLabel p(int i) { return {LabelKind::P, i, 0}; }
  static BasisLabel iz() { return {LabelKind::Iz, 0, 0}; }
  static BasisLabel e(int i) { return {LabelKind::E, i, 0}; }

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

std::string label_str(const BasisLabel& lb);
BasisLabel label_parse(const std::string& s);

/// L(j,i) with j > i normalizes to (L(i,j), sign -1). Identity on other
/// kinds. L(i,i) is rejected.
std::pair<BasisLabel, int> normalize_label(const BasisLabel& lb);

/// Deformation parameters (eps1, eps2, eps3) for the family g_n(eps).
struct DeformationParams {
  Rat eps1, eps2, eps3;
  int n = 3;

  bool is_zero() const { return eps1 == 0 && eps2 == 0 && eps3 == 0; }
  std::array<double, 3> as_double() const {
    return {eps1.get_d(), eps2.get_d(), eps3.get_d()};
  }
};

/// Sparse bracket table over Q. Stored only for basis pairs a < b;
/// antisymmetry is by construction.
class StructureConstants {
 public:
  int n = 0;  // family parameter where applicable, 0 otherwise
  std::vector<BasisLabel> labels;
  std::map<std::pair<int, int>, SparseVec> table;  // (a,b) with a<b -> terms

  int dim() const { return static_cast<int>(labels.size()); }
  int index_of(const BasisLabel& lb) const;  // -1 if absent

  void set_bracket(int a, int b, SparseVec terms);
  void add_term(int a, int b, int c, const Rat& coeff);

  /// [basis_a, basis_b] as a sparse coefficient vector.
  SparseVec bracket_basis(int a, int b) const;

  /// Bilinear extension to coefficient vectors (lengths must equal dim).
  std::vector<Rat> bracket(const std::vector<Rat>& u, const std::vector<Rat>& v) const;

  /// Max |coefficient| of [[a,b],c] + [[b,c],a] + [[c,a],b] over all basis
  /// triples; exactly 0 iff the table is a Lie algebra.
  Rat jacobi_residual() const;

  /// ad_a as a dense dim x dim matrix (column k = [a, e_k]).
  std::vector<std::vector<Rat>> ad_matrix(int a) const;

  /// Trace form T(a,b) = tr(ad_a ad_b), exact.
  std::vector<std::vector<Rat>> trace_form() const;
};

enum class StandardKind { Orthogonal, Euclidean, Heisenberg, GN };

/// o(n) / e(n) = o(n) |x R^n / h_n / g_n = o(n) |x h_n, on the frozen basis
/// order (l_ij lexicographic, then translations/x/p, then the center).
StructureConstants build_standard(StandardKind kind, int n);

/// The deformed family g_n(eps1, eps2, eps3).
StructureConstants build_deformed(const DeformationParams& params);

/// g_n with the center collapsed: o(n) |x R^{2n}. Checks that the label is
/// actually central before removing it.
StructureConstants quotient_by_central(const StructureConstants& A, const BasisLabel& center);

/// Symmetric bilinear form on R^m with the distinguished plane spanned by
/// the last two basis vectors.
struct BilinearForm {
  int size = 0;
  std::vector<std::vector<Rat>> entries;  // symmetric m x m

  static BilinearForm diagonal(const std::vector<Rat>& diag);
  /// diag(1,...,1) on the first n slots, with the 2x2 block
  /// [[eps1, eps3], [eps3, eps2]] on the distinguished plane.
  static BilinearForm from_params(const DeformationParams& params);
  bool is_symmetric() const;
};

/// Lie algebra on wedge^2 R^{n+2} induced by the form:
/// [a^b, c^d] = (a,c) b^d - (b,c) a^d + (b,d) a^c - (a,d) b^c,
/// relabeled v_i^v_j -> l_ij, v_i^v_{n+1} -> x_i, v_i^v_{n+2} -> p_i,
/// v_{n+1}^v_{n+2} -> I.
StructureConstants build_from_form(const BilinearForm& B);

struct Signature {
  int positives = 0, negatives = 0, nulls = 0;
};

/// Signature of the trace form by symmetric eigendecomposition;
/// eigenvalues below rel_threshold * max|eigenvalue| count as null.
Signature killing_signature(const StructureConstants& A, double rel_threshold = 1e-9);

/// Exact nullity of the trace form (cross-check for the eigendecomposition
/// nulls; also the "radical dimension" reported by classification).
int trace_form_nullity(const StructureConstants& A);

bool tables_equal(const StructureConstants& A, const StructureConstants& B);

nlohmann::ordered_json structure_to_json(const StructureConstants& A);
StructureConstants structure_from_json(const nlohmann::ordered_json& j);

}  // namespace phasedef
