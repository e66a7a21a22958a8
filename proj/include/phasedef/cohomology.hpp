#pragma once

#include <map>
#include <string>
#include <vector>

#include "phasedef/exact_linalg.hpp"
#include "phasedef/lie_core.hpp"

// Chevalley-Eilenberg complexes C^k(h, g) for a subalgebra h of g acting on
// g through the adjoint representation, with exact coboundary matrices,
// cohomology dimensions, and invariant-cocycle extraction.

namespace phasedef {

/// Frozen basis of C^k(h, g): strictly increasing k-tuples of h-positions
/// (lexicographic), inner index the g-target. Column of (tuple, target) is
/// tuple_rank * dim(g) + target.
struct CochainIndexer {
  int k = 0;
  int module_dim = 0;
  std::vector<int> sub;                   // h-basis as indices into g
  std::vector<std::vector<int>> tuples;   // increasing k-tuples of h-positions
  std::map<std::vector<int>, int> tuple_rank;

  int dim() const { return static_cast<int>(tuples.size()) * module_dim; }
  int index(const std::vector<int>& sorted_tuple, int target) const;
  /// Index with the antisymmetry sign for an arbitrary-order tuple;
  /// sign 0 when the tuple has a repeat.
  std::pair<int, int> index_signed(std::vector<int> tuple, int target) const;
  std::string describe(int flat_index, const StructureConstants& g) const;
};

CochainIndexer cochain_indexer(const StructureConstants& g, const std::vector<int>& sub, int k);

/// An antisymmetric k-linear map wedge^k h -> g in the frozen basis.
struct CochainMap {
  int degree = 0;
  std::vector<int> sub;   // h-basis indices into g
  SparseVec coeffs;       // over the CochainIndexer basis
};

struct CohomologyResult {
  int degree = 0;
  int dimension = 0;
  int rank_in = 0;   // rank of d_{k-1}
  int rank_out = 0;  // rank of d_k
  std::vector<CochainMap> representatives;  // RREF-canonical, reduced mod coboundaries
};

struct CoboundaryMatrix {
  int rows = 0, cols = 0;
  std::vector<SparseVec> row_vecs;  // rows over C^{k+1}, columns over C^k
};

bool is_subalgebra(const StructureConstants& g, const std::vector<int>& sub);
bool is_ideal(const StructureConstants& g, const std::vector<int>& sub);

/// Matrix of d_k : C^k(h,g) -> C^{k+1}(h,g). Requires h to be an ideal.
CoboundaryMatrix coboundary_matrix(const StructureConstants& g, const std::vector<int>& h,
                                   int k);

/// Same matrix for any subalgebra (no ideal requirement); used for the
/// Whitehead-type checks on the o(n) summand.
CoboundaryMatrix coboundary_matrix_subalgebra(const StructureConstants& g,
                                              const std::vector<int>& sub, int k);

/// Full H^k(g, g), adjoint coefficients, exact.
CohomologyResult cohomology_dim(const StructureConstants& g, int k);

/// H^k(h, g) for a subalgebra h (adjoint action restricted); exact.
CohomologyResult subalgebra_cohomology(const StructureConstants& g, const std::vector<int>& sub,
                                       int k);

/// H^2(h,g)^k: 2-cocycles on the ideal h whose transform under each
/// generator of the complementary subalgebra k_part is a coboundary,
/// modulo coboundaries.
CohomologyResult invariant_cocycles(const StructureConstants& g, const std::vector<int>& h,
                                    const std::vector<int>& k_part);

struct HsReport {
  int dim_full = 0;       // dim H^2(g, g)
  int dim_invariant = 0;  // dim H^2(h, g)^k
  bool equal = false;
};

HsReport hochschild_serre_check(const StructureConstants& g, const std::vector<int>& h,
                                const std::vector<int>& k_part);

/// Action of a k_part generator on 2-cochains:
/// (kappa . f)(u, v) = [kappa, f(u,v)] - f([kappa,u], v) - f(u, [kappa,v]).
/// Rows/columns over the degree-2 indexer.
std::vector<SparseVec> cocycle_action_matrix(const StructureConstants& g,
                                             const CochainIndexer& deg2, int kappa);

/// True iff the 2-cochain lies in the image of d_1 (exact rank test).
bool is_coboundary(const StructureConstants& g, const std::vector<int>& h,
                   const SparseVec& cochain);

/// The 2-cochain on h recording the bracket-family direction
/// d/d eps_which at eps = 0 (which in {1,2,3}). Its x/p-pair values are
/// the generating cocycles f1, f2, f3; the central-direction values are
/// the components that make them cocycles of the pair (h, g).
SparseVec deformation_direction_cocycle(const StructureConstants& g0,
                                        const std::vector<int>& h, int which);

/// Convenience: positions of all labels of a kind (e.g. the o(n) block or
/// the translation ideal) in the frozen basis order.
std::vector<int> labels_of_kind(const StructureConstants& g, std::initializer_list<LabelKind> kinds);

}  // namespace phasedef
