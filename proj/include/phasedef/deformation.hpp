#pragma once

#include <array>
#include <optional>
#include <string>

#include "phasedef/lie_core.hpp"
#include "phasedef/quadratic.hpp"

// Stratified classification of the deformed family over C and R, explicit
// normal-form basis maps, and exact isomorphism verification.

namespace phasedef {

enum class ComplexStratum { U, Conic, LLine };
enum class RealStratum { Rpp, Rpm, Rmm, Cplus, Cminus, L, Zero };

std::string stratum_str(ComplexStratum s);
std::string stratum_str(RealStratum s);

struct ComplexClassReport {
  ComplexStratum stratum;
  std::string paper_label;
  int b_rank = 0;        // rank of B_eps over Q
  bool conflict = false; // paper label vs quadratic-form rank disagree
  std::string conflict_note;
};

struct IsoClassReport {
  RealStratum stratum;
  std::string paper_label;    // label from the real-forms table
  std::string derived_label;  // label implied by the B_eps signature
  std::array<int, 3> b_signature{};        // (positives, negatives, nulls), exact
  std::array<int, 3> killing_signature{};  // numeric eigendecomposition
  int radical_dim = 0;                     // trace-form nullity, exact
  bool conflict = false;
  std::string conflict_note;
};

/// Stratum over C with the stratification-table label; complex "derived"
/// invariant is the rank of B_eps. Zero triple is a parameter error.
ComplexClassReport classify_complex(const DeformationParams& params);

/// Real stratum, table label, derived invariants, conflict flag.
IsoClassReport classify_real(const DeformationParams& params);

/// Exact signature of B_eps = diag(1..1) + [[e1,e3],[e3,e2]] by 2x2
/// trace/determinant analysis.
std::array<int, 3> b_form_signature(const DeformationParams& params);

/// Invertible basis map between two members of the family, entries in
/// Q(sqrt(d)). Convention: phi(basis_j of source) = sum_i m(i,j) basis_i
/// of target.
struct LinearBasisMap {
  DeformationParams source;  // validated domain of the map
  DeformationParams target;  // validated codomain
  DenseMat<QuadExt> matrix;
  QuadExt lambda;            // mixing coefficient of the open-stratum map
  bool reversed = false;     // true if only the opposite of the printed
                             // direction passed the bracket check
  std::string construction;  // which construction produced the map
};

/// Max-magnitude coefficient of phi([u,v]_A) - [phi(u), phi(v)]_B over all
/// basis pairs; exactly 0 iff phi is a homomorphism. Invertibility is a
/// separate check (map_invertible).
Rat is_isomorphism(const LinearBasisMap& map, const StructureConstants& A,
                   const StructureConstants& B);

bool map_invertible(const LinearBasisMap& map);

/// Normal-form map for the stratum of params:
///  - open stratum: target (e1, e2, 0), needs sqrt(1 - e3^2/(e1 e2));
///    fails with a domain_error when e1 e2 > 0 and e3^2 > e1 e2
///    (not real-representable);
///  - conic: target (e1, 0, 0), or (0, e2, 0) when e1 = 0;
///  - line stratum: target (0, 0, e3).
/// The returned map always has is_isomorphism residual exactly 0.
LinearBasisMap normal_form_map(const DeformationParams& params);

/// Generator-rescaling isomorphism g(lambda * eps) -> g(eps), entries in
/// Q(sqrt(lambda)); lambda must be positive.
LinearBasisMap scaling_map(const DeformationParams& params, const Rat& lambda);

LinearBasisMap compose(const LinearBasisMap& second, const LinearBasisMap& first);

}  // namespace phasedef
