#pragma once

#include <random>
#include <vector>

#include "phasedef/orbit.hpp"

// Oriented 2-planes in R^{n+2}, their Plucker coordinates, decomposability
// residuals, and the plane <-> orbit-point dictionary.

namespace phasedef {

/// Ordered spanning pair; orientation comes from the ordering.
struct OrientedPlane {
  std::vector<double> u;
  std::vector<double> v;

  int ambient() const { return static_cast<int>(u.size()); }
};

/// Coefficients l_ab for 1 <= a < b <= m, lexicographic; aliases
/// x_i = l_{i,n+1}, p_i = l_{i,n+2}, I = l_{n+1,n+2} with m = n+2.
struct BivectorCoords {
  int ambient = 0;
  std::vector<double> l;

  int pair_index(int a, int b) const;  // a < b, 1-based
  double at(int a, int b) const;       // antisymmetric access
  double iz() const { return at(ambient - 1, ambient); }
};

/// l_ab = u_a v_b - u_b v_a. With normalize, the spanning pair itself is
/// rescaled so I = +-1 (sign preserved); requires I != 0.
BivectorCoords plucker(const OrientedPlane& plane, bool normalize = false);

/// Max violation of l_{ab} l_{cd} - l_{ac} l_{bd} + l_{ad} l_{bc} over all
/// index quadruples a < b < c < d.
double plucker_residuals(const BivectorCoords& b);

/// Reconstruct an oriented plane from decomposable coordinates on the
/// chart |I| > 0; roundtrips through plucker(., normalize=true) with the
/// same sign of I.
OrientedPlane point_to_plane(const BivectorCoords& b, double residual_tol = 1e-8);

/// Orientation-preserving Gram-Schmidt; unit-norm wedge representative.
OrientedPlane orthonormalize(const OrientedPlane& plane);

OrientedPlane random_plane(std::mt19937_64& rng, int ambient);

/// Appendix-style relabeling of bivector coordinates into a dual point of
/// the family (ambient = n+2).
DualPoint bivector_to_dual(const BivectorCoords& b, const DeformationParams& params);

}  // namespace phasedef
