#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "phasedef/lie_core.hpp"
#include "phasedef/polynomial.hpp"

// Lie-Poisson mechanics on the dual of the deformed family: Casimir
// discovery, the special 2n-dimensional orbits, the gnomonic chart,
// free-motion Hamiltonians, momentum maps, and monitored RK4 flows.

namespace phasedef {

/// Centralized floating tolerances.
struct Tolerances {
  double residual = 1e-10;
  double drift = 1e-8;
  double rank_rel = 1e-9;
};

/// Index bookkeeping for the frozen dual-coordinate order
/// (l_ij lexicographic, x_1..x_n, p_1..p_n, I).
struct CoordLayout {
  int n = 0;
  int lcount = 0;
  int dim = 0;

  explicit CoordLayout(int n_);
  int l_index(int i, int j) const;  // i < j, 1-based
  int l_sign(int i, int j) const { return i < j ? 1 : -1; }
  int x_index(int i) const { return lcount + i - 1; }
  int p_index(int i) const { return lcount + n + i - 1; }
  int iz_index() const { return dim - 1; }
};

/// A point of the dual space in the frozen coordinate order.
struct DualPoint {
  DeformationParams params;
  std::vector<double> coords;

  double iz() const;
  double x(int i) const;
  double p(int i) const;
  double l(int i, int j) const;
};

DualPoint make_dual_point(const DeformationParams& params, double iz,
                          const std::vector<double>& x, const std::vector<double>& p,
                          const std::vector<double>& l);

/// Homogeneous quadratic with identically vanishing bracket against every
/// coordinate function.
struct CasimirQuadratic {
  Poly poly;
};

/// Exact nullspace of the centrality system on quadratic-coefficient
/// space. Each element has centrality residual exactly zero. First entry
/// is normalized so the I^2 coefficient is 1 when present.
std::vector<CasimirQuadratic> quadratic_casimirs(const DeformationParams& params);

/// Max |coefficient| over the polynomials {K, xi_a}; exactly 0 for
/// everything quadratic_casimirs returns.
Rat centrality_residual(const StructureConstants& A, const Poly& K);

/// The derived orbit Casimir I^2 + e2 x^2 + e1 p^2 - 2 e3 xp
/// + (e1 e2 - e3^2) l^2, and the coefficient pattern of the printed
/// convention (e1 x^2 + e2 p^2) for the WARN-level comparison.
Poly derived_orbit_casimir(const DeformationParams& params);
Poly printed_convention_casimir(const DeformationParams& params);

struct OrbitSpec {
  DeformationParams params;
  Rat level = Rat(1);        // orbit value of the normalized Casimir (r^2)
  CasimirQuadratic casimir;  // the derived central quadratic, I^2 coeff 1
};

OrbitSpec make_orbit_spec(const DeformationParams& params, const Rat& level = Rat(1));

struct OrbitResiduals {
  double casimir = 0;      // K(point) - r^2
  double angular = 0;      // max |I l_ij - x_i p_j + x_j p_i|
  double plucker_aux = 0;  // max over the auxiliary triples
};

OrbitResiduals orbit_residuals(const OrbitSpec& spec, const DualPoint& point);

/// Gnomonic chart on the family (0, e2, 0).
struct ChartPoint {
  std::vector<double> q;
  std::vector<double> p;
};

/// Reconstruct the orbit point at level r = 1:
/// I = 1/sqrt(1 + e2 q^2) (sign by branch), x_i = I q_i,
/// l_ij = q_i p_j - q_j p_i. Requires eps1 = eps3 = 0 and 1 + e2 q^2 > 0.
DualPoint chart_to_point(const DeformationParams& params, const ChartPoint& chart,
                         bool positive_branch = true);

/// theta_i = p_i - e2 (q.p) q_i / (1 + e2 q^2): the conjugated momenta of
/// the chart (Darboux data).
std::vector<double> liouville_form(double eps2, const ChartPoint& chart);

/// omega = -d theta on the chart, ordered (dq_1..dq_n, dp_1..dp_n).
Eigen::MatrixXd symplectic_matrix(double eps2, const ChartPoint& chart);

/// Chart Poisson matrix {(q,p)_A, (q,p)_B} computed from the coordinate
/// table through the quotient rule: {q_i,q_j} = 0,
/// {q_i,p_j} = delta_ij + e2 q_i q_j, {p_i,p_j} = e2 (q_i p_j - q_j p_i).
Eigen::MatrixXd chart_poisson_matrix(double eps2, const ChartPoint& chart);

/// H0 = (p^2 + e2 l^2)/2 evaluated at the point.
double free_hamiltonian(const DeformationParams& params, const DualPoint& point);
Poly free_hamiltonian_poly(const DeformationParams& params);

struct Trajectory {
  std::vector<double> times;
  std::vector<DualPoint> states;
  std::map<std::string, double> drift;  // per-invariant max |f(t) - f(0)|
};

/// Classical fixed-step RK4 on xi_dot_a = {xi_a, H}; drift is recorded for
/// H, the derived Casimir, the angular/auxiliary residuals, and (on the
/// family eps1 = eps3 = 0) every component of mu0.
Trajectory hamiltonian_flow(const DeformationParams& params, const Poly& H,
                            const DualPoint& point0, double T, double dt);

struct MomentumValue {
  std::vector<double> lambda;  // l-block, verbatim
  std::vector<double> mu0_l;   // l-part of mu0
  std::vector<double> mu0_p;   // p-part of mu0
  double norm_sq = 0;          // p^2 + e2 l^2
};

MomentumValue momentum_maps(const DeformationParams& params, const DualPoint& point);

/// Numeric rank of the Poisson bivector Pi_ab(xi) = sum_c c_ab^c xi_c.
int poisson_rank(const DeformationParams& params, const DualPoint& point,
                 double rank_rel = 1e-9);

struct DegenerationReport {
  std::string base_variables;        // which coordinates carry the base quadric
  double base_residual = 0;          // max |K(point) - level| over the sample
  int fiber_dim = 0;                 // kernel of the base projection on the tangent
  std::vector<int> component_signs;  // sign of I per sample point
};

/// Structure of the orbit over a cone point (eps3^2 = eps1 eps2 exactly).
DegenerationReport degeneration_structure(const OrbitSpec& spec,
                                          const std::vector<DualPoint>& sample);

/// At eps = 0 the derived Casimir is I^2; level 1 gives exactly the two
/// components I = +1 and I = -1.
std::vector<Rat> flat_orbit_components(int n);

/// Trajectory CSV: t, I, x_1..x_n, p_1..p_n, l_12.., H0, K,
/// max_angular_residual; one row per recorded step.
std::string trajectory_csv(const Trajectory& traj, int subsample = 1);

}  // namespace phasedef
