#include "phasedef/orbit.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phasedef {

CoordLayout::CoordLayout(int n_) : n(n_), lcount(n_ * (n_ - 1) / 2), dim(lcount + 2 * n_ + 1) {}

int CoordLayout::l_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // lexicographic rank of (i,j), 1 <= i < j <= n
  return (i - 1) * n - (i - 1) * i / 2 + (j - i - 1);
}

double DualPoint::iz() const { return coords.back(); }
double DualPoint::x(int i) const { return coords[CoordLayout(params.n).x_index(i)]; }
double DualPoint::p(int i) const { return coords[CoordLayout(params.n).p_index(i)]; }
double DualPoint::l(int i, int j) const {
  CoordLayout lay(params.n);
  return lay.l_sign(i, j) * coords[lay.l_index(i, j)];
}

DualPoint make_dual_point(const DeformationParams& params, double iz,
                          const std::vector<double>& x, const std::vector<double>& p,
                          const std::vector<double>& l) {
  CoordLayout lay(params.n);
  DualPoint pt;
  pt.params = params;
  pt.coords.assign(lay.dim, 0.0);
  if (static_cast<int>(x.size()) != lay.n || static_cast<int>(p.size()) != lay.n ||
      static_cast<int>(l.size()) != lay.lcount)
    throw std::invalid_argument("dual point block sizes do not match n");
  for (int k = 0; k < lay.lcount; ++k) pt.coords[k] = l[k];
  for (int i = 1; i <= lay.n; ++i) {
    pt.coords[lay.x_index(i)] = x[i - 1];
    pt.coords[lay.p_index(i)] = p[i - 1];
  }
  pt.coords[lay.iz_index()] = iz;
  return pt;
}

namespace {

Poly quadratic_monomial(int dim, int a, int b) {
  Monomial m(dim, 0);
  m[a] += 1;
  m[b] += 1;
  Poly p = Poly::zero(dim);
  p.terms[m] = Rat(1);
  return p;
}

Poly sum_of_squares(const CoordLayout& lay, char block) {
  Poly out = Poly::zero(lay.dim);
  if (block == 'x')
    for (int i = 1; i <= lay.n; ++i)
      out = out + quadratic_monomial(lay.dim, lay.x_index(i), lay.x_index(i));
  else if (block == 'p')
    for (int i = 1; i <= lay.n; ++i)
      out = out + quadratic_monomial(lay.dim, lay.p_index(i), lay.p_index(i));
  else if (block == 'l')
    for (int k = 0; k < lay.lcount; ++k) out = out + quadratic_monomial(lay.dim, k, k);
  return out;
}

Poly xp_pairing(const CoordLayout& lay) {
  Poly out = Poly::zero(lay.dim);
  for (int i = 1; i <= lay.n; ++i)
    out = out + quadratic_monomial(lay.dim, lay.x_index(i), lay.p_index(i));
  return out;
}

}  // namespace

Poly derived_orbit_casimir(const DeformationParams& params) {
  CoordLayout lay(params.n);
  Poly k = quadratic_monomial(lay.dim, lay.iz_index(), lay.iz_index());
  k = k + sum_of_squares(lay, 'x').scaled(params.eps2);
  k = k + sum_of_squares(lay, 'p').scaled(params.eps1);
  k = k + xp_pairing(lay).scaled(-2 * params.eps3);
  k = k + sum_of_squares(lay, 'l').scaled(params.eps1 * params.eps2 - params.eps3 * params.eps3);
  return k;
}

Poly printed_convention_casimir(const DeformationParams& params) {
  CoordLayout lay(params.n);
  Poly k = quadratic_monomial(lay.dim, lay.iz_index(), lay.iz_index());
  k = k + sum_of_squares(lay, 'x').scaled(params.eps1);
  k = k + sum_of_squares(lay, 'p').scaled(params.eps2);
  k = k + xp_pairing(lay).scaled(-2 * params.eps3);
  k = k + sum_of_squares(lay, 'l').scaled(params.eps1 * params.eps2 - params.eps3 * params.eps3);
  return k;
}

Rat centrality_residual(const StructureConstants& A, const Poly& K) {
  Rat worst(0);
  for (int a = 0; a < A.dim(); ++a) {
    Poly br = poisson_bracket(A, K, Poly::coordinate(A.dim(), a));
    for (const auto& [m, c] : br.terms) {
      (void)m;
      Rat mag = rat_abs(c);
      if (mag > worst) worst = mag;
    }
  }
  return worst;
}

std::vector<CasimirQuadratic> quadratic_casimirs(const DeformationParams& params) {
  StructureConstants A = build_deformed(params);
  const int d = A.dim();

  // unknown K = sum over quadratic monomials; centrality {K, xi_a} = 0 is
  // linear in the coefficients
  std::vector<std::pair<int, int>> monos;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) monos.emplace_back(a, b);
  std::map<std::pair<int, int>, int> mono_rank;
  for (size_t i = 0; i < monos.size(); ++i) mono_rank[monos[i]] = static_cast<int>(i);

  // rows indexed by (coordinate a, resulting quadratic monomial)
  std::map<std::pair<int, Monomial>, SparseVec> rows;
  for (size_t col = 0; col < monos.size(); ++col) {
    Poly km = quadratic_monomial(d, monos[col].first, monos[col].second);
    for (int a = 0; a < d; ++a) {
      Poly br = poisson_bracket(A, km, Poly::coordinate(d, a));
      for (const auto& [m, c] : br.terms)
        rows[{a, m}].emplace_back(static_cast<int>(col), c);
    }
  }
  std::vector<SparseVec> system;
  system.reserve(rows.size());
  for (auto& [key, row] : rows) {
    (void)key;
    system.push_back(std::move(row));
  }
  auto kernel = sparse_nullspace(system, static_cast<int>(monos.size()));

  CoordLayout lay(params.n);
  int iz2 = mono_rank[{lay.iz_index(), lay.iz_index()}];
  std::vector<CasimirQuadratic> out;
  for (auto& vec : kernel) {
    Rat iz_coeff = sparse_get(vec, iz2);
    if (iz_coeff != 0) sparse_scale(vec, 1 / iz_coeff);
    Poly k = Poly::zero(d);
    for (const auto& [col, c] : vec)
      k = k + quadratic_monomial(d, monos[col].first, monos[col].second).scaled(c);
    out.push_back({std::move(k)});
  }
  // normalized representative first
  std::stable_sort(out.begin(), out.end(), [&](const CasimirQuadratic& a,
                                               const CasimirQuadratic& b) {
    Monomial m(d, 0);
    m[lay.iz_index()] = 2;
    bool ha = a.poly.terms.count(m), hb = b.poly.terms.count(m);
    return ha > hb;
  });
  return out;
}

OrbitSpec make_orbit_spec(const DeformationParams& params, const Rat& level) {
  if (level <= 0) throw std::invalid_argument("orbit level must be positive");
  OrbitSpec spec;
  spec.params = params;
  spec.level = level;
  auto cas = quadratic_casimirs(params);
  if (cas.empty()) throw std::logic_error("no quadratic Casimir found");
  spec.casimir = cas.front();
  return spec;
}

OrbitResiduals orbit_residuals(const OrbitSpec& spec, const DualPoint& point) {
  if (point.params.n != spec.params.n)
    throw std::invalid_argument("point dimension does not match the orbit spec");
  const int n = spec.params.n;
  OrbitResiduals res;
  res.casimir = spec.casimir.poly.eval(point.coords) - spec.level.get_d();

  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      double v = point.iz() * point.l(i, j) - point.x(i) * point.p(j) + point.x(j) * point.p(i);
      res.angular = std::max(res.angular, std::abs(v));
    }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) {
        double vx = point.l(i, j) * point.x(k) - point.l(i, k) * point.x(j) +
                    point.l(j, k) * point.x(i);
        double vp = point.l(i, j) * point.p(k) - point.l(i, k) * point.p(j) +
                    point.l(j, k) * point.p(i);
        res.plucker_aux = std::max({res.plucker_aux, std::abs(vx), std::abs(vp)});
      }
  return res;
}

DualPoint chart_to_point(const DeformationParams& params, const ChartPoint& chart,
                         bool positive_branch) {
  if (params.eps1 != 0 || params.eps3 != 0)
    throw std::invalid_argument("gnomonic chart lives on the family (0, eps2, 0)");
  const int n = params.n;
  if (static_cast<int>(chart.q.size()) != n || static_cast<int>(chart.p.size()) != n)
    throw std::invalid_argument("chart block sizes do not match n");
  double e2 = params.eps2.get_d();
  double q2 = 0;
  for (double qi : chart.q) q2 += qi * qi;
  double u = 1 + e2 * q2;
  if (u <= 0) throw std::domain_error("chart-domain violation: 1 + eps2 q^2 <= 0");
  double iz = 1.0 / std::sqrt(u);
  if (!positive_branch) iz = -iz;

  CoordLayout lay(n);
  std::vector<double> x(n), l(lay.lcount, 0.0);
  for (int i = 0; i < n; ++i) x[i] = iz * chart.q[i];
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      l[lay.l_index(i, j)] = chart.q[i - 1] * chart.p[j - 1] - chart.q[j - 1] * chart.p[i - 1];
  return make_dual_point(params, iz, x, chart.p, l);
}

std::vector<double> liouville_form(double eps2, const ChartPoint& chart) {
  const int n = static_cast<int>(chart.q.size());
  double q2 = 0, qp = 0;
  for (int i = 0; i < n; ++i) {
    q2 += chart.q[i] * chart.q[i];
    qp += chart.q[i] * chart.p[i];
  }
  double u = 1 + eps2 * q2;
  if (u <= 0) throw std::domain_error("chart-domain violation: 1 + eps2 q^2 <= 0");
  std::vector<double> theta(n);
  for (int i = 0; i < n; ++i) theta[i] = chart.p[i] - eps2 * qp * chart.q[i] / u;
  return theta;
}

Eigen::MatrixXd symplectic_matrix(double eps2, const ChartPoint& chart) {
  const int n = static_cast<int>(chart.q.size());
  double q2 = 0, qp = 0;
  for (int i = 0; i < n; ++i) {
    q2 += chart.q[i] * chart.q[i];
    qp += chart.q[i] * chart.p[i];
  }
  double u = 1 + eps2 * q2;
  if (u <= 0) throw std::domain_error("chart-domain violation: 1 + eps2 q^2 <= 0");

  // theta_i = p_i - eps2 qp q_i / u
  // dtheta_i/dq_j = -eps2 (p_j q_i + qp delta_ij) / u + 2 eps2^2 qp q_i q_j / u^2
  // dtheta_i/dp_j = delta_ij - eps2 q_j q_i / u
  Eigen::MatrixXd dq(n, n), dp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double delta = i == j ? 1.0 : 0.0;
      dq(i, j) = -eps2 * (chart.p[j] * chart.q[i] + qp * delta) / u +
                 2 * eps2 * eps2 * qp * chart.q[i] * chart.q[j] / (u * u);
      dp(i, j) = delta - eps2 * chart.q[j] * chart.q[i] / u;
    }

  // omega = -d theta with basis (dq, dp):
  // omega(dq_a, dq_b) = dtheta_a/dq_b - dtheta_b/dq_a
  // omega(dq_a, dp_b) = dtheta_a/dp_b ; omega(dp_a, dq_b) = -dtheta_b/dp_a
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      omega(a, b) = dq(a, b) - dq(b, a);
      omega(a, n + b) = dp(a, b);
      omega(n + b, a) = -dp(a, b);
    }
  return omega;
}

Eigen::MatrixXd chart_poisson_matrix(double eps2, const ChartPoint& chart) {
  const int n = static_cast<int>(chart.q.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double delta = i == j ? 1.0 : 0.0;
      double qipj = delta + eps2 * chart.q[i] * chart.q[j];
      P(i, n + j) = qipj;
      P(n + j, i) = -qipj;
      double pipj = eps2 * (chart.q[i] * chart.p[j] - chart.q[j] * chart.p[i]);
      P(n + i, n + j) = pipj;
    }
  return P;
}

double free_hamiltonian(const DeformationParams& params, const DualPoint& point) {
  const int n = params.n;
  double p2 = 0, l2 = 0;
  for (int i = 1; i <= n; ++i) p2 += point.p(i) * point.p(i);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) l2 += point.l(i, j) * point.l(i, j);
  return 0.5 * (p2 + params.eps2.get_d() * l2);
}

Poly free_hamiltonian_poly(const DeformationParams& params) {
  CoordLayout lay(params.n);
  Poly h = sum_of_squares(lay, 'p').scaled(Rat(1, 2));
  h = h + sum_of_squares(lay, 'l').scaled(params.eps2 / 2);
  return h;
}

namespace {

std::vector<long double> poisson_vector_field(const StructureConstants& A,
                                              const std::vector<Poly>& gradH,
                                              const std::vector<long double>& state) {
  const int d = A.dim();
  std::vector<long double> grad(d);
  for (int v = 0; v < d; ++v) grad[v] = gradH[v].eval_ld(state);
  std::vector<long double> deriv(d, 0.0L);
  for (const auto& [pair, terms] : A.table) {
    auto [a, b] = pair;
    long double pi_ab = 0;
    for (const auto& [c, coeff] : terms)
      pi_ab += static_cast<long double>(coeff.get_d()) * state[c];
    deriv[a] += pi_ab * grad[b];
    deriv[b] -= pi_ab * grad[a];
  }
  return deriv;
}

}  // namespace

Trajectory hamiltonian_flow(const DeformationParams& params, const Poly& H,
                            const DualPoint& point0, double T, double dt) {
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  StructureConstants A = build_deformed(params);
  const int d = A.dim();
  if (static_cast<int>(point0.coords.size()) != d)
    throw std::invalid_argument("initial point does not match the algebra dimension");

  std::vector<Poly> gradH(d, Poly::zero(d));
  for (int v = 0; v < d; ++v) gradH[v] = H.partial(v);

  OrbitSpec spec = make_orbit_spec(params);
  // reference level from the initial point, so drift is measured against
  // the actual starting leaf
  long double k0 = spec.casimir.poly.eval_ld(point0.coords);
  long double h0 = H.eval_ld(point0.coords);

  const bool flat_family = params.eps1 == 0 && params.eps3 == 0;
  CoordLayout lay(params.n);

  Trajectory traj;
  const int steps = static_cast<int>(std::llround(T / dt));
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  // the state is carried in extended precision; emitted points are double
  std::vector<long double> state(point0.coords.begin(), point0.coords.end());
  double max_dh = 0, max_dk = 0, max_ang = 0, max_plk = 0;
  std::vector<long double> mu_ref = state;
  std::vector<double> mu_drift(d, 0.0);

  auto record = [&](double t, const std::vector<long double>& s) {
    DualPoint pt;
    pt.params = params;
    pt.coords.assign(s.begin(), s.end());
    max_dh = std::max(max_dh, static_cast<double>(fabsl(H.eval_ld(s) - h0)));
    max_dk = std::max(max_dk,
                      static_cast<double>(fabsl(spec.casimir.poly.eval_ld(s) - k0)));
    OrbitResiduals res = orbit_residuals(spec, pt);
    max_ang = std::max(max_ang, res.angular);
    max_plk = std::max(max_plk, res.plucker_aux);
    if (flat_family)
      for (int c = 0; c < d; ++c)
        if (c < lay.lcount || (c >= lay.p_index(1) && c < lay.iz_index()))
          mu_drift[c] =
              std::max(mu_drift[c], static_cast<double>(fabsl(s[c] - mu_ref[c])));
    traj.times.push_back(t);
    traj.states.push_back(std::move(pt));
  };

  record(0.0, state);
  const long double dtl = dt;
  std::vector<long double> k1, k2, k3, k4, tmp(d);
  for (int s = 1; s <= steps; ++s) {
    k1 = poisson_vector_field(A, gradH, state);
    for (int i = 0; i < d; ++i) tmp[i] = state[i] + 0.5L * dtl * k1[i];
    k2 = poisson_vector_field(A, gradH, tmp);
    for (int i = 0; i < d; ++i) tmp[i] = state[i] + 0.5L * dtl * k2[i];
    k3 = poisson_vector_field(A, gradH, tmp);
    for (int i = 0; i < d; ++i) tmp[i] = state[i] + dtl * k3[i];
    k4 = poisson_vector_field(A, gradH, tmp);
    for (int i = 0; i < d; ++i)
      state[i] += dtl / 6.0L * (k1[i] + 2.0L * k2[i] + 2.0L * k3[i] + k4[i]);
    record(s * dt, state);
  }

  traj.drift["H"] = max_dh;
  traj.drift["K"] = max_dk;
  traj.drift["angular"] = max_ang;
  traj.drift["plucker"] = max_plk;
  if (flat_family) {
    for (int i = 1; i <= params.n; ++i)
      for (int j = i + 1; j <= params.n; ++j)
        traj.drift["mu0:l_" + std::to_string(i) + std::to_string(j)] =
            mu_drift[lay.l_index(i, j)];
    for (int i = 1; i <= params.n; ++i)
      traj.drift["mu0:p_" + std::to_string(i)] = mu_drift[lay.p_index(i)];
  }
  return traj;
}

MomentumValue momentum_maps(const DeformationParams& params, const DualPoint& point) {
  const int n = params.n;
  CoordLayout lay(n);
  MomentumValue mv;
  for (int k = 0; k < lay.lcount; ++k) mv.lambda.push_back(point.coords[k]);
  mv.mu0_l = mv.lambda;
  for (int i = 1; i <= n; ++i) mv.mu0_p.push_back(point.p(i));
  double p2 = 0, l2 = 0;
  for (double v : mv.mu0_p) p2 += v * v;
  for (double v : mv.mu0_l) l2 += v * v;
  mv.norm_sq = p2 + params.eps2.get_d() * l2;
  return mv;
}

int poisson_rank(const DeformationParams& params, const DualPoint& point, double rank_rel) {
  StructureConstants A = build_deformed(params);
  const int d = A.dim();
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [pair, terms] : A.table) {
    auto [a, b] = pair;
    double v = 0;
    for (const auto& [c, coeff] : terms) v += coeff.get_d() * point.coords[c];
    pi(a, b) = v;
    pi(b, a) = -v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pi);
  double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  if (top == 0) return 0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > rank_rel * top) ++rank;
  return rank;
}

DegenerationReport degeneration_structure(const OrbitSpec& spec,
                                          const std::vector<DualPoint>& sample) {
  const DeformationParams& params = spec.params;
  if (params.eps3 * params.eps3 != params.eps1 * params.eps2)
    throw std::invalid_argument("degeneration structure needs a cone point");
  if (sample.empty()) throw std::invalid_argument("empty point sample");
  const int n = params.n;
  CoordLayout lay(n);

  DegenerationReport rep;

  // which affine variables carry the base quadric: read off the Casimir
  bool has_x = false, has_p = false;
  for (const auto& [m, c] : spec.casimir.poly.terms) {
    (void)c;
    for (int i = 1; i <= n; ++i) {
      if (m[lay.x_index(i)] > 0) has_x = true;
      if (m[lay.p_index(i)] > 0) has_p = true;
    }
  }
  if (has_x && has_p)
    rep.base_variables = "I,x,p";
  else if (has_x)
    rep.base_variables = "I,x";
  else if (has_p)
    rep.base_variables = "I,p";
  else
    rep.base_variables = "I";

  std::vector<int> base_vars{lay.iz_index()};
  if (has_x)
    for (int i = 1; i <= n; ++i) base_vars.push_back(lay.x_index(i));
  if (has_p)
    for (int i = 1; i <= n; ++i) base_vars.push_back(lay.p_index(i));

  // constraint list: Casimir level, angular relations, auxiliary triples
  std::vector<Poly> constraints;
  {
    Poly k = spec.casimir.poly;
    k.add_term(Monomial(lay.dim, 0), -spec.level);
    constraints.push_back(k);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        Poly c = quadratic_monomial(lay.dim, lay.iz_index(), lay.l_index(i, j));
        c = c - quadratic_monomial(lay.dim, lay.x_index(i), lay.p_index(j));
        c = c + quadratic_monomial(lay.dim, lay.x_index(j), lay.p_index(i));
        constraints.push_back(c);
      }
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int k3 = j + 1; k3 <= n; ++k3)
          for (char blk : {'x', 'p'}) {
            auto vi = [&](int idx) { return blk == 'x' ? lay.x_index(idx) : lay.p_index(idx); };
            Poly c = quadratic_monomial(lay.dim, lay.l_index(i, j), vi(k3));
            c = c - quadratic_monomial(lay.dim, lay.l_index(i, k3), vi(j));
            c = c + quadratic_monomial(lay.dim, lay.l_index(j, k3), vi(i));
            constraints.push_back(c);
          }
  }

  double worst = 0;
  int fiber = -1;
  for (const auto& pt : sample) {
    worst = std::max(worst, std::abs(spec.casimir.poly.eval(pt.coords) - spec.level.get_d()));
    rep.component_signs.push_back(pt.iz() >= 0 ? 1 : -1);

    Eigen::MatrixXd jac(constraints.size(), lay.dim);
    for (size_t r = 0; r < constraints.size(); ++r) {
      auto grad = constraints[r].gradient(pt.coords);
      for (int c = 0; c < lay.dim; ++c) jac(r, c) = grad[c];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
    double top = svd.singularValues()[0];
    int jrank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-9 * top) ++jrank;
    int tangent_dim = lay.dim - jrank;

    // fiber = kernel of the base projection restricted to the tangent
    Eigen::MatrixXd tangent = svd.matrixV().rightCols(tangent_dim);
    Eigen::MatrixXd proj(base_vars.size(), lay.dim);
    proj.setZero();
    for (size_t r = 0; r < base_vars.size(); ++r) proj(r, base_vars[r]) = 1.0;
    Eigen::MatrixXd restricted = proj * tangent;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd2(restricted);
    double top2 = svd2.singularValues().size() ? svd2.singularValues()[0] : 0.0;
    int prank = 0;
    for (int i = 0; i < svd2.singularValues().size(); ++i)
      if (top2 > 0 && svd2.singularValues()[i] > 1e-9 * top2) ++prank;
    int this_fiber = tangent_dim - prank;
    if (fiber < 0) fiber = this_fiber;
    fiber = std::max(fiber, this_fiber);
  }
  rep.base_residual = worst;
  rep.fiber_dim = fiber;
  return rep;
}

std::vector<Rat> flat_orbit_components(int n) {
  DeformationParams flat{Rat(0), Rat(0), Rat(0), n};
  auto cas = quadratic_casimirs(flat);
  CoordLayout lay(n);
  Monomial iz2(lay.dim, 0);
  iz2[lay.iz_index()] = 2;
  // the derived flat Casimir must be exactly I^2
  if (cas.empty() || cas.front().poly.terms.size() != 1 ||
      cas.front().poly.terms.begin()->first != iz2 ||
      cas.front().poly.terms.begin()->second != 1)
    throw std::logic_error("flat Casimir is not I^2");
  return {Rat(1), Rat(-1)};
}

std::string trajectory_csv(const Trajectory& traj, int subsample) {
  if (traj.states.empty()) return "";
  const DeformationParams& params = traj.states.front().params;
  const int n = params.n;
  OrbitSpec spec = make_orbit_spec(params);

  std::ostringstream os;
  os.precision(17);
  os << "t,I";
  for (int i = 1; i <= n; ++i) os << ",x_" << i;
  for (int i = 1; i <= n; ++i) os << ",p_" << i;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) os << ",l_" << i << j;
  os << ",H0,K,max_angular_residual\n";

  for (size_t s = 0; s < traj.states.size(); ++s) {
    if (subsample > 1 && s % subsample != 0 && s + 1 != traj.states.size()) continue;
    const DualPoint& pt = traj.states[s];
    os << traj.times[s] << "," << pt.iz();
    for (int i = 1; i <= n; ++i) os << "," << pt.x(i);
    for (int i = 1; i <= n; ++i) os << "," << pt.p(i);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) os << "," << pt.l(i, j);
    OrbitResiduals res = orbit_residuals(spec, pt);
    os << "," << free_hamiltonian(params, pt) << "," << spec.casimir.poly.eval(pt.coords)
       << "," << res.angular << "\n";
  }
  return os.str();
}

}  // namespace phasedef
