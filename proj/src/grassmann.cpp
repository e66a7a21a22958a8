#include "phasedef/grassmann.hpp"

#include <cmath>
#include <stdexcept>

namespace phasedef {

int BivectorCoords::pair_index(int a, int b) const {
  const int m = ambient;
  return (a - 1) * m - (a - 1) * a / 2 + (b - a - 1);
}

double BivectorCoords::at(int a, int b) const {
  if (a == b) return 0.0;
  if (a < b) return l[pair_index(a, b)];
  return -l[pair_index(b, a)];
}

BivectorCoords plucker(const OrientedPlane& plane, bool normalize) {
  const int m = plane.ambient();
  if (static_cast<int>(plane.v.size()) != m)
    throw std::invalid_argument("spanning vectors have mismatched lengths");

  std::vector<double> u = plane.u, v = plane.v;
  if (normalize) {
    double iz = u[m - 2] * v[m - 1] - u[m - 1] * v[m - 2];
    if (std::abs(iz) < 1e-12)
      throw std::domain_error("outside chart U: the I coordinate vanishes");
    double s = 1.0 / std::sqrt(std::abs(iz));
    for (auto& c : u) c *= s;
    for (auto& c : v) c *= s;
  }

  BivectorCoords b;
  b.ambient = m;
  b.l.reserve(m * (m - 1) / 2);
  for (int a = 1; a <= m; ++a)
    for (int c = a + 1; c <= m; ++c) b.l.push_back(u[a - 1] * v[c - 1] - u[c - 1] * v[a - 1]);
  return b;
}

double plucker_residuals(const BivectorCoords& b) {
  const int m = b.ambient;
  double worst = 0;
  for (int a = 1; a <= m; ++a)
    for (int c = a + 1; c <= m; ++c)
      for (int d = c + 1; d <= m; ++d)
        for (int e = d + 1; e <= m; ++e) {
          double v = b.at(a, c) * b.at(d, e) - b.at(a, d) * b.at(c, e) +
                     b.at(a, e) * b.at(c, d);
          worst = std::max(worst, std::abs(v));
        }
  return worst;
}

OrientedPlane point_to_plane(const BivectorCoords& b, double residual_tol) {
  const int m = b.ambient;
  if (std::abs(b.iz()) < 1e-12)
    throw std::domain_error("outside chart U: the I coordinate vanishes");
  if (plucker_residuals(b) > residual_tol)
    throw std::domain_error("coordinates are not decomposable within tolerance");

  // rows of the antisymmetric coordinate matrix span the plane; the pair
  // with the largest |l_ab| gives the best-conditioned spanning set, and
  // row_a ^ row_b = l_ab * (u ^ v) fixes the orientation
  int best_a = 1, best_b = 2;
  double best = 0;
  for (int a = 1; a <= m; ++a)
    for (int c = a + 1; c <= m; ++c)
      if (std::abs(b.at(a, c)) > best) {
        best = std::abs(b.at(a, c));
        best_a = a;
        best_b = c;
      }
  OrientedPlane plane;
  plane.u.resize(m);
  plane.v.resize(m);
  for (int k = 1; k <= m; ++k) {
    plane.u[k - 1] = b.at(best_a, k);
    plane.v[k - 1] = b.at(best_b, k);
  }
  if (b.at(best_a, best_b) < 0) std::swap(plane.u, plane.v);
  return plane;
}

OrientedPlane orthonormalize(const OrientedPlane& plane) {
  const int m = plane.ambient();
  OrientedPlane out = plane;
  double nu = 0;
  for (double c : out.u) nu += c * c;
  nu = std::sqrt(nu);
  if (nu == 0) throw std::invalid_argument("degenerate spanning pair");
  for (double& c : out.u) c /= nu;
  double proj = 0;
  for (int k = 0; k < m; ++k) proj += out.u[k] * out.v[k];
  for (int k = 0; k < m; ++k) out.v[k] -= proj * out.u[k];
  double nv = 0;
  for (double c : out.v) nv += c * c;
  nv = std::sqrt(nv);
  if (nv < 1e-14) throw std::invalid_argument("spanning vectors are collinear");
  for (double& c : out.v) c /= nv;
  return out;
}

OrientedPlane random_plane(std::mt19937_64& rng, int ambient) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (;;) {
    OrientedPlane plane;
    plane.u.resize(ambient);
    plane.v.resize(ambient);
    for (auto& c : plane.u) c = coord(rng);
    for (auto& c : plane.v) c = coord(rng);
    // reject near-collinear pairs
    double uu = 0, vv = 0, uv = 0;
    for (int k = 0; k < ambient; ++k) {
      uu += plane.u[k] * plane.u[k];
      vv += plane.v[k] * plane.v[k];
      uv += plane.u[k] * plane.v[k];
    }
    if (uu * vv - uv * uv > 1e-3) return plane;
  }
}

DualPoint bivector_to_dual(const BivectorCoords& b, const DeformationParams& params) {
  const int n = params.n;
  if (b.ambient != n + 2)
    throw std::invalid_argument("bivector ambient dimension must be n + 2");
  std::vector<double> x(n), p(n);
  CoordLayout lay(n);
  std::vector<double> l(lay.lcount);
  for (int i = 1; i <= n; ++i) {
    x[i - 1] = b.at(i, n + 1);
    p[i - 1] = b.at(i, n + 2);
    for (int j = i + 1; j <= n; ++j) l[lay.l_index(i, j)] = b.at(i, j);
  }
  return make_dual_point(params, b.at(n + 1, n + 2), x, p, l);
}

}  // namespace phasedef
