#pragma once

#include <map>
#include <string>
#include <vector>

#include "phasedef/lie_core.hpp"
#include "phasedef/rational.hpp"

// Sparse multivariate polynomials over Q in the dual coordinates of an
// algebra, with the Lie-Poisson bracket extended by the Leibniz rule.

namespace phasedef {

/// Dense exponent vector; total degrees stay tiny here.
using Monomial = std::vector<uint8_t>;

struct Poly {
  int nvars = 0;
  std::map<Monomial, Rat> terms;

  static Poly zero(int nvars) { return {nvars, {}}; }
  static Poly constant(int nvars, const Rat& c);
  static Poly coordinate(int nvars, int var);

  bool is_zero() const { return terms.empty(); }
  void add_term(const Monomial& m, const Rat& c);
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Rat& c) const;
  Poly partial(int var) const;

  Rat eval(const std::vector<Rat>& point) const;
  double eval(const std::vector<double>& point) const;
  /// Extended-precision evaluation; the flow and its drift metrics use
  /// this so that the statistics measure integrator drift, not double
  /// rounding at large coordinates.
  long double eval_ld(const std::vector<double>& point) const;
  long double eval_ld(const std::vector<long double>& point) const;
  std::vector<double> gradient(const std::vector<double>& point) const;

  std::string str(const StructureConstants& coords) const;
};

/// {F, G} = sum_{a<b} c_ab^c xi_c (dF/dxi_a dG/dxi_b - dF/dxi_b dG/dxi_a),
/// exact.
Poly poisson_bracket(const StructureConstants& A, const Poly& F, const Poly& G);

/// F/G with no normalization; enough structure for exact pointwise checks.
struct RationalFn {
  Poly num;
  Poly den;

  static RationalFn from_poly(const Poly& p);
  Rat eval(const std::vector<Rat>& point) const;  // throws on zero denominator
};

/// Bracket of two rational functions via the Leibniz rule on quotients.
RationalFn poisson_bracket(const StructureConstants& A, const RationalFn& F,
                           const RationalFn& G);

}  // namespace phasedef
