#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "phasedef/rational.hpp"

namespace phasedef {

/// Element a + b*sqrt(d) of the real quadratic extension Q(sqrt(d)).
/// d == 0 encodes a plain rational (b must then be 0). d need not be
/// squarefree for the arithmetic to be exact; sqrt_rat() reduces small
/// square factors so reported discriminants stay readable.
struct QuadExt {
  Rat a;
  Rat b;
  Int d;

  QuadExt() : a(0), b(0), d(0) {}
  QuadExt(const Rat& r) : a(r), b(0), d(0) {}  // NOLINT: implicit by design
  QuadExt(Rat ra, Rat rb, Int dd) : a(std::move(ra)), b(std::move(rb)), d(std::move(dd)) {
    if (b == 0) d = 0;
  }

  bool is_zero() const { return a == 0 && b == 0; }
  bool is_rational() const { return b == 0; }

  /// |a| + |b|: zero iff the element is zero; used as an exact residual
  /// magnitude when summing homomorphism defects.
  Rat magnitude() const { return rat_abs(a) + rat_abs(b); }

  std::string str() const {
    if (b == 0) return rat_pretty(a);
    return rat_pretty(a) + " + " + rat_pretty(b) + "*sqrt(" + d.get_str() + ")";
  }
};

inline Int quad_common_disc(const QuadExt& x, const QuadExt& y) {
  if (x.d == 0) return y.d;
  if (y.d == 0 || x.d == y.d) return x.d;
  throw std::invalid_argument("mixed quadratic discriminants: " + x.d.get_str() + " vs " +
                              y.d.get_str());
}

inline QuadExt operator+(const QuadExt& x, const QuadExt& y) {
  return QuadExt(x.a + y.a, x.b + y.b, quad_common_disc(x, y));
}
inline QuadExt operator-(const QuadExt& x, const QuadExt& y) {
  return QuadExt(x.a - y.a, x.b - y.b, quad_common_disc(x, y));
}
inline QuadExt operator-(const QuadExt& x) { return QuadExt(-x.a, -x.b, x.d); }
inline QuadExt operator*(const QuadExt& x, const QuadExt& y) {
  Int d = quad_common_disc(x, y);
  return QuadExt(x.a * y.a + x.b * y.b * Rat(d), x.a * y.b + x.b * y.a, d);
}
inline QuadExt& operator+=(QuadExt& x, const QuadExt& y) { return x = x + y; }
inline QuadExt& operator-=(QuadExt& x, const QuadExt& y) { return x = x - y; }
inline QuadExt& operator*=(QuadExt& x, const QuadExt& y) { return x = x * y; }

inline QuadExt quad_inverse(const QuadExt& x) {
  Rat norm = x.a * x.a - x.b * x.b * Rat(x.d);
  if (norm == 0) throw std::domain_error("division by zero in Q(sqrt(d))");
  return QuadExt(x.a / norm, -x.b / norm, x.d);
}
inline QuadExt operator/(const QuadExt& x, const QuadExt& y) { return x * quad_inverse(y); }

inline bool operator==(const QuadExt& x, const QuadExt& y) { return (x - y).is_zero(); }
inline bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

/// Exact square root of a nonnegative rational: rational if possible,
/// otherwise an element of Q(sqrt(d)) with d squarefree up to the trial
/// division bound.
inline std::optional<QuadExt> sqrt_rat(const Rat& r) {
  if (r < 0) return std::nullopt;
  if (r == 0) return QuadExt(Rat(0));
  Int num = r.get_num(), den = r.get_den();
  Int radicand = num * den;  // sqrt(p/q) = sqrt(p*q)/q
  if (mpz_perfect_square_p(radicand.get_mpz_t())) {
    Int root;
    mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
    Rat val(root, den);
    val.canonicalize();
    return QuadExt(val);
  }
  // Pull out small square factors: radicand = s^2 * d.
  Int s = 1, d = radicand;
  for (Int p = 2; p * p * p * p <= d && p < 100000; ++p) {
    Int p2 = p * p;
    while (mpz_divisible_p(d.get_mpz_t(), p2.get_mpz_t())) {
      d /= p2;
      s *= p;
    }
  }
  if (mpz_perfect_square_p(d.get_mpz_t())) {
    Int root;
    mpz_sqrt(root.get_mpz_t(), d.get_mpz_t());
    s *= root;
    Rat val(s, den);
    val.canonicalize();
    return QuadExt(val);
  }
  Rat coeff(s, den);
  coeff.canonicalize();
  return QuadExt(Rat(0), coeff, d);
}

}  // namespace phasedef
