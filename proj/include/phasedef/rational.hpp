#pragma once

#include <gmpxx.h>
#include <random>
#include <stdexcept>
#include <string>

namespace phasedef {

/// Exact rational scalar. All algebraic identities in this library are
/// checked over Q; floating point only enters for spectra and flows.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

inline int rat_sign(const Rat& q) { return sgn(q); }

/// Parse "p/q" or "p". Canonicalizes (lowest terms, positive denominator).
inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator in rational literal: " + s);
  q.canonicalize();
  return q;
}

/// Canonical wire form "p/q", denominator always present and positive.
inline std::string rat_str(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Human-facing form: omits "/1".
inline std::string rat_pretty(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return rat_str(q);
}

/// Small random rationals for property tests and sweeps. Deterministic
/// given the engine state.
inline Rat random_rat(std::mt19937_64& rng, int num_bound = 9, int den_bound = 9) {
  std::uniform_int_distribution<int> num(-num_bound, num_bound);
  std::uniform_int_distribution<int> den(1, den_bound);
  Rat q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rat random_nonzero_rat(std::mt19937_64& rng, int num_bound = 9, int den_bound = 9) {
  for (;;) {
    Rat q = random_rat(rng, num_bound, den_bound);
    if (q != 0) return q;
  }
}

}  // namespace phasedef
