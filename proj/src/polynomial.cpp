#include "phasedef/polynomial.hpp"

#include <stdexcept>

namespace phasedef {

Poly Poly::constant(int nvars, const Rat& c) {
  Poly p{nvars, {}};
  if (c != 0) p.terms[Monomial(nvars, 0)] = c;
  return p;
}

Poly Poly::coordinate(int nvars, int var) {
  Poly p{nvars, {}};
  Monomial m(nvars, 0);
  m[var] = 1;
  p.terms[m] = Rat(1);
  return p;
}

void Poly::add_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = terms.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly out = *this;
  for (const auto& [m, c] : o.terms) out.add_term(m, c);
  return out;
}

Poly Poly::operator-(const Poly& o) const {
  Poly out = *this;
  for (const auto& [m, c] : o.terms) out.add_term(m, -c);
  return out;
}

Poly Poly::operator*(const Poly& o) const {
  Poly out{nvars, {}};
  for (const auto& [m1, c1] : terms)
    for (const auto& [m2, c2] : o.terms) {
      Monomial m(nvars);
      for (int i = 0; i < nvars; ++i) m[i] = static_cast<uint8_t>(m1[i] + m2[i]);
      out.add_term(m, c1 * c2);
    }
  return out;
}

Poly Poly::scaled(const Rat& c) const {
  Poly out{nvars, {}};
  if (c == 0) return out;
  for (const auto& [m, v] : terms) out.terms[m] = v * c;
  return out;
}

Poly Poly::partial(int var) const {
  Poly out{nvars, {}};
  for (const auto& [m, c] : terms) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    out.add_term(d, c * m[var]);
  }
  return out;
}

Rat Poly::eval(const std::vector<Rat>& point) const {
  Rat acc(0);
  for (const auto& [m, c] : terms) {
    Rat t = c;
    for (int i = 0; i < nvars; ++i)
      for (int e = 0; e < m[i]; ++e) t *= point[i];
    acc += t;
  }
  return acc;
}

double Poly::eval(const std::vector<double>& point) const {
  double acc = 0;
  for (const auto& [m, c] : terms) {
    double t = c.get_d();
    for (int i = 0; i < nvars; ++i)
      for (int e = 0; e < m[i]; ++e) t *= point[i];
    acc += t;
  }
  return acc;
}

long double Poly::eval_ld(const std::vector<double>& point) const {
  std::vector<long double> pt(point.begin(), point.end());
  return eval_ld(pt);
}

long double Poly::eval_ld(const std::vector<long double>& point) const {
  long double acc = 0;
  for (const auto& [m, c] : terms) {
    long double t = c.get_d();
    for (int i = 0; i < nvars; ++i)
      for (int e = 0; e < m[i]; ++e) t *= point[i];
    acc += t;
  }
  return acc;
}

std::vector<double> Poly::gradient(const std::vector<double>& point) const {
  std::vector<double> g(nvars, 0.0);
  for (int v = 0; v < nvars; ++v) g[v] = partial(v).eval(point);
  return g;
}

std::string Poly::str(const StructureConstants& coords) const {
  if (terms.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : terms) {
    if (!s.empty()) s += " + ";
    s += rat_pretty(c);
    for (int i = 0; i < nvars; ++i) {
      for (int e = 0; e < m[i]; ++e) s += "*" + label_str(coords.labels[i]);
    }
  }
  return s;
}

Poly poisson_bracket(const StructureConstants& A, const Poly& F, const Poly& G) {
  const int d = A.dim();
  if (F.nvars != d || G.nvars != d)
    throw std::invalid_argument("polynomial variable count does not match the algebra");
  std::vector<Poly> dF(d, Poly::zero(d)), dG(d, Poly::zero(d));
  for (int v = 0; v < d; ++v) {
    dF[v] = F.partial(v);
    dG[v] = G.partial(v);
  }
  Poly out = Poly::zero(d);
  for (const auto& [pair, terms] : A.table) {
    auto [a, b] = pair;
    Poly cross = dF[a] * dG[b] - dF[b] * dG[a];
    if (cross.is_zero()) continue;
    for (const auto& [c, v] : terms) {
      Poly lin = Poly::coordinate(d, c).scaled(v);
      out = out + lin * cross;
    }
  }
  return out;
}

RationalFn RationalFn::from_poly(const Poly& p) {
  return {p, Poly::constant(p.nvars, Rat(1))};
}

Rat RationalFn::eval(const std::vector<Rat>& point) const {
  Rat dv = den.eval(point);
  if (dv == 0) throw std::domain_error("rational function evaluated at a pole");
  return num.eval(point) / dv;
}

RationalFn poisson_bracket(const StructureConstants& A, const RationalFn& F,
                           const RationalFn& G) {
  // {P/Q, S/T}: apply {., S/T} = ({., S} T - S {., T}) / T^2 in each slot.
  auto bracket_poly_ratio = [&](const Poly& X, const RationalFn& R) {
    RationalFn out;
    out.num = poisson_bracket(A, X, R.num) * R.den - R.num * poisson_bracket(A, X, R.den);
    out.den = R.den * R.den;
    return out;
  };
  RationalFn t1 = bracket_poly_ratio(F.num, G);  // {P, S/T}
  RationalFn t2 = bracket_poly_ratio(F.den, G);  // {Q, S/T}
  // {P/Q, S/T} = ({P, S/T} Q - P {Q, S/T}) / Q^2
  RationalFn out;
  out.num = t1.num * (F.den * t2.den) - (F.num * t2.num) * t1.den;
  out.den = F.den * F.den * t1.den * t2.den;
  return out;
}

}  // namespace phasedef
