#include "phasedef/lie_core.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace phasedef {

std::string label_str(const BasisLabel& lb) {
  switch (lb.kind) {
    case LabelKind::L:
      return "l(" + std::to_string(lb.i) + "," + std::to_string(lb.j) + ")";
    case LabelKind::X:
      return "x(" + std::to_string(lb.i) + ")";
    case LabelKind::P:
      return "p(" + std::to_string(lb.i) + ")";
    case LabelKind::Iz:
      return "I";
    case LabelKind::E:
      return "e(" + std::to_string(lb.i) + ")";
  }
  return "?";
}

BasisLabel label_parse(const std::string& s) {
  if (s == "I") return BasisLabel::iz();
  auto args = [&](size_t from) {
    std::string inner = s.substr(from, s.size() - from - 1);
    std::vector<int> out;
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
  };
  if (s.size() >= 4 && s.back() == ')') {
    if (s.rfind("l(", 0) == 0) {
      auto v = args(2);
      if (v.size() == 2) return BasisLabel::l(v[0], v[1]);
    } else if (s.rfind("x(", 0) == 0) {
      auto v = args(2);
      if (v.size() == 1) return BasisLabel::x(v[0]);
    } else if (s.rfind("p(", 0) == 0) {
      auto v = args(2);
      if (v.size() == 1) return BasisLabel::p(v[0]);
    } else if (s.rfind("e(", 0) == 0) {
      auto v = args(2);
      if (v.size() == 1) return BasisLabel::e(v[0]);
    }
  }
  throw std::invalid_argument("unparseable basis label: " + s);
}

std::pair<BasisLabel, int> normalize_label(const BasisLabel& lb) {
  if (lb.kind == LabelKind::L) {
    if (lb.i == lb.j) throw std::invalid_argument("L(i,i) is not a basis label");
    if (lb.i > lb.j) return {BasisLabel::l(lb.j, lb.i), -1};
  }
  if ((lb.kind == LabelKind::X || lb.kind == LabelKind::P || lb.kind == LabelKind::E ||
       lb.kind == LabelKind::L) &&
      lb.i < 1)
    throw std::invalid_argument("basis label index out of range");
  return {lb, 1};
}

int StructureConstants::index_of(const BasisLabel& lb) const {
  auto [norm, sign] = normalize_label(lb);
  (void)sign;
  for (size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == norm) return static_cast<int>(k);
  return -1;
}

void StructureConstants::set_bracket(int a, int b, SparseVec terms) {
  if (a == b) throw std::invalid_argument("bracket of a basis element with itself");
  if (a > b) {
    for (auto& t : terms) t.second = -t.second;
    std::swap(a, b);
  }
  if (terms.empty())
    table.erase({a, b});
  else
    table[{a, b}] = std::move(terms);
}

void StructureConstants::add_term(int a, int b, int c, const Rat& coeff) {
  if (coeff == 0) return;
  Rat v = coeff;
  if (a > b) {
    std::swap(a, b);
    v = -v;
  }
  auto& terms = table[{a, b}];
  terms = sparse_axpy(terms, v, SparseVec{{c, Rat(1)}});
  if (terms.empty()) table.erase({a, b});
}

SparseVec StructureConstants::bracket_basis(int a, int b) const {
  if (a == b) return {};
  bool flip = a > b;
  if (flip) std::swap(a, b);
  auto it = table.find({a, b});
  if (it == table.end()) return {};
  SparseVec out = it->second;
  if (flip)
    for (auto& t : out) t.second = -t.second;
  return out;
}

std::vector<Rat> StructureConstants::bracket(const std::vector<Rat>& u,
                                             const std::vector<Rat>& v) const {
  const size_t d = labels.size();
  if (u.size() != d || v.size() != d)
    throw std::invalid_argument("coefficient vector length does not match dimension");
  std::vector<Rat> out(d, Rat(0));
  for (const auto& [pair, terms] : table) {
    auto [a, b] = pair;
    Rat coeff = u[a] * v[b] - u[b] * v[a];
    if (coeff == 0) continue;
    for (const auto& [c, val] : terms) out[c] += coeff * val;
  }
  return out;
}

Rat StructureConstants::jacobi_residual() const {
  const int d = dim();
  Rat worst(0);
  std::vector<Rat> acc(d, Rat(0));
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c) {
        std::fill(acc.begin(), acc.end(), Rat(0));
        auto term = [&](int x, int y, int z) {
          for (const auto& [m, cm] : bracket_basis(x, y))
            for (const auto& [r, cr] : bracket_basis(m, z)) acc[r] += cm * cr;
        };
        term(a, b, c);
        term(b, c, a);
        term(c, a, b);
        for (const auto& q : acc) {
          Rat mag = rat_abs(q);
          if (mag > worst) worst = mag;
        }
      }
  return worst;
}

std::vector<std::vector<Rat>> StructureConstants::ad_matrix(int a) const {
  const int d = dim();
  std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d, Rat(0)));
  for (int k = 0; k < d; ++k)
    for (const auto& [c, v] : bracket_basis(a, k)) m[c][k] = v;
  return m;
}

std::vector<std::vector<Rat>> StructureConstants::trace_form() const {
  const int d = dim();
  std::vector<std::vector<std::vector<Rat>>> ads;
  ads.reserve(d);
  for (int a = 0; a < d; ++a) ads.push_back(ad_matrix(a));
  std::vector<std::vector<Rat>> t(d, std::vector<Rat>(d, Rat(0)));
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Rat tr(0);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) tr += ads[a][i][k] * ads[b][k][i];
      t[a][b] = tr;
      t[b][a] = tr;
    }
  return t;
}

namespace {

void add_orthogonal_block(StructureConstants& A, int n) {
  // [l_ij, l_kl] = d_ik l_jl + d_jl l_ik - d_il l_jk - d_jk l_il
  auto lidx = [&](int i, int j) { return A.index_of(BasisLabel::l(std::min(i, j), std::max(i, j))); };
  auto lsign = [&](int i, int j) { return i < j ? 1 : -1; };
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          int a = lidx(i, j), b = lidx(k, l);
          if (a >= b) continue;
          auto add = [&](int u, int v, int s) {
            if (u == v) return;
            A.add_term(a, b, lidx(u, v), Rat(s * lsign(u, v)));
          };
          if (i == k) add(j, l, 1);
          if (j == l) add(i, k, 1);
          if (i == l) add(j, k, -1);
          if (j == k) add(i, l, -1);
        }
}

// [l_ij, v_k] = d_ik v_j - d_jk v_i for a vector-representation family v.
void add_vector_action(StructureConstants& A, int n,
                       const std::function<BasisLabel(int)>& vec) {
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      int a = A.index_of(BasisLabel::l(i, j));
      for (int k = 1; k <= n; ++k) {
        int b = A.index_of(vec(k));
        if (i == k) A.add_term(a, b, A.index_of(vec(j)), Rat(1));
        if (j == k) A.add_term(a, b, A.index_of(vec(i)), Rat(-1));
      }
    }
}

}  // namespace

StructureConstants build_standard(StandardKind kind, int n) {
  StructureConstants A;
  A.n = n;
  switch (kind) {
    case StandardKind::Orthogonal: {
      if (n < 2) throw std::invalid_argument("orthogonal algebra needs n >= 2");
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) A.labels.push_back(BasisLabel::l(i, j));
      add_orthogonal_block(A, n);
      return A;
    }
    case StandardKind::Euclidean: {
      if (n < 1) throw std::invalid_argument("euclidean algebra needs n >= 1");
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) A.labels.push_back(BasisLabel::l(i, j));
      for (int i = 1; i <= n; ++i) A.labels.push_back(BasisLabel::e(i));
      add_orthogonal_block(A, n);
      add_vector_action(A, n, [](int k) { return BasisLabel::e(k); });
      return A;
    }
    case StandardKind::Heisenberg: {
      if (n < 1) throw std::invalid_argument("heisenberg algebra needs n >= 1");
      for (int i = 1; i <= 2 * n; ++i) A.labels.push_back(BasisLabel::e(i));
      A.labels.push_back(BasisLabel::iz());
      int iz = A.dim() - 1;
      for (int i = 1; i <= n; ++i)
        A.add_term(A.index_of(BasisLabel::e(i)), A.index_of(BasisLabel::e(n + i)), iz, Rat(1));
      return A;
    }
    case StandardKind::GN:
      return build_deformed({Rat(0), Rat(0), Rat(0), n});
  }
  throw std::invalid_argument("unknown standard kind");
}

StructureConstants build_deformed(const DeformationParams& params) {
  const int n = params.n;
  if (n < 1) throw std::invalid_argument("deformed family needs n >= 1");
  StructureConstants A;
  A.n = n;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) A.labels.push_back(BasisLabel::l(i, j));
  for (int i = 1; i <= n; ++i) A.labels.push_back(BasisLabel::x(i));
  for (int i = 1; i <= n; ++i) A.labels.push_back(BasisLabel::p(i));
  A.labels.push_back(BasisLabel::iz());

  add_orthogonal_block(A, n);
  add_vector_action(A, n, [](int k) { return BasisLabel::x(k); });
  add_vector_action(A, n, [](int k) { return BasisLabel::p(k); });

  const int iz = A.dim() - 1;
  auto X = [&](int i) { return A.index_of(BasisLabel::x(i)); };
  auto P = [&](int i) { return A.index_of(BasisLabel::p(i)); };
  auto L = [&](int i, int j) {
    return A.index_of(BasisLabel::l(std::min(i, j), std::max(i, j)));
  };
  auto lsign = [](int i, int j) { return i < j ? 1 : -1; };

  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i < j) {
        A.add_term(X(i), X(j), L(i, j), params.eps1);
        A.add_term(P(i), P(j), L(i, j), params.eps2);
      }
      // {x_i, p_j} = d_ij I + eps3 l_ij
      if (i == j)
        A.add_term(X(i), P(j), iz, Rat(1));
      else
        A.add_term(X(i), P(j), L(i, j), params.eps3 * lsign(i, j));
    }
  for (int i = 1; i <= n; ++i) {
    // {x_i, I} = eps3 x_i - eps1 p_i ; {p_i, I} = eps2 x_i - eps3 p_i
    A.add_term(X(i), iz, X(i), params.eps3);
    A.add_term(X(i), iz, P(i), -params.eps1);
    A.add_term(P(i), iz, X(i), params.eps2);
    A.add_term(P(i), iz, P(i), -params.eps3);
  }
  return A;
}

StructureConstants quotient_by_central(const StructureConstants& A, const BasisLabel& center) {
  int z = A.index_of(center);
  if (z < 0) throw std::invalid_argument("center label not present");
  for (int k = 0; k < A.dim(); ++k)
    if (!A.bracket_basis(z, k).empty())
      throw std::invalid_argument("label " + label_str(center) + " is not central");
  StructureConstants Q;
  Q.n = A.n;
  std::vector<int> remap(A.dim(), -1);
  for (int k = 0; k < A.dim(); ++k) {
    if (k == z) continue;
    remap[k] = Q.dim();
    Q.labels.push_back(A.labels[k]);
  }
  for (const auto& [pair, terms] : A.table) {
    auto [a, b] = pair;
    if (a == z || b == z) continue;
    SparseVec mapped;
    for (const auto& [c, v] : terms) {
      if (c == z) continue;  // central terms collapse
      mapped.emplace_back(remap[c], v);
    }
    std::sort(mapped.begin(), mapped.end(),
              [](const auto& s, const auto& t) { return s.first < t.first; });
    if (!mapped.empty()) Q.set_bracket(remap[a], remap[b], std::move(mapped));
  }
  return Q;
}

BilinearForm BilinearForm::diagonal(const std::vector<Rat>& diag) {
  BilinearForm B;
  B.size = static_cast<int>(diag.size());
  B.entries.assign(B.size, std::vector<Rat>(B.size, Rat(0)));
  for (int i = 0; i < B.size; ++i) B.entries[i][i] = diag[i];
  return B;
}

BilinearForm BilinearForm::from_params(const DeformationParams& params) {
  const int m = params.n + 2;
  std::vector<Rat> diag(m, Rat(1));
  diag[m - 2] = params.eps1;
  diag[m - 1] = params.eps2;
  BilinearForm B = diagonal(diag);
  B.entries[m - 2][m - 1] = params.eps3;
  B.entries[m - 1][m - 2] = params.eps3;
  return B;
}

bool BilinearForm::is_symmetric() const {
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if (entries[i][j] != entries[j][i]) return false;
  return true;
}

StructureConstants build_from_form(const BilinearForm& B) {
  if (!B.is_symmetric()) throw std::invalid_argument("bilinear form must be symmetric");
  const int m = B.size;
  if (m < 3) throw std::invalid_argument("form size must be at least 3");
  const int n = m - 2;

  StructureConstants A;
  A.n = n;
  // wedge basis v_a ^ v_b, a < b, relabeled through the distinguished plane
  auto wedge_label = [&](int a, int b) -> BasisLabel {
    if (b <= n) return BasisLabel::l(a, b);
    if (b == n + 1) return BasisLabel::x(a);
    if (a <= n) return BasisLabel::p(a);
    return BasisLabel::iz();
  };
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) A.labels.push_back(BasisLabel::l(i, j));
  for (int i = 1; i <= n; ++i) A.labels.push_back(BasisLabel::x(i));
  for (int i = 1; i <= n; ++i) A.labels.push_back(BasisLabel::p(i));
  A.labels.push_back(BasisLabel::iz());

  auto widx = [&](int a, int b) {
    int sign = 1;
    if (a == b) return std::pair<int, int>{-1, 0};
    if (a > b) {
      std::swap(a, b);
      sign = -1;
    }
    return std::pair<int, int>{A.index_of(wedge_label(a, b)), sign};
  };
  auto form = [&](int a, int b) { return B.entries[a - 1][b - 1]; };

  // [a^b, c^d] = (a,c) b^d - (b,c) a^d + (b,d) a^c - (a,d) b^c
  for (int a = 1; a <= m; ++a)
    for (int b = a + 1; b <= m; ++b)
      for (int c = 1; c <= m; ++c)
        for (int d = c + 1; d <= m; ++d) {
          auto [row, rs] = widx(a, b);
          auto [col, cs] = widx(c, d);
          (void)rs;
          (void)cs;
          if (row >= col) continue;
          auto add = [&](const Rat& coeff, int u, int v) {
            if (coeff == 0) return;
            auto [idx, s] = widx(u, v);
            if (idx < 0) return;
            A.add_term(row, col, idx, coeff * s);
          };
          add(form(a, c), b, d);
          add(-form(b, c), a, d);
          add(form(b, d), a, c);
          add(-form(a, d), b, c);
        }
  return A;
}

Signature killing_signature(const StructureConstants& A, double rel_threshold) {
  const int d = A.dim();
  auto t = A.trace_form();
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = t[i][j].get_d();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  Eigen::VectorXd ev = solver.eigenvalues();
  double scale = 0;
  for (int i = 0; i < d; ++i) scale = std::max(scale, std::abs(ev[i]));
  Signature sig;
  for (int i = 0; i < d; ++i) {
    if (scale == 0 || std::abs(ev[i]) < rel_threshold * scale)
      ++sig.nulls;
    else if (ev[i] > 0)
      ++sig.positives;
    else
      ++sig.negatives;
  }
  return sig;
}

int trace_form_nullity(const StructureConstants& A) {
  auto t = A.trace_form();
  std::vector<SparseVec> rows;
  for (const auto& r : t) {
    SparseVec row;
    for (int j = 0; j < static_cast<int>(r.size()); ++j)
      if (r[j] != 0) row.emplace_back(j, r[j]);
    rows.push_back(std::move(row));
  }
  return A.dim() - sparse_rank(rows);
}

bool tables_equal(const StructureConstants& A, const StructureConstants& B) {
  return A.labels == B.labels && A.table == B.table;
}

nlohmann::ordered_json structure_to_json(const StructureConstants& A) {
  nlohmann::ordered_json j;
  j["n"] = A.n;
  j["dim"] = A.dim();
  j["labels"] = nlohmann::ordered_json::array();
  for (const auto& lb : A.labels) j["labels"].push_back(label_str(lb));
  j["brackets"] = nlohmann::ordered_json::array();
  for (const auto& [pair, terms] : A.table) {
    nlohmann::ordered_json entry;
    entry["a"] = pair.first;
    entry["b"] = pair.second;
    entry["terms"] = nlohmann::ordered_json::array();
    for (const auto& [c, v] : terms) {
      nlohmann::ordered_json t;
      t["c"] = c;
      t["coeff"] = rat_str(v);
      entry["terms"].push_back(t);
    }
    j["brackets"].push_back(entry);
  }
  return j;
}

StructureConstants structure_from_json(const nlohmann::ordered_json& j) {
  StructureConstants A;
  A.n = j.at("n").get<int>();
  for (const auto& s : j.at("labels")) A.labels.push_back(label_parse(s.get<std::string>()));
  if (static_cast<int>(A.labels.size()) != j.at("dim").get<int>())
    throw std::invalid_argument("dim field does not match labels");
  for (const auto& entry : j.at("brackets")) {
    int a = entry.at("a").get<int>();
    int b = entry.at("b").get<int>();
    SparseVec terms;
    for (const auto& t : entry.at("terms"))
      terms.emplace_back(t.at("c").get<int>(), rat_parse(t.at("coeff").get<std::string>()));
    A.set_bracket(a, b, std::move(terms));
  }
  return A;
}

}  // namespace phasedef
