#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cliffordlab/algebra.hpp"
#include "cliffordlab/solve.hpp"

namespace cliffordlab {

using HMV = Multivector<PolyRat>;

// Symbols used by the Hecke scenarios.
inline TablePtr hecke_table() {
  return make_table({"q", "a", "b", "K1", "K2", "K3", "K4", "K5", "K6", "P1", "P2", "P3", "P4", "P5", "P6"});
}

// Dimension 2n form: zero diagonal blocks, U upper right, L lower left.
inline BilinearForm<PolyRat> hecke_form(int n, const PolyRat& q) {
  const int d = 2 * n;
  Matrix<PolyRat> m = zero_matrix<PolyRat>(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int diff = i - j;
      m[i][n + j] = diff == 0 ? q : (std::abs(diff) == 1 ? PolyRat(-1) - q : PolyRat(1));
      m[n + i][j] = (j == i || j == i + 1) ? PolyRat(1) : (j == i - 1 ? q : PolyRat(-1));
    }
  return BilinearForm<PolyRat>(m);
}

// Reduced words of S_m in adjacent transpositions, breadth-first, generators ascending.
inline std::vector<std::vector<int>> reduced_words(int m) {
  std::vector<int> id(m);
  for (int i = 0; i < m; ++i) id[i] = i;
  std::map<std::vector<int>, std::vector<int>> seen{{id, {}}};
  std::vector<std::vector<int>> order{{}};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& perm : frontier) {
      const auto word = seen.at(perm);
      for (int s = 1; s < m; ++s) {
        auto p = perm;
        std::swap(p[s - 1], p[s]);
        if (seen.count(p)) continue;
        auto w = word;
        w.push_back(s);
        seen.emplace(p, w);
        order.push_back(w);
        next.push_back(p);
      }
    }
    frontier = std::move(next);
  }
  return order;
}

inline std::string word_name(const std::vector<int>& w) {
  if (w.empty()) return "Id";
  std::string s = "b";
  for (int i : w) s += std::to_string(i);
  return s;
}

class HeckeContext {
 public:
  HeckeContext(int n, TablePtr tab) : n_(n), tab_(std::move(tab)) {
    if (n < 1 || 2 * n > kMaxDim) throw OutOfRange("Hecke rank");
    q_ = PolyRat::symbol(tab_, "q");
    form_ = hecke_form(n, q_);
    for (int i = 1; i <= n; ++i) {
      Blade b = (1u << (i - 1)) | (1u << (n + i - 1));
      gens_.push_back(HMV::blade(2 * n, b));
    }
  }

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const TablePtr& table() const { return tab_; }
  const PolyRat& q() const { return q_; }
  PolyRat sym(const std::string& name) const { return PolyRat::symbol(tab_, name); }
  const BilinearForm<PolyRat>& form() const { return form_; }
  const HMV& b(int i) const { return gens_.at(i - 1); }
  HMV id() const { return HMV::scalar(dim(), PolyRat(1)); }
  HMV mul(const HMV& x, const HMV& y) const { return cmul(x, y, form_); }
  HMV rev(const HMV& x) const { return reversion(x, form_); }

  HMV word(const std::vector<int>& w) const {
    HMV r = id();
    for (int i : w) r = mul(r, b(i));
    return r;
  }

  // Reduced words of S_m (m <= n) and their evaluated elements.
  std::vector<std::vector<int>> words(int m) const { return reduced_words(m); }
  std::vector<HMV> basis(int m) const {
    std::vector<HMV> out;
    for (const auto& w : words(m)) out.push_back(word(w));
    return out;
  }

 private:
  int n_;
  TablePtr tab_;
  PolyRat q_;
  BilinearForm<PolyRat> form_;
  std::vector<HMV> gens_;
};

struct CheckItem {
  std::string name;
  bool ok;
};

// Quadratic, far-commutation and braid relations of the generators.
inline std::vector<CheckItem> check_relations(const HeckeContext& c) {
  std::vector<CheckItem> out;
  const PolyRat& q = c.q();
  for (int i = 1; i <= c.n(); ++i) {
    HMV lhs = c.mul(c.b(i), c.b(i));
    HMV rhs = c.b(i) * (PolyRat(1) - q) + c.id() * q;
    out.push_back({"b" + std::to_string(i) + "^2=(1-q)b" + std::to_string(i) + "+q", lhs == rhs});
  }
  for (int i = 1; i <= c.n(); ++i)
    for (int j = i + 2; j <= c.n(); ++j)
      out.push_back({"b" + std::to_string(i) + "b" + std::to_string(j) + "=b" + std::to_string(j) + "b" +
                         std::to_string(i),
                     c.mul(c.b(i), c.b(j)) == c.mul(c.b(j), c.b(i))});
  for (int i = 1; i < c.n(); ++i) {
    HMV l = c.mul(c.mul(c.b(i), c.b(i + 1)), c.b(i));
    HMV r = c.mul(c.mul(c.b(i + 1), c.b(i)), c.b(i + 1));
    out.push_back({"braid(" + std::to_string(i) + "," + std::to_string(i + 1) + ")", l == r});
  }
  return out;
}

// Coordinates over reduced words of S_m.
inline std::vector<PolyRat> bexpand(const HMV& u, const HeckeContext& c, int m = 3) {
  return coordinates(u, c.basis(m));
}

// α_q(b_w) = (−1/q)^{|w|} rev(b_w), extended linearly.
inline HMV alpha_q(const HMV& u, const HeckeContext& c, int m = 3) {
  auto ws = c.words(m);
  auto coords = coordinates(u, c.basis(m));
  HMV r(c.dim());
  PolyRat f = PolyRat(-1) / c.q();
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (coords[i].is_zero()) continue;
    r += c.rev(c.word(ws[i])) * (coords[i] * f.pow(static_cast<int>(ws[i].size())));
  }
  return r;
}

struct H2Operators {
  HMV R12, C12, Y2, Y11;
};

inline H2Operators h2_operators(const HeckeContext& c) {
  H2Operators h;
  h.R12 = c.id() * c.q() + c.b(1);
  h.C12 = c.id() - c.b(1);
  PolyRat s = PolyRat(1) + c.q();
  h.Y2 = h.R12 / s;
  h.Y11 = h.C12 / s;
  return h;
}

// All idempotents a·Id + b·b1.
inline SolutionSet h2_idempotents(const HeckeContext& c) {
  HMV xx = c.id() * c.sym("a") + c.b(1) * c.sym("b");
  HMV eq = c.mul(xx, xx) - xx;
  return clisolve_quadratic(eq, {c.table()->index("a"), c.table()->index("b")});
}

struct YoungSet {
  HMV Y3, Y111, f1, Y21_132, Y21_123;
};

// Requires n >= 2; uses b1, b2 and the table symbol K4.
inline YoungSet young_operators(const HeckeContext& c) {
  const PolyRat& q = c.q();
  PolyRat K4 = c.sym("K4");
  PolyRat one(1);
  PolyRat D = (one + q + q * q) * (one + q);
  auto B = [&](std::vector<int> w) { return c.word(w); };
  YoungSet y;
  y.Y3 = (c.id() * q.pow(3) + B({1}) * q.pow(2) + B({2}) * q.pow(2) + B({1, 2}) * q + B({2, 1}) * q +
          B({1, 2, 1})) /
         D;
  y.Y111 = c.rev(y.Y3);
  PolyRat qq1 = q * (one + q);
  y.f1 = c.id() / (one + q) - B({1}) * K4 + B({2}) * (K4 * q) + B({1, 2}) * K4 -
         B({2, 1}) * ((K4 * q.pow(3) + q + K4 - one) / qq1) -
         B({1, 2, 1}) * ((K4 * q * q - K4 + one) / qq1);
  y.Y21_132 = y.f1 - y.Y111;
  y.Y21_123 = c.rev(y.Y21_132);
  return y;
}

// The twelve Young identities: idempotency, the four vanishing products, the two
// decompositions of f1 and rev(f1), f1² = f1, and the resolution of Id.
inline std::vector<CheckItem> young_checks(const HeckeContext& c, const YoungSet& y) {
  auto m = [&](const HMV& a, const HMV& b) { return c.mul(a, b); };
  std::vector<CheckItem> out;
  out.push_back({"Y3*Y3=Y3", m(y.Y3, y.Y3) == y.Y3});
  out.push_back({"Y111*Y111=Y111", m(y.Y111, y.Y111) == y.Y111});
  out.push_back({"Y21_132*Y21_132=Y21_132", m(y.Y21_132, y.Y21_132) == y.Y21_132});
  out.push_back({"Y21_123*Y21_123=Y21_123", m(y.Y21_123, y.Y21_123) == y.Y21_123});
  out.push_back({"Y111*Y21_132=0", m(y.Y111, y.Y21_132).is_zero()});
  out.push_back({"Y21_132*Y111=0", m(y.Y21_132, y.Y111).is_zero()});
  out.push_back({"Y21_132*Y3=0", m(y.Y21_132, y.Y3).is_zero()});
  out.push_back({"Y3*Y21_123=0", m(y.Y3, y.Y21_123).is_zero()});
  out.push_back({"Y111+Y21_132=f1", y.Y111 + y.Y21_132 == y.f1});
  out.push_back({"Y21_123+Y3=rev(f1)", y.Y21_123 + y.Y3 == c.rev(y.f1)});
  out.push_back({"f1*f1=f1", m(y.f1, y.f1) == y.f1});
  out.push_back({"Y3+Y111+Y21_123+Y21_132=Id", y.Y3 + y.Y111 + y.Y21_123 + y.Y21_132 == c.id()});
  return out;
}

// Checks on the inputs of the Young construction: the closed form of Y111 and the
// defining equations X + rev(X) = Id, X² = X, X rev(X) = 0 for X = f1.
inline std::vector<CheckItem> construction_checks(const HeckeContext& c, const YoungSet& y) {
  HMV id = c.id();
  std::vector<CheckItem> out;
  out.push_back({"Y111=(1-b1-b2+b12+b21-b121)/D",
                 y.Y111 == (id - c.word({1}) - c.word({2}) + c.word({1, 2}) + c.word({2, 1}) - c.word({1, 2, 1})) /
                               ((PolyRat(1) + c.q() + c.q() * c.q()) * (PolyRat(1) + c.q()))});
  out.push_back({"f1+rev(f1)=Id", y.f1 + c.rev(y.f1) == id});
  out.push_back({"f1*f1=f1", c.mul(y.f1, y.f1) == y.f1});
  out.push_back({"f1*rev(f1)=0", c.mul(y.f1, c.rev(y.f1)).is_zero()});
  return out;
}

struct R13Result {
  HMV Y;            // after Y + rev(Y) = Id
  HMV R13;          // after Y21_132 = Y f1
  HMV product;      // R13 f1
  std::vector<int> free_params;
};

inline R13Result row_symmetrizer_R13(const HeckeContext& c, const YoungSet& y) {
  auto ws = c.words(3);
  std::vector<int> ps;
  HMV Y(c.dim());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    std::string name = "P" + std::to_string(i + 1);
    ps.push_back(c.table()->index(name));
    Y += c.word(ws[i]) * c.sym(name);
  }
  auto s1 = clisolve_linear(Y + c.rev(Y) - c.id(), ps);
  if (s1.empty()) throw NoSolution("Y + rev(Y) = Id");
  R13Result r;
  r.Y = substitute(Y, s1.branches[0]);
  auto free1 = s1.free_params(0, c.table());
  auto s2 = clisolve_linear(y.Y21_132 - c.mul(r.Y, y.f1), free1);
  if (s2.empty()) throw NoSolution("Y21_132 = Y f1");
  r.R13 = substitute(r.Y, s2.branches[0]);
  r.free_params = s2.free_params(0, c.table());
  r.product = c.mul(r.R13, y.f1);
  return r;
}

struct GarnirResult {
  SolutionSet solution;           // Y21_123 ∘ X = 0
  int dimension = 0;              // free parameters of the solution space
  std::vector<HMV> representatives;
  HMV G, GY, aGY;                 // G, G∘Y21_123, α_q(G)∘Y21_132
  bool forced_zero_empty = false; // G∘Y21_123 = 0 has no solution
  std::vector<HMV> S;             // Young basis
  int rank_products = 0, rank_S = 0, rank_representatives = 0;
};

// X = K1 Id + K2 b1 + K3 b2 + K4 b12 + K5 b21 + K6 b121 with K4 shared with the Young
// operators, solved linearly in the remaining coefficients.
inline GarnirResult garnir(const HeckeContext& c, const YoungSet& y) {
  auto ws = c.words(3);
  const auto& tab = c.table();
  HMV X(c.dim());
  std::vector<int> params;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    std::string name = "K" + std::to_string(i + 1);
    X += c.word(ws[i]) * c.sym(name);
    if (name != "K4") params.push_back(tab->index(name));
  }
  GarnirResult g;
  g.solution = clisolve_linear(c.mul(y.Y21_123, X), params);
  if (g.solution.empty()) throw NoSolution("Garnir system");
  const auto& br = g.solution.branches[0];
  auto free = g.solution.free_params(0, tab);
  g.dimension = static_cast<int>(free.size());
  HMV general = substitute(X, br);
  for (int f : free) {
    Substitution pick;
    for (int o : free) pick[o] = PolyRat(o == f ? 1 : 0);
    g.representatives.push_back(substitute(general, pick));
  }
  g.rank_representatives = rank_of(g.representatives);
  // first representative whose right product with Y21_123 is nonzero
  for (const auto& r : g.representatives) {
    g.G = r;
    g.GY = c.mul(r, y.Y21_123);
    if (!g.GY.is_zero()) break;
  }
  g.forced_zero_empty = clisolve_linear(g.GY, {}).empty();
  g.aGY = c.mul(alpha_q(g.G, c), y.Y21_132);
  g.rank_products = rank_of(std::vector<HMV>{g.GY, g.aGY});
  g.S = {y.Y3, y.Y21_123, g.GY, g.aGY, y.Y21_132, y.Y111};
  g.rank_S = rank_of(g.S);
  return g;
}

inline std::vector<PolyRat> yexpand(const HMV& u, const std::vector<HMV>& S) { return coordinates(u, S); }

}  // namespace cliffordlab
