#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "cliffordlab/algebra.hpp"
#include "cliffordlab/polyrat.hpp"

namespace cliffordlab {

// Solution of Σ x_i col_i = target: particular + span(directions).
template <class S>
struct AffineSolution {
  bool consistent = false;
  std::vector<S> particular;
  std::vector<std::vector<S>> directions;
  std::vector<int> pivots;
  int dimension() const { return static_cast<int>(directions.size()); }
};

namespace detail {

template <class S>
std::vector<Blade> blade_union(const std::vector<Multivector<S>>& mvs) {
  std::set<Blade> s;
  for (const auto& m : mvs)
    for (const auto& [b, c] : m.terms()) s.insert(b);
  return {s.begin(), s.end()};
}

}  // namespace detail

template <class S>
AffineSolution<S> affine_solve(const std::vector<Multivector<S>>& columns, const Multivector<S>& target) {
  std::vector<Multivector<S>> all = columns;
  all.push_back(target);
  auto rows = detail::blade_union(all);
  const int nc = static_cast<int>(columns.size());
  Matrix<S> a = zero_matrix<S>(rows.size(), nc + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int j = 0; j < nc; ++j) a[r][j] = columns[j].coeff(rows[r]);
    a[r][nc] = target.coeff(rows[r]);
  }
  AffineSolution<S> sol;
  sol.pivots = rref(a, nc);
  double scale = matrix_scale(a);
  for (std::size_t r = sol.pivots.size(); r < rows.size(); ++r)
    if (!negligible(a[r][nc], std::max(scale, 1.0))) return sol;
  sol.consistent = true;
  sol.particular.assign(nc, S(0));
  for (std::size_t i = 0; i < sol.pivots.size(); ++i) sol.particular[sol.pivots[i]] = a[i][nc];
  std::vector<bool> is_piv(nc, false);
  for (int p : sol.pivots) is_piv[p] = true;
  for (int f = 0; f < nc; ++f) {
    if (is_piv[f]) continue;
    std::vector<S> v(nc, S(0));
    v[f] = S(1);
    for (std::size_t i = 0; i < sol.pivots.size(); ++i) v[sol.pivots[i]] = -a[i][f];
    sol.directions.push_back(v);
  }
  return sol;
}

// Unique coordinates of u over a linearly independent list.
template <class S>
std::vector<S> coordinates(const Multivector<S>& u, const std::vector<Multivector<S>>& basis) {
  auto sol = affine_solve(basis, u);
  if (!sol.consistent) throw NotInSpan();
  if (!sol.directions.empty()) throw NotInSpan("basis is linearly dependent");
  return sol.particular;
}

template <class S>
Multivector<S> combine(const std::vector<S>& coeffs, const std::vector<Multivector<S>>& basis) {
  Multivector<S> r(basis.empty() ? 0 : basis[0].dim());
  for (std::size_t i = 0; i < basis.size(); ++i) r += basis[i] * coeffs[i];
  return r;
}

// Greedy left-to-right rank filter.
template <class S>
std::vector<Multivector<S>> findbasis(const std::vector<Multivector<S>>& list) {
  std::vector<Multivector<S>> kept;
  for (const auto& m : list) {
    if (m.is_zero()) continue;
    auto sol = affine_solve(kept, m);
    if (!sol.consistent) kept.push_back(m);
  }
  return kept;
}

template <class S>
int rank_of(const std::vector<Multivector<S>>& list) {
  return static_cast<int>(findbasis(list).size());
}

// Monic minimal polynomial, coefficients from x^0 upward.
template <class S>
std::vector<S> climinpoly(const Multivector<S>& u, const BilinearForm<S>& f) {
  std::vector<Multivector<S>> powers{Multivector<S>::scalar(u.dim(), S(1))};
  const int bound = (1 << u.dim()) + 1;
  for (int d = 1; d <= bound; ++d) {
    Multivector<S> next = cmul(powers.back(), u, f);
    auto sol = affine_solve(powers, next);
    if (sol.consistent) {
      std::vector<S> poly(d + 1, S(0));
      for (int i = 0; i < d; ++i) poly[i] = -sol.particular[i];
      poly[d] = S(1);
      return poly;
    }
    powers.push_back(next);
  }
  throw Error("minimal polynomial degree bound exceeded");
}

template <class S>
Multivector<S> poly_eval(const std::vector<S>& poly, const Multivector<S>& u, const BilinearForm<S>& f) {
  Multivector<S> acc(u.dim());
  for (auto it = poly.rbegin(); it != poly.rend(); ++it)
    acc = cmul(acc, u, f) + Multivector<S>::scalar(u.dim(), *it);
  return acc;
}

// ---- parameter solving over PolyRat -------------------------------------------------

using Substitution = std::map<int, PolyRat>;

struct SolutionSet {
  enum class Kind { empty, affine };
  Kind kind = Kind::empty;
  std::vector<Substitution> branches;
  std::vector<int> params;
  bool empty() const { return kind == Kind::empty || branches.empty(); }
  std::size_t size() const { return branches.size(); }
  // Parameters of branch b that remain free (map to themselves).
  std::vector<int> free_params(std::size_t b, const TablePtr& tab) const {
    std::vector<int> out;
    for (int p : params) {
      auto it = branches.at(b).find(p);
      if (it != branches.at(b).end() && it->second == PolyRat::symbol(tab, p)) out.push_back(p);
    }
    return out;
  }
};

inline Multivector<PolyRat> substitute(const Multivector<PolyRat>& u, const Substitution& s) {
  return u.map_coeffs([&](const PolyRat& c) { return c.subs(s); });
}

namespace detail {

inline TablePtr table_of(const Multivector<PolyRat>& u) {
  for (const auto& [b, c] : u.terms())
    if (c.table()) return c.table();
  return nullptr;
}

inline bool poly_uses_any(const Poly& p, const std::vector<int>& params) {
  for (int i : params)
    if (p.uses(i)) return true;
  return false;
}

inline bool uses_any(const PolyRat& p, const std::vector<int>& params) {
  for (int i : params)
    if (p.uses(i)) return true;
  return false;
}

// Split numerator into constant part and linear coefficients in params.
inline void linear_parts(const PolyRat& c, const std::vector<int>& params, PolyRat& constant,
                         std::vector<PolyRat>& lin) {
  for (const auto& f : c.den())
    if (poly_uses_any(f.p, params)) throw NonlinearInParams("parameter in a denominator");
  PolyRat den_inv = PolyRat(c.table(), c.den_poly()).inverse();
  Poly cst;
  std::vector<Poly> l(params.size());
  for (const auto& t : c.num().terms) {
    int deg = 0, which = -1;
    for (std::size_t k = 0; k < params.size(); ++k) {
      int e = t.m.e[params[k]];
      if (e) {
        deg += e;
        which = static_cast<int>(k);
      }
    }
    if (deg >= 2) throw NonlinearInParams();
    if (deg == 0) {
      cst.terms.push_back(t);
    } else {
      Term u = t;
      u.m.e[params[which]] = 0;
      l[which] = l[which] + Poly(std::vector<Term>{u});
    }
  }
  constant = PolyRat(c.table(), cst) * den_inv;
  lin.clear();
  for (auto& p : l) lin.push_back(PolyRat(c.table(), p) * den_inv);
}

}  // namespace detail

inline void verify_solution(const Multivector<PolyRat>& expr, const Substitution& s) {
  if (!substitute(expr, s).is_zero()) throw Error("solution branch fails back-substitution");
}

// Linear solve of expr = 0 (all blade coefficients) for params; pivots follow param order.
inline SolutionSet clisolve_linear(const Multivector<PolyRat>& expr, const std::vector<int>& params) {
  SolutionSet out;
  out.params = params;
  TablePtr tab = detail::table_of(expr);
  const int np = static_cast<int>(params.size());
  Matrix<PolyRat> a;
  for (const auto& [b, c] : expr.terms()) {
    PolyRat cst;
    std::vector<PolyRat> lin;
    detail::linear_parts(c, params, cst, lin);
    lin.push_back(-cst);
    a.push_back(lin);
  }
  auto piv = rref(a, np);
  for (std::size_t r = piv.size(); r < a.size(); ++r)
    if (!a[r][np].is_zero()) return out;
  Substitution s;
  std::vector<bool> is_piv(np, false);
  for (int p : piv) is_piv[p] = true;
  for (int k = 0; k < np; ++k)
    if (!is_piv[k]) s[params[k]] = PolyRat::symbol(tab, params[k]);
  for (std::size_t r = 0; r < piv.size(); ++r) {
    PolyRat v = a[r][np];
    for (int k = 0; k < np; ++k)
      if (!is_piv[k] && !a[r][k].is_zero()) v = v - a[r][k] * PolyRat::symbol(tab, params[k]);
    s[params[piv[r]]] = v;
  }
  verify_solution(expr, s);
  out.kind = SolutionSet::Kind::affine;
  out.branches.push_back(s);
  return out;
}

namespace detail {

struct QuadSolver {
  TablePtr tab;
  std::vector<Substitution> results;

  static Substitution compose(const Substitution& partial, int p, const PolyRat& v) {
    Substitution one{{p, v}};
    Substitution out;
    for (const auto& [k, e] : partial) out[k] = e.subs(one);
    out[p] = v;
    return out;
  }

  static std::vector<PolyRat> numerators(const std::vector<PolyRat>& eqs) {
    std::vector<PolyRat> out;
    for (const auto& e : eqs) {
      if (e.is_zero()) continue;
      PolyRat n(e.table(), e.num());
      bool dup = false;
      for (const auto& o : out)
        if (o == n) dup = true;
      if (!dup) out.push_back(n);
    }
    return out;
  }

  void solve(std::vector<PolyRat> eqs, std::vector<int> params, Substitution partial, int depth) {
    if (depth > 32) throw UnsupportedSystem("branching too deep");
    eqs = numerators(eqs);
    if (eqs.empty()) {
      for (int p : params) partial[p] = PolyRat::symbol(tab, p);
      results.push_back(partial);
      return;
    }
    for (const auto& e : eqs)
      if (!uses_any(e, params)) return;  // nonzero constant equation
    auto subst_all = [&](int p, const PolyRat& v) {
      std::vector<PolyRat> ne;
      Substitution one{{p, v}};
      for (const auto& e : eqs) ne.push_back(e.subs(one));
      std::vector<int> np;
      for (int q : params)
        if (q != p) np.push_back(q);
      solve(ne, np, compose(partial, p, v), depth + 1);
    };
    // an equation linear in p with a parameter-free coefficient
    for (int p : params)
      for (const auto& e : eqs) {
        if (e.num().degree_in(p) != 1) continue;
        auto [r, a] = e.num().split_linear(p);
        if (poly_uses_any(a, params)) continue;
        PolyRat ar(tab, a), rr(tab, r);
        subst_all(p, -rr / ar);
        return;
      }
    // a parameter dividing an equation: branch p = 0 or the cofactor
    for (int p : params)
      for (std::size_t k = 0; k < eqs.size(); ++k) {
        const Poly& n = eqs[k].num();
        bool divisible = true;
        for (const auto& t : n.terms)
          if (t.m.e[p] == 0) divisible = false;
        if (!divisible) continue;
        subst_all(p, PolyRat(0));
        auto q = Poly::divide_exact(n, Poly::var(p));
        std::vector<PolyRat> ne = eqs;
        ne[k] = PolyRat(tab, *q);
        solve(ne, params, partial, depth + 1);
        return;
      }
    // univariate quadratic with parameter-free coefficients
    for (const auto& e : eqs) {
      int which = -1, count = 0;
      for (int p : params)
        if (e.num().uses(p)) {
          which = p;
          ++count;
        }
      if (count != 1 || e.num().degree_in(which) != 2) continue;
      auto cs = e.num().coefficients_in(which);
      PolyRat c(tab, cs[0]), b(tab, cs[1]), a(tab, cs[2]);
      PolyRat disc = b * b - PolyRat(4) * a * c;
      auto root = sqrt_with_constraints(disc);
      if (!root) continue;
      for (int sgn : {1, -1}) {
        PolyRat x = (-b + PolyRat(sgn) * *root) / (PolyRat(2) * a);
        subst_all(which, x);
      }
      return;
    }
    throw UnsupportedSystem();
  }

  // √d as a rational function, or σ·s for a constrained symbol s with d / rel(s) = σ².
  std::optional<PolyRat> sqrt_with_constraints(const PolyRat& d) const {
    if (auto r = d.sqrt()) return r;
    if (!tab) return std::nullopt;
    for (int s = 0; s < tab->size(); ++s) {
      if (!tab->constrained(s)) continue;
      PolyRat rel(tab, tab->relation(s));
      if (rel.is_zero()) continue;
      if (auto sig = (d / rel).sqrt()) return *sig * PolyRat::symbol(tab, s);
    }
    return std::nullopt;
  }
};

}  // namespace detail

// Branching solver for small systems of degree <= 2 in at most three parameters.
inline SolutionSet clisolve_quadratic(const Multivector<PolyRat>& expr, const std::vector<int>& params) {
  if (params.size() > 3) throw UnsupportedSystem("at most three parameters");
  SolutionSet out;
  out.params = params;
  detail::QuadSolver qs;
  qs.tab = detail::table_of(expr);
  std::vector<PolyRat> eqs;
  for (const auto& [b, c] : expr.terms()) {
    for (const auto& f : c.den())
      if (detail::poly_uses_any(f.p, params)) throw UnsupportedSystem("parameter in a denominator");
    int deg = 0;
    for (const auto& t : c.num().terms) {
      int d = 0;
      for (int p : params) d += t.m.e[p];
      deg = std::max(deg, d);
    }
    if (deg > 2) throw UnsupportedSystem("degree above two");
    eqs.push_back(c);
  }
  qs.solve(eqs, params, {}, 0);
  for (const auto& br : qs.results) {
    verify_solution(expr, br);
    bool dup = false;
    for (const auto& o : out.branches) {
      bool same = true;
      for (const auto& [k, v] : br)
        if (!(o.at(k) == v)) same = false;
      if (same) dup = true;
    }
    if (!dup) out.branches.push_back(br);
  }
  out.kind = out.branches.empty() ? SolutionSet::Kind::empty : SolutionSet::Kind::affine;
  return out;
}

}  // namespace cliffordlab
