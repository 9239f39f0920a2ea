#pragma once

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cliffordlab/algebra.hpp"
#include "cliffordlab/polyrat.hpp"

namespace cliffordlab {

// Cl(0,3) and the degenerate Cl(0,3,1) with e4² = 0.
template <class S>
BilinearForm<S> cl03() {
  return BilinearForm<S>::signature(0, 3);
}
template <class S>
BilinearForm<S> cl031() {
  return BilinearForm<S>::signature(0, 3, 1);
}

// g* = rev(α(g))
template <class S>
Multivector<S> star(const Multivector<S>& g, const BilinearForm<S>& f) {
  return conjugation(g, f);
}

template <class S>
Multivector<S> pin_action(const Multivector<S>& x, const Multivector<S>& g, const BilinearForm<S>& f) {
  return cmul({grade_involution(g), x, star(g, f)}, f);
}

template <class S>
Multivector<S> spin_action(const Multivector<S>& x, const Multivector<S>& g, const BilinearForm<S>& f) {
  return cmul({g, x, star(g, f)}, f);
}

template <class S>
void require_vector(const Multivector<S>& v) {
  if (!v.is_zero() && !v.is_grade(1)) throw NotAVector();
}

template <class S>
S scalarprod(const Multivector<S>& x, const Multivector<S>& y, const BilinearForm<S>& f) {
  require_vector(x);
  require_vector(y);
  Multivector<S> ys = star(y, f);
  return ((cmul(x, ys, f) + cmul(ys, x, f)) / S(2)).scalar_part();
}

template <class S>
S enorm(const Multivector<S>& v, const BilinearForm<S>& f) {
  require_vector(v);
  return cmul(v, star(v, f), f).scalar_part();
}

// ---- Pin(3) families ---------------------------------------------------------------

// Free symbols, constrained symbols and their relations used across the rotation scenarios.
inline TablePtr groups_table() {
  return make_table(
      {"c1", "c2", "c3", "d1", "d2", "d3", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "v1", "v2", "v3",
       "w1", "w2", "w3", "t1", "t2", "t3", "s1", "s2", "s3", "y1", "y2", "y3", "a", "b", "c", "a1", "a2", "ch", "ca",
       "cb"},
      {{"eps", "1"},
       {"kappa", "1-c1^2-c2^2-c3^2"},
       {"delta", "1-d1^2-d2^2-d3^2"},
       {"lambda1", "1-x2^2-x3^2"},
       {"lambda2", "1-x3^2"},
       {"lambda3", "1-x5^2"},
       {"lambda5", "x6^2-x5^2*x6^2-x6^4"},
       {"lambda7", "x7^2-x5^2*x7^2-x6^2*x7^2-x7^4"},
       {"lambda9", "1-x3^2-x4^2-x8^2"},
       {"lam", "1-a1^2-a2^2"},
       {"sh", "1-ch^2"},
       {"sa", "1-ca^2"},
       {"sb", "1-cb^2"},
       {"r2", "2"},
       {"r3", "3"},
       {"r14", "14"},
       {"r29", "29"}});
}

struct PinFamily {
  std::string name;
  Multivector<PolyRat> element;
  std::vector<std::string> free_symbols;
  std::string constrained;  // symbol fixed (up to sign) by its quadratic relation
};

inline std::vector<PinFamily> pin3_families(const TablePtr& tab) {
  auto s = [&](const char* n) { return PolyRat::symbol(tab, n); };
  auto e = [](Blade b) { return Multivector<PolyRat>::blade(3, b); };
  const Blade E1 = 1, E2 = 2, E3 = 4, E12 = 3, E13 = 5, E23 = 6, E123 = 7;
  std::vector<PinFamily> out;
  out.push_back({"eps*Id", e(0) * s("eps"), {}, "eps"});
  out.push_back({"lambda2*e1+x3*e2", e(E1) * s("lambda2") + e(E2) * s("x3"), {"x3"}, "lambda2"});
  out.push_back({"lambda1*e3+x2*e1+x3*e2", e(E3) * s("lambda1") + e(E1) * s("x2") + e(E2) * s("x3"), {"x2", "x3"},
                 "lambda1"});
  out.push_back({"lambda3*Id+x5*e12", e(0) * s("lambda3") + e(E12) * s("x5"), {"x5"}, "lambda3"});
  out.push_back({"lambda5*Id/x6+x5*e12+x6*e13", e(0) * (s("lambda5") / s("x6")) + e(E12) * s("x5") + e(E13) * s("x6"),
                 {"x5", "x6"}, "lambda5"});
  out.push_back({"lambda7*Id/x7+x5*e12+x6*e13+x7*e23",
                 e(0) * (s("lambda7") / s("x7")) + e(E12) * s("x5") + e(E13) * s("x6") + e(E23) * s("x7"),
                 {"x5", "x6", "x7"}, "lambda7"});
  out.push_back({"lambda9*e1+x3*e2+x4*e3+x8*e123",
                 e(E1) * s("lambda9") + e(E2) * s("x3") + e(E3) * s("x4") + e(E123) * s("x8"), {"x3", "x4", "x8"},
                 "lambda9"});
  return out;
}

struct FamilySample {
  Multivector<Float> g;
  std::vector<double> values;  // indexed by symbol
};

// Free symbols drawn from the open ball of radius 0.95 (nonzero), the constrained symbol
// set to a random sign times the root of its relation.
inline FamilySample sample_family(const PinFamily& fam, const TablePtr& tab, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  std::vector<double> vals(tab->size(), 0.0);
  for (;;) {
    double r2 = 0;
    for (const auto& n : fam.free_symbols) {
      double x = u(rng);
      vals[tab->index(n)] = x;
      r2 += x * x;
    }
    bool small = false;
    for (const auto& n : fam.free_symbols) small = small || std::fabs(vals[tab->index(n)]) < 1e-3;
    if (r2 < 0.95 * 0.95 && !small) break;
  }
  const int ci = tab->index(fam.constrained);
  double rel = PolyRat(tab, tab->relation(ci)).eval(vals);
  double sign = (rng() & 1) ? 1.0 : -1.0;
  vals[ci] = sign * std::sqrt(std::max(rel, 0.0));
  FamilySample s;
  s.values = vals;
  s.g = fam.element.convert<Float>([&](const PolyRat& c) { return Float(c.eval(vals)); });
  return s;
}

// ---- Spin(3) and quaternions ---------------------------------------------------------

template <class S>
Multivector<S> spin3_general(const S& c1, const S& c2, const S& c3, const S& eps_kappa) {
  Multivector<S> g(3);
  g.add_term(0, eps_kappa);
  g.add_term(3, c3);
  g.add_term(5, c2);
  g.add_term(6, c1);
  return g;
}

inline Multivector<Float> spin3_general(double c1, double c2, double c3, int eps) {
  double r = 1 - c1 * c1 - c2 * c2 - c3 * c3;
  if (r < -float_tolerance().abs) throw OutOfBall();
  double kappa = std::sqrt(std::max(r, 0.0));
  return spin3_general<Float>(c1, c2, c3, eps * kappa);
}

// eps·kappa·Id + c3 e12 + c2 e13 + c1 e23 over the constrained symbols of `tab`.
inline Multivector<PolyRat> spin3_symbolic(const TablePtr& tab, const std::string& c = "c",
                                           const std::string& kappa = "kappa", bool with_eps = true) {
  auto s = [&](const std::string& n) { return PolyRat::symbol(tab, n); };
  PolyRat lead = with_eps ? s("eps") * s(kappa) : s(kappa);
  return spin3_general<PolyRat>(s(c + "1"), s(c + "2"), s(c + "3"), lead);
}

template <class S>
std::vector<std::vector<Multivector<S>>> quaternion_table() {
  auto f = cl03<S>();
  std::vector<Multivector<S>> q{Multivector<S>::blade(3, 3), Multivector<S>::blade(3, 5),
                                Multivector<S>::blade(3, 6)};
  std::vector<std::vector<Multivector<S>>> t(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i].push_back(cmul(q[i], q[j], f));
  return t;
}

template <class S>
Multivector<S> rot(const Multivector<S>& v, const Multivector<S>& quat) {
  require_vector(v);
  if (!quat.is_even()) throw BadShape("quaternion must be even");
  return spin_action(v, quat, cl03<S>());
}

// Unit quaternion dual to an axis of unit length: −axis∘e123.
template <class S>
Multivector<S> qaxis(const Multivector<S>& axis) {
  require_vector(axis);
  return -cmul(axis, Multivector<S>::blade(3, 7), cl03<S>());
}

// cos(θ/2)Id + sin(θ/2) qaxis(a/|a|); the caller supplies the half-angle values and |a|.
template <class S>
Multivector<S> qrot(const S& a1, const S& a2, const S& a3, const S& c, const S& s, const S& norm) {
  S n2 = a1 * a1 + a2 * a2 + a3 * a3;
  if (is_zero(n2)) throw ZeroAxis();
  if (!(norm * norm == n2)) throw Error("norm does not match the axis");
  Multivector<S> axis = Multivector<S>::vector(3, {a1 / norm, a2 / norm, a3 / norm});
  return Multivector<S>::scalar(3, c) + qaxis(axis) * s;
}

inline Multivector<Float> qrot(double a1, double a2, double a3, double theta) {
  double n = std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);
  if (n == 0.0) throw ZeroAxis();
  return qrot<Float>(a1, a2, a3, std::cos(theta / 2), std::sin(theta / 2), n);
}

template <class S>
std::pair<Multivector<S>, Multivector<S>> compose_check(const Multivector<S>& qa, const Multivector<S>& qb,
                                                        const Multivector<S>& v) {
  return {rot(v, cmul(qa, qb, cl03<S>())), rot(rot(v, qb), qa)};
}

// ---- rigid motions in Cl(0,3,1) --------------------------------------------------------

template <class S>
bool has_e4(const Multivector<S>& u) {
  return u.uses_index(4);
}

template <class S>
void require_spatial_vector(const Multivector<S>& x) {
  if (!x.is_zero() && !x.is_grade(1)) throw BadShape("expected a vector");
  if (has_e4(x)) throw BadShape("vector has an e4 component");
}

// Lift of an element of Cl(0,3) (or of a spatial vector) into Cl(0,3,1).
template <class S>
Multivector<S> lift4(const Multivector<S>& u) {
  Multivector<S> r(4);
  for (const auto& [b, c] : u.terms()) r.add_term(b, c);
  return r;
}

template <class S>
Multivector<S> ge(const Multivector<S>& g, const Multivector<S>& t) {
  require_spatial_vector(t);
  if (!g.is_even()) throw BadShape("g must be even");
  auto f = cl031<S>();
  Multivector<S> e4 = Multivector<S>::blade(4, 8);
  return g + cmul({t, g, e4}, f) / S(2);
}

template <class S>
Multivector<S> rigid(const Multivector<S>& x, const Multivector<S>& g, const Multivector<S>& t) {
  require_spatial_vector(x);
  require_spatial_vector(t);
  if (!g.is_even()) throw BadShape("g must be even");
  auto f = cl031<S>();
  return cmul({g, x, star(g, f)}, f) + t;
}

template <class S>
S distance_squared(const Multivector<S>& x, const Multivector<S>& y) {
  require_spatial_vector(x);
  require_spatial_vector(y);
  auto f = cl031<S>();
  Multivector<S> d = x - y;
  return cmul(d, star(d, f), f).scalar_part();
}

inline double distance(const Multivector<Float>& x, const Multivector<Float>& y) {
  return std::sqrt(std::max(distance_squared(x, y).value(), 0.0));
}

}  // namespace cliffordlab
