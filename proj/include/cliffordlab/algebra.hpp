#pragma once

#include <bit>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cliffordlab/errors.hpp"
#include "cliffordlab/linalg.hpp"
#include "cliffordlab/multivector.hpp"

namespace cliffordlab {

// B = g + A with g symmetric and A antisymmetric.
template <class S>
std::pair<Matrix<S>, Matrix<S>> split_form(const Matrix<S>& b) {
  const std::size_t n = b.size();
  for (const auto& r : b)
    if (r.size() != n) throw NonSquare();
  Matrix<S> g = zero_matrix<S>(n, n), a = zero_matrix<S>(n, n);
  const S half = from_rational<S>(Rational(1, 2));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g[i][j] = (b[i][j] + b[j][i]) * half;
      a[i][j] = (b[i][j] - b[j][i]) * half;
    }
  return {g, a};
}

enum class FormPart { B, g, A };
enum class Side { left, right };

template <class S>
class BilinearForm {
 public:
  BilinearForm() = default;
  explicit BilinearForm(Matrix<S> b) : b_(std::move(b)) {
    auto [g, a] = split_form(b_);
    g_ = std::move(g);
    a_ = std::move(a);
    symmetric_ = true;
    for (const auto& r : a_)
      for (const auto& x : r)
        if (!exactly_zero(x)) symmetric_ = false;
  }
  static BilinearForm diagonal(const std::vector<S>& d) {
    Matrix<S> m = zero_matrix<S>(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
    return BilinearForm(m);
  }
  static BilinearForm signature(int p, int q, int r = 0) {
    std::vector<S> d;
    for (int i = 0; i < p; ++i) d.push_back(S(1));
    for (int i = 0; i < q; ++i) d.push_back(S(-1));
    for (int i = 0; i < r; ++i) d.push_back(S(0));
    return diagonal(d);
  }

  int dim() const { return static_cast<int>(b_.size()); }
  const Matrix<S>& B() const { return b_; }
  const Matrix<S>& g() const { return g_; }
  const Matrix<S>& A() const { return a_; }
  const Matrix<S>& part(FormPart p) const {
    return p == FormPart::B ? b_ : (p == FormPart::g ? g_ : a_);
  }
  bool symmetric() const { return symmetric_; }
  // Symmetric form with the same g (drops A).
  BilinearForm symmetric_part() const { return BilinearForm(g_); }

  const S& det_g() const {
    if (!det_) det_ = determinant(g_);
    return *det_;
  }
  bool nondegenerate() const { return !negligible(det_g(), 1.0); }

 private:
  Matrix<S> b_, g_, a_;
  bool symmetric_ = true;
  mutable std::optional<S> det_;
};

template <class S>
Multivector<S> wedge(const Multivector<S>& u, const Multivector<S>& v) {
  if (u.dim() != v.dim()) throw DimMismatch();
  Multivector<S> r(u.dim());
  for (const auto& [a, ca] : u.terms())
    for (const auto& [b, cb] : v.terms()) {
      if (a & b) continue;
      S c = ca * cb;
      r.add_term(a | b, reorder_sign(a, b) > 0 ? c : -c);
    }
  return r;
}

namespace detail {

// e_i ⌟ (blade) accumulated into r with factor c; i is 0-based.
template <class S>
void lc_vec_blade(int i, Blade b, const S& c, const Matrix<S>& m, Multivector<S>& r) {
  int pos = 0;
  for (Blade rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    const S& mij = m[i][j];
    if (!exactly_zero(mij)) {
      S t = c * mij;
      r.add_term(b & ~(1u << j), pos % 2 ? -t : t);
    }
    ++pos;
  }
}

// (blade) ⌞ e_i accumulated into r with factor c.
template <class S>
void rc_blade_vec(Blade b, int i, const S& c, const Matrix<S>& m, Multivector<S>& r) {
  int k = grade(b), pos = 0;
  for (Blade rest = b; rest; rest &= rest - 1) {
    ++pos;
    int j = std::countr_zero(rest);
    const S& mji = m[j][i];
    if (!exactly_zero(mji)) {
      S t = c * mji;
      r.add_term(b & ~(1u << j), (k - pos) % 2 ? -t : t);
    }
  }
}

template <class S>
Multivector<S> lc_vec(int i, const Multivector<S>& x, const Matrix<S>& m) {
  Multivector<S> r(x.dim());
  for (const auto& [b, c] : x.terms()) lc_vec_blade(i, b, c, m, r);
  return r;
}

template <class S>
Multivector<S> rc_vec(const Multivector<S>& x, int i, const Matrix<S>& m) {
  Multivector<S> r(x.dim());
  for (const auto& [b, c] : x.terms()) rc_blade_vec(b, i, c, m, r);
  return r;
}

// e_i ∘ x = e_i ∧ x + e_i ⌟ x
template <class S>
Multivector<S> vmul(int i, const Multivector<S>& x, const Matrix<S>& m) {
  Multivector<S> r(x.dim());
  const Blade bi = 1u << i;
  for (const auto& [b, c] : x.terms()) {
    if (!(b & bi)) r.add_term(b | bi, reorder_sign(bi, b) > 0 ? c : -c);
    lc_vec_blade(i, b, c, m, r);
  }
  return r;
}

// Memoized left action of Grassmann blades on a fixed right factor v.
template <class S>
class BladeAction {
 public:
  BladeAction(const Multivector<S>& v, const Matrix<S>& m) : v_(v), m_(m) {}

  const Multivector<S>& apply(Blade b) {
    if (b == 0) return v_;
    auto it = memo_.find(b);
    if (it != memo_.end()) return it->second;
    int i = std::countr_zero(b);
    Blade r = b & (b - 1);
    Multivector<S> res = vmul(i, apply(r), m_);
    // e_b = e_i ∘ e_r − e_i ⌟ e_r
    int pos = 0;
    for (Blade rest = r; rest; rest &= rest - 1) {
      int j = std::countr_zero(rest);
      const S& mij = m_[i][j];
      if (!exactly_zero(mij)) {
        const Multivector<S>& sub = apply(r & ~(1u << j));
        Multivector<S> t = sub * mij;
        if (pos % 2) res += t;
        else res -= t;
      }
      ++pos;
    }
    return memo_.emplace(b, std::move(res)).first->second;
  }

 private:
  const Multivector<S>& v_;
  const Matrix<S>& m_;
  std::unordered_map<Blade, Multivector<S>> memo_;
};

}  // namespace detail

// Left contraction: (u ∧ v) ⌟ w = u ⌟ (v ⌟ w).
template <class S>
Multivector<S> left_contract(const Multivector<S>& u, const Multivector<S>& v, const Matrix<S>& m) {
  if (u.dim() != v.dim()) throw DimMismatch();
  Multivector<S> r(u.dim());
  for (const auto& [a, ca] : u.terms()) {
    Multivector<S> x = v;
    for (int i = kMaxDim - 1; i >= 0; --i)
      if (a & (1u << i)) x = detail::lc_vec(i, x, m);
    r += x * ca;
  }
  return r;
}

// Right contraction: w ⌞ (u ∧ v) = (w ⌞ u) ⌞ v.
template <class S>
Multivector<S> right_contract(const Multivector<S>& u, const Multivector<S>& v, const Matrix<S>& m) {
  if (u.dim() != v.dim()) throw DimMismatch();
  Multivector<S> r(u.dim());
  for (const auto& [a, ca] : v.terms()) {
    Multivector<S> x = u;
    for (int i = 0; i < kMaxDim; ++i)
      if (a & (1u << i)) x = detail::rc_vec(x, i, m);
    r += x * ca;
  }
  return r;
}

template <class S>
Multivector<S> contract(const Multivector<S>& u, const Multivector<S>& v, const BilinearForm<S>& f,
                        FormPart part, Side side) {
  const auto& m = f.part(part);
  return side == Side::left ? left_contract(u, v, m) : right_contract(u, v, m);
}

// Clifford product for the pairing matrix m.
template <class S>
Multivector<S> cmul_matrix(const Multivector<S>& u, const Multivector<S>& v, const Matrix<S>& m) {
  if (u.dim() != v.dim()) throw DimMismatch();
  detail::BladeAction<S> act(v, m);
  Multivector<S> r(u.dim());
  for (const auto& [a, ca] : u.terms()) r += act.apply(a) * ca;
  return r;
}

template <class S>
Multivector<S> cmul(const Multivector<S>& u, const Multivector<S>& v, const BilinearForm<S>& f) {
  return cmul_matrix(u, v, f.B());
}

template <class S>
Multivector<S> cmulg(const Multivector<S>& u, const Multivector<S>& v, const BilinearForm<S>& f) {
  return cmul_matrix(u, v, f.g());
}

template <class S>
Multivector<S> cmul(std::initializer_list<Multivector<S>> factors, const BilinearForm<S>& f) {
  auto it = factors.begin();
  Multivector<S> r = *it;
  for (++it; it != factors.end(); ++it) r = cmul(r, *it, f);
  return r;
}

template <class S>
Multivector<S> grade_involution(const Multivector<S>& u) {
  Multivector<S> r(u.dim());
  for (const auto& [b, c] : u.terms()) r.add_term(b, grade(b) % 2 ? -c : c);
  return r;
}

// Coefficients over Clifford monomials e_{i1} ∘ ... ∘ e_{ik} (i1 < ... < ik), keyed by index mask.
template <class S>
std::map<Blade, S> cliexpand(const Multivector<S>& u, const Matrix<S>& m) {
  std::map<Blade, S> out;
  std::unordered_map<Blade, Multivector<S>> words;
  auto word = [&](Blade b) -> const Multivector<S>& {
    auto it = words.find(b);
    if (it != words.end()) return it->second;
    Multivector<S> x = Multivector<S>::scalar(u.dim(), S(1));
    for (int i = kMaxDim - 1; i >= 0; --i)
      if (b & (1u << i)) x = detail::vmul(i, x, m);
    return words.emplace(b, std::move(x)).first->second;
  };
  Multivector<S> rem = u;
  while (!rem.is_zero()) {
    Blade top = 0;
    int tg = -1;
    for (const auto& [b, c] : rem.terms())
      if (grade(b) > tg) {
        tg = grade(b);
        top = b;
      }
    S c = rem.coeff(top);
    auto it = out.find(top);
    if (it == out.end()) out.emplace(top, c);
    else it->second = it->second + c;
    rem -= word(top) * c;
  }
  return out;
}

template <class S>
Multivector<S> clieval(const std::map<Blade, S>& expansion, int dim, const Matrix<S>& m) {
  Multivector<S> r(dim);
  for (const auto& [b, c] : expansion) {
    Multivector<S> x = Multivector<S>::scalar(dim, S(1));
    for (int i = kMaxDim - 1; i >= 0; --i)
      if (b & (1u << i)) x = detail::vmul(i, x, m);
    r += x * c;
  }
  return r;
}

// Anti-automorphism of Cl(B) fixing V, via the Clifford-monomial basis.
template <class S>
Multivector<S> reversion(const Multivector<S>& u, const BilinearForm<S>& f) {
  if (f.symmetric()) {
    Multivector<S> r(u.dim());
    for (const auto& [b, c] : u.terms()) {
      int k = grade(b);
      r.add_term(b, (k * (k - 1) / 2) % 2 ? -c : c);
    }
    return r;
  }
  const auto& m = f.B();
  Multivector<S> r(u.dim());
  for (const auto& [b, c] : cliexpand(u, m)) {
    Multivector<S> x = Multivector<S>::scalar(u.dim(), S(1));
    for (int i = 0; i < kMaxDim; ++i)
      if (b & (1u << i)) x = detail::vmul(i, x, m);
    r += x * c;
  }
  return r;
}

template <class S>
Multivector<S> conjugation(const Multivector<S>& u, const BilinearForm<S>& f) {
  return reversion(grade_involution(u), f);
}

// Σ_{k ≤ N} F^{∧k} / k!
template <class S>
Multivector<S> wexp(const Multivector<S>& F, int N) {
  Multivector<S> term = Multivector<S>::scalar(F.dim(), S(1));
  Multivector<S> sum = term;
  for (int k = 1; k <= N; ++k) {
    term = wedge(term, F) / S(k);
    if (term.is_zero()) break;
    sum += term;
  }
  return sum;
}

// Inverse in Cl(B).  The left-multiplication operator is restricted to the smallest
// coordinate subspace containing Id and closed under u∘(·); u⁻¹ lies there.
template <class S>
Multivector<S> cinv(const Multivector<S>& u, const BilinearForm<S>& f) {
  const int n = u.dim();
  if (u.is_zero()) throw NotInvertible();
  std::vector<Blade> support{0};
  std::unordered_set<Blade> seen{0};
  for (const auto& [b, c] : u.terms())
    if (seen.insert(b).second) support.push_back(b);
  std::map<Blade, Multivector<S>> images;
  for (std::size_t k = 0; k < support.size(); ++k) {
    Blade b = support[k];
    Multivector<S> img = cmul(u, Multivector<S>::blade(n, b), f);
    for (const auto& [bb, c] : img.terms())
      if (seen.insert(bb).second) support.push_back(bb);
    images.emplace(b, std::move(img));
  }
  const std::size_t N = support.size();
  std::map<Blade, std::size_t> row;
  for (std::size_t i = 0; i < N; ++i) row[support[i]] = i;
  Matrix<S> a = zero_matrix<S>(N, N);
  for (std::size_t j = 0; j < N; ++j)
    for (const auto& [b, c] : images.at(support[j]).terms()) a[row.at(b)][j] = c;
  std::vector<S> rhs(N, S(0));
  rhs[row.at(0)] = S(1);
  auto x = solve_unique(a, rhs);
  if (!x) throw NotInvertible();
  Multivector<S> inv(n);
  for (std::size_t j = 0; j < N; ++j) inv.add_term(support[j], (*x)[j]);
  Multivector<S> id = Multivector<S>::scalar(n, S(1));
  if (!(cmul(inv, u, f) == id)) throw NotInvertible("right inverse is not two-sided");
  return inv;
}

// Pseudoscalar j = e_{1..n} and its inverse in Cl(g).
template <class S>
Multivector<S> pseudoscalar(int n) {
  return Multivector<S>::blade(n, (1u << n) - 1);
}

template <class S>
Multivector<S> pseudoscalar_inverse(const BilinearForm<S>& f) {
  const int n = f.dim();
  if (!f.nondegenerate()) throw DegenerateMetric();
  S d = f.det_g();
  Multivector<S> j = pseudoscalar<S>(n) / d;
  return ((n * (n - 1) / 2) % 2) ? -j : j;
}

}  // namespace cliffordlab
