#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cliffordlab/errors.hpp"
#include "cliffordlab/scalar.hpp"

namespace cliffordlab {

using Blade = std::uint32_t;
inline constexpr int kMaxDim = 16;

inline int grade(Blade b) { return std::popcount(b); }

// Sign of e_a ∧ e_b relative to e_{a|b} (ascending index order); masks assumed disjoint.
inline int reorder_sign(Blade a, Blade b) {
  int swaps = 0;
  a >>= 1;
  while (a) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

// Indices (1-based) of a blade in ascending order.
inline std::vector<int> blade_indices(Blade b) {
  std::vector<int> out;
  for (int i = 0; i < kMaxDim; ++i)
    if (b & (1u << i)) out.push_back(i + 1);
  return out;
}

inline Blade blade_from_indices(const std::vector<int>& idx) {
  Blade b = 0;
  for (int i : idx) {
    if (i < 1 || i > kMaxDim) throw OutOfRange("blade index");
    b |= 1u << (i - 1);
  }
  return b;
}

inline std::string blade_name(Blade b) {
  if (b == 0) return "Id";
  std::string s = "e";
  bool wide = false;
  for (int i : blade_indices(b))
    if (i >= 10) wide = true;
  bool first = true;
  for (int i : blade_indices(b)) {
    if (wide && !first) s += "_";
    s += std::to_string(i);
    first = false;
  }
  return s;
}

// Graded-lexicographic order on blades: by grade, then by index list.
inline bool graded_less(Blade a, Blade b) {
  int ga = grade(a), gb = grade(b);
  if (ga != gb) return ga < gb;
  return blade_indices(a) < blade_indices(b);
}

template <class S>
class Multivector {
 public:
  using Scalar = S;

  Multivector() = default;
  explicit Multivector(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxDim) throw OutOfRange("dimension");
  }
  static Multivector scalar(int dim, const S& c) { return blade(dim, 0, c); }
  static Multivector blade(int dim, Blade b, const S& c = S(1)) {
    Multivector m(dim);
    m.add_term(b, c);
    return m;
  }
  static Multivector basis_vector(int dim, int i) { return blade(dim, 1u << (i - 1)); }
  static Multivector vector(int dim, const std::vector<S>& coords) {
    Multivector m(dim);
    for (std::size_t i = 0; i < coords.size(); ++i) m.add_term(1u << i, coords[i]);
    return m;
  }

  int dim() const { return dim_; }
  const std::map<Blade, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  S coeff(Blade b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? S(0) : it->second;
  }
  S scalar_part() const { return coeff(0); }

  void add_term(Blade b, const S& c) {
    if (b >> dim_) throw OutOfRange("blade outside dimension");
    if (exactly_zero(c)) return;
    auto it = terms_.find(b);
    if (it == terms_.end()) {
      terms_.emplace(b, c);
    } else {
      it->second = it->second + c;
      if (exactly_zero(it->second)) terms_.erase(it);
    }
  }
  void set(Blade b, const S& c) {
    terms_.erase(b);
    add_term(b, c);
  }

  Multivector grade_part(int k) const {
    if (k < 0 || k > dim_) throw OutOfRange("grade");
    Multivector r(dim_);
    for (const auto& [b, c] : terms_)
      if (grade(b) == k) r.terms_.emplace(b, c);
    return r;
  }
  // Shape predicates ignore coefficients the scalar type treats as zero (float round-off).
  bool is_grade(int k) const {
    for (const auto& [b, c] : terms_)
      if (grade(b) != k && !c.is_zero()) return false;
    return true;
  }
  bool is_even() const {
    for (const auto& [b, c] : terms_)
      if (grade(b) % 2 && !c.is_zero()) return false;
    return true;
  }
  bool is_odd() const {
    for (const auto& [b, c] : terms_)
      if (grade(b) % 2 == 0 && !c.is_zero()) return false;
    return true;
  }
  bool uses_index(int i) const {
    for (const auto& [b, c] : terms_)
      if ((b & (1u << (i - 1))) && !c.is_zero()) return true;
    return false;
  }
  std::vector<Blade> blades() const {
    std::vector<Blade> out;
    for (const auto& [b, c] : terms_) out.push_back(b);
    std::sort(out.begin(), out.end(), graded_less);
    return out;
  }

  template <class F>
  Multivector map_coeffs(F&& f) const {
    Multivector r(dim_);
    for (const auto& [b, c] : terms_) r.add_term(b, f(c));
    return r;
  }
  template <class T, class F>
  Multivector<T> convert(F&& f) const {
    Multivector<T> r(dim_);
    for (const auto& [b, c] : terms_) r.add_term(b, f(c));
    return r;
  }

  Multivector operator-() const {
    Multivector r(dim_);
    for (const auto& [b, c] : terms_) r.terms_.emplace(b, -c);
    return r;
  }
  Multivector& operator+=(const Multivector& o) {
    check(o);
    for (const auto& [b, c] : o.terms_) add_term(b, c);
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check(o);
    for (const auto& [b, c] : o.terms_) add_term(b, -c);
    return *this;
  }
  Multivector& operator*=(const S& s) {
    if (exactly_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second = it->second * s;
      if (exactly_zero(it->second)) it = terms_.erase(it);
      else ++it;
    }
    return *this;
  }
  Multivector& operator/=(const S& s) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second = it->second / s;
      if (exactly_zero(it->second)) it = terms_.erase(it);
      else ++it;
    }
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, const S& s) { return a *= s; }
  friend Multivector operator*(const S& s, Multivector a) { return a *= s; }
  friend Multivector operator/(Multivector a, const S& s) { return a /= s; }

  // Coefficientwise equality in the ring (tolerant for Float).
  friend bool operator==(const Multivector& a, const Multivector& b) {
    if (a.dim_ != b.dim_) return false;
    for (const auto& [bl, c] : a.terms_)
      if (!(c == b.coeff(bl))) return false;
    for (const auto& [bl, c] : b.terms_)
      if (!a.terms_.count(bl) && !(c == S(0))) return false;
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (Blade b : blades()) {
      std::string cs = cliffordlab::to_string(terms_.at(b));
      bool compound = cs.find_first_of("+-", 1) != std::string::npos && cs.front() != '(';
      if (compound) cs = "(" + cs + ")";
      std::string term = cs == "1" ? blade_name(b) : (cs == "-1" ? "-" + blade_name(b) : cs + "*" + blade_name(b));
      if (!out.empty() && term[0] != '-') out += "+";
      out += term;
    }
    return out;
  }

 private:
  int dim_ = 0;
  std::map<Blade, S> terms_;

  void check(const Multivector& o) const {
    if (o.dim_ != dim_) throw DimMismatch();
  }
};

// Basis blades in graded-lexicographic order.
enum class BasisFilter { all, even, odd };

inline std::vector<Blade> cbasis(int n, BasisFilter filter = BasisFilter::all) {
  std::vector<Blade> out;
  for (Blade b = 0; b < (1u << n); ++b) {
    if (filter == BasisFilter::even && grade(b) % 2) continue;
    if (filter == BasisFilter::odd && grade(b) % 2 == 0) continue;
    out.push_back(b);
  }
  std::sort(out.begin(), out.end(), graded_less);
  return out;
}

inline std::vector<Blade> cbasis_grade(int n, int k) {
  std::vector<Blade> out;
  for (Blade b : cbasis(n))
    if (grade(b) == k) out.push_back(b);
  return out;
}

}  // namespace cliffordlab
