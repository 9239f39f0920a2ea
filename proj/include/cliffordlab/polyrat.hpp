#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cliffordlab/errors.hpp"
#include "cliffordlab/rational.hpp"

namespace cliffordlab {

inline constexpr int kMaxSymbols = 64;

struct Monomial {
  std::array<std::uint8_t, kMaxSymbols> e{};

  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Lexicographic, symbol 0 most significant.
  int cmp(const Monomial& o) const { return std::memcmp(e.data(), o.e.data(), kMaxSymbols); }
  bool is_one() const {
    for (auto x : e)
      if (x) return false;
    return true;
  }
  int degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool divides(const Monomial& o) const {
    for (int i = 0; i < kMaxSymbols; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxSymbols; ++i) {
      int s = a.e[i] + b.e[i];
      if (s > 255) throw OutOfRange("exponent overflow");
      r.e[i] = static_cast<std::uint8_t>(s);
    }
    return r;
  }
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxSymbols; ++i) r.e[i] = static_cast<std::uint8_t>(a.e[i] - b.e[i]);
    return r;
  }
};

struct Term {
  Monomial m;
  mpq_class c;
};

// Sparse polynomial with rational coefficients; terms strictly descending, no zero coefficients.
class Poly {
 public:
  std::vector<Term> terms;

  Poly() = default;
  explicit Poly(std::vector<Term> t) : terms(std::move(t)) {}
  static Poly constant(const mpq_class& c) {
    Poly p;
    if (sgn(c) != 0) p.terms.push_back({Monomial{}, c});
    return p;
  }
  static Poly var(int i, int power = 1) {
    Poly p;
    Term t{Monomial{}, mpq_class(1)};
    t.m.e[i] = static_cast<std::uint8_t>(power);
    p.terms.push_back(t);
    return p;
  }

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms[0].m.is_one()); }
  mpq_class constant_value() const { return terms.empty() ? mpq_class(0) : terms[0].c; }
  const Term& lead() const { return terms.front(); }
  const Term& trail() const { return terms.back(); }
  std::size_t size() const { return terms.size(); }

  int degree() const {
    int d = 0;
    for (const auto& t : terms) d = std::max(d, t.m.degree());
    return d;
  }
  int degree_in(int i) const {
    int d = 0;
    for (const auto& t : terms) d = std::max<int>(d, t.m.e[i]);
    return d;
  }
  Monomial max_exponents() const {
    Monomial r;
    for (const auto& t : terms)
      for (int i = 0; i < kMaxSymbols; ++i) r.e[i] = std::max(r.e[i], t.m.e[i]);
    return r;
  }
  bool uses(int i) const {
    for (const auto& t : terms)
      if (t.m.e[i]) return true;
    return false;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
      if (!(a.terms[i].m == b.terms[i].m) || a.terms[i].c != b.terms[i].c) return false;
    return true;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms) t.c = -t.c;
    return r;
  }
  Poly scaled(const mpq_class& c) const {
    if (sgn(c) == 0) return {};
    Poly r = *this;
    for (auto& t : r.terms) t.c *= c;
    return r;
  }
  Poly times_term(const Monomial& m, const mpq_class& c) const {
    Poly r;
    r.terms.reserve(terms.size());
    for (const auto& t : terms) r.terms.push_back({t.m * m, t.c * c});
    return r;
  }

  // this + s * other, merged in one pass
  static Poly axpy(const Poly& a, const Poly& b, int sign) {
    Poly r;
    r.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
      int c;
      if (i == a.terms.size()) c = 1;
      else if (j == b.terms.size()) c = -1;
      else c = -a.terms[i].m.cmp(b.terms[j].m);
      if (c < 0) {
        r.terms.push_back(a.terms[i++]);
      } else if (c > 0) {
        r.terms.push_back(b.terms[j++]);
        if (sign < 0) r.terms.back().c = -r.terms.back().c;
      } else {
        mpq_class s = sign > 0 ? mpq_class(a.terms[i].c + b.terms[j].c)
                               : mpq_class(a.terms[i].c - b.terms[j].c);
        if (sgn(s) != 0) r.terms.push_back({a.terms[i].m, s});
        ++i;
        ++j;
      }
    }
    return r;
  }
  friend Poly operator+(const Poly& a, const Poly& b) { return axpy(a, b, 1); }
  friend Poly operator-(const Poly& a, const Poly& b) { return axpy(a, b, -1); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.terms.empty() || b.terms.empty()) return {};
    if (a.terms.size() == 1) return b.times_term(a.terms[0].m, a.terms[0].c);
    if (b.terms.size() == 1) return a.times_term(b.terms[0].m, b.terms[0].c);
    std::vector<Term> raw;
    raw.reserve(a.terms.size() * b.terms.size());
    for (const auto& x : a.terms)
      for (const auto& y : b.terms) raw.push_back({x.m * y.m, x.c * y.c});
    std::sort(raw.begin(), raw.end(),
              [](const Term& s, const Term& t) { return s.m.cmp(t.m) > 0; });
    Poly r;
    for (auto& t : raw) {
      if (!r.terms.empty() && r.terms.back().m == t.m) {
        r.terms.back().c += t.c;
      } else {
        if (!r.terms.empty() && sgn(r.terms.back().c) == 0) r.terms.pop_back();
        r.terms.push_back(std::move(t));
      }
    }
    if (!r.terms.empty() && sgn(r.terms.back().c) == 0) r.terms.pop_back();
    return r;
  }

  Poly pow(int k) const {
    Poly r = constant(1), b = *this;
    while (k > 0) {
      if (k & 1) r = r * b;
      k >>= 1;
      if (k) b = b * b;
    }
    return r;
  }

  // Exact quotient a/d, or nullopt when d does not divide a.
  static std::optional<Poly> divide_exact(const Poly& a, const Poly& d) {
    if (d.is_zero()) throw DivisionByZero();
    if (a.is_zero()) return Poly{};
    if (d.is_constant()) return a.scaled(mpq_class(1) / d.terms[0].c);
    if (!d.lead().m.divides(a.lead().m) || !d.trail().m.divides(a.trail().m)) return std::nullopt;
    if (!d.max_exponents().divides(a.max_exponents())) return std::nullopt;
    Poly rem = a, q;
    const Term& ld = d.lead();
    std::size_t guard = 0;
    while (!rem.is_zero()) {
      const Term& lt = rem.lead();
      if (!ld.m.divides(lt.m)) return std::nullopt;
      Monomial m = lt.m / ld.m;
      mpq_class c = lt.c / ld.c;
      q.terms.push_back({m, c});
      rem = rem - d.times_term(m, c);
      if (++guard > 1000000) return std::nullopt;
    }
    return q;
  }

  // Monic normalization: returns the leading coefficient and divides it out.
  mpq_class make_monic() {
    if (terms.empty()) return 0;
    mpq_class lc = terms[0].c;
    if (lc != 1)
      for (auto& t : terms) t.c /= lc;
    return lc;
  }

  // Split p = p0 + p1 * x_i where the exponent of x_i is at most one.
  std::pair<Poly, Poly> split_linear(int i) const {
    Poly p0, p1;
    for (const auto& t : terms) {
      if (t.m.e[i] == 0) {
        p0.terms.push_back(t);
      } else {
        Term u = t;
        u.m.e[i] -= 1;
        p1.terms.push_back(u);
      }
    }
    return {p0, p1};
  }

  // Coefficients in powers of x_i (index = power).
  std::vector<Poly> coefficients_in(int i) const {
    std::vector<Poly> out(degree_in(i) + 1);
    for (const auto& t : terms) {
      Term u = t;
      int k = u.m.e[i];
      u.m.e[i] = 0;
      out[k].terms.push_back(u);
    }
    for (auto& p : out) {
      std::sort(p.terms.begin(), p.terms.end(),
                [](const Term& s, const Term& t) { return s.m.cmp(t.m) > 0; });
    }
    return out;
  }
};

// Ordered symbol names with optional quadratic relations s^2 = P(earlier symbols).
class SymbolTable {
 public:
  int add(const std::string& name) {
    if (find(name) >= 0) throw ParseError("duplicate symbol " + name);
    if (static_cast<int>(names_.size()) >= kMaxSymbols) throw OutOfRange("too many symbols");
    names_.push_back(name);
    rel_.emplace_back();
    return static_cast<int>(names_.size()) - 1;
  }
  int add_constrained(const std::string& name, const Poly& relation) {
    for (const auto& t : relation.terms)
      for (int i = static_cast<int>(names_.size()); i < kMaxSymbols; ++i)
        if (t.m.e[i]) throw ParseError("relation uses a later symbol");
    int idx = add(name);
    rel_[idx] = relation;
    return idx;
  }
  // Relation text is parsed over the symbols declared so far.
  int add_constrained(const std::string& name, const std::string& relation);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(i); }
  int find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }
  int index(const std::string& name) const {
    int i = find(name);
    if (i < 0) throw ParseError("unknown symbol " + name);
    return i;
  }
  bool constrained(int i) const { return rel_.at(i).has_value(); }
  const Poly& relation(int i) const { return *rel_.at(i); }
  bool any_constraint() const {
    for (const auto& r : rel_)
      if (r) return true;
    return false;
  }

  // Rewrite s^k (k >= 2) with the relations until every constrained exponent is <= 1.
  Poly reduce(Poly p) const {
    if (!any_constraint()) return p;
    for (;;) {
      Poly keep, extra;
      bool changed = false;
      for (auto& t : p.terms) {
        int s = -1;
        for (int i = size() - 1; i >= 0; --i)
          if (rel_[i] && t.m.e[i] >= 2) {
            s = i;
            break;
          }
        if (s < 0) {
          keep.terms.push_back(std::move(t));
          continue;
        }
        changed = true;
        Term base = t;
        int k = base.m.e[s] / 2;
        base.m.e[s] = static_cast<std::uint8_t>(base.m.e[s] % 2);
        Poly rep = rel_[s]->pow(k).times_term(base.m, base.c);
        extra = extra + rep;
      }
      if (!changed) return keep;
      p = keep + extra;
    }
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<Poly>> rel_;
};

using TablePtr = std::shared_ptr<const SymbolTable>;

// Element of Q(symbols) modulo the quadratic relations.  The denominator is a
// product of monic factors that never involve constrained symbols.
class PolyRat {
 public:
  struct Factor {
    Poly p;
    int mult;
  };

  PolyRat() = default;
  PolyRat(int v) : num_(Poly::constant(v)) {}    // NOLINT(google-explicit-constructor)
  PolyRat(long v) : num_(Poly::constant(v)) {}   // NOLINT(google-explicit-constructor)
  PolyRat(const Rational& r) : num_(Poly::constant(r.raw())) {}  // NOLINT
  PolyRat(TablePtr tab, Poly num) : tab_(std::move(tab)), num_(std::move(num)) {
    if (tab_) num_ = tab_->reduce(std::move(num_));
  }

  static PolyRat symbol(const TablePtr& tab, int i) { return PolyRat(tab, Poly::var(i)); }
  static PolyRat symbol(const TablePtr& tab, const std::string& name) {
    return symbol(tab, tab->index(name));
  }

  const TablePtr& table() const { return tab_; }
  const Poly& num() const { return num_; }
  const std::vector<Factor>& den() const { return den_; }
  Poly den_poly() const {
    Poly d = Poly::constant(1);
    for (const auto& f : den_) d = d * f.p.pow(f.mult);
    return d;
  }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  Rational constant_value() const {
    if (!is_constant()) throw ParseError("not a constant");
    return Rational(num_.constant_value());
  }
  bool uses(int i) const {
    if (num_.uses(i)) return true;
    for (const auto& f : den_)
      if (f.p.uses(i)) return true;
    return false;
  }
  std::size_t complexity() const {
    std::size_t c = num_.size();
    for (const auto& f : den_) c += f.p.size() * f.mult;
    return c;
  }

  PolyRat operator-() const {
    PolyRat r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend PolyRat operator*(const PolyRat& a, const PolyRat& b) {
    PolyRat r;
    r.tab_ = join(a.tab_, b.tab_);
    if (a.is_zero() || b.is_zero()) return r;
    r.num_ = a.num_ * b.num_;
    if (r.tab_ && (a.has_constrained() && b.has_constrained())) r.num_ = r.tab_->reduce(std::move(r.num_));
    r.den_ = a.den_;
    for (const auto& f : b.den_) insert_factor(r.den_, f.p, f.mult);
    r.cancel();
    return r;
  }

  friend PolyRat operator+(const PolyRat& a, const PolyRat& b) { return combine(a, b, 1); }
  friend PolyRat operator-(const PolyRat& a, const PolyRat& b) { return combine(a, b, -1); }

  PolyRat inverse() const {
    if (is_zero()) throw DivisionByZero();
    Poly n = num_;
    Poly conj = Poly::constant(1);
    if (tab_) {
      for (;;) {
        int s = -1;
        for (int i = tab_->size() - 1; i >= 0; --i)
          if (tab_->constrained(i) && n.uses(i)) {
            s = i;
            break;
          }
        if (s < 0) break;
        auto [n0, n1] = n.split_linear(s);
        Poly c = n0 - n1 * Poly::var(s);
        n = tab_->reduce(n * c);
        conj = tab_->reduce(conj * c);
        if (n.is_zero()) throw DivisionByZero("zero divisor");
      }
    }
    PolyRat r;
    r.tab_ = tab_;
    r.num_ = conj;
    for (const auto& f : den_) r.num_ = r.num_ * f.p.pow(f.mult);
    mpq_class c = factorize(n, r.den_);
    r.num_ = r.num_.scaled(mpq_class(1) / c);
    r.cancel();
    return r;
  }

  friend PolyRat operator/(const PolyRat& a, const PolyRat& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (b.is_constant()) {
      PolyRat r = a;
      r.num_ = r.num_.scaled(mpq_class(1) / b.num_.constant_value());
      r.tab_ = join(a.tab_, b.tab_);
      return r;
    }
    return a * b.inverse();
  }

  PolyRat& operator+=(const PolyRat& o) { return *this = *this + o; }
  PolyRat& operator-=(const PolyRat& o) { return *this = *this - o; }
  PolyRat& operator*=(const PolyRat& o) { return *this = *this * o; }
  PolyRat& operator/=(const PolyRat& o) { return *this = *this / o; }

  friend bool operator==(const PolyRat& a, const PolyRat& b) { return (a - b).is_zero(); }

  PolyRat pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    PolyRat r(1), base = *this;
    r.tab_ = tab_;
    while (k > 0) {
      if (k & 1) r = r * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return r;
  }

  // Replace symbols by values; relations are re-applied and bound constrained symbols are checked.
  PolyRat subs(const std::map<int, PolyRat>& bind) const {
    if (bind.empty() || !tab_) return *this;
    for (const auto& [s, v] : bind) {
      if (tab_->constrained(s)) {
        PolyRat rel(tab_, tab_->relation(s));
        PolyRat check = v * v - rel.subs_unchecked(bind);
        if (!check.is_zero()) throw InconsistentBinding("binding violates relation of " + tab_->name(s));
      }
    }
    return subs_unchecked(bind);
  }

  PolyRat subs_unchecked(const std::map<int, PolyRat>& bind) const {
    if (bind.empty() || !tab_) return *this;
    std::map<std::pair<int, int>, PolyRat> cache;
    auto power = [&](int i, int e) -> PolyRat {
      auto key = std::make_pair(i, e);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      auto b = bind.find(i);
      PolyRat v = b != bind.end() ? b->second.pow(e) : PolyRat(tab_, Poly::var(i, e));
      cache.emplace(key, v);
      return v;
    };
    auto eval = [&](const Poly& p) {
      PolyRat acc;
      acc.tab_ = tab_;
      for (const auto& t : p.terms) {
        PolyRat term(Rational(t.c));
        term.tab_ = tab_;
        Monomial rest;
        for (int i = 0; i < kMaxSymbols; ++i) {
          if (!t.m.e[i]) continue;
          if (bind.count(i)) term = term * power(i, t.m.e[i]);
          else rest.e[i] = t.m.e[i];
        }
        if (!rest.is_one()) term = term * PolyRat(tab_, Poly(std::vector<Term>{Term{rest, mpq_class(1)}}));
        acc = acc + term;
      }
      return acc;
    };
    PolyRat r = eval(num_);
    for (const auto& f : den_) r = r / eval(f.p).pow(f.mult);
    return r;
  }
  PolyRat subs(const std::map<std::string, PolyRat>& bind) const {
    std::map<int, PolyRat> idx;
    for (const auto& [k, v] : bind) idx.emplace(tab_->index(k), v);
    return subs(idx);
  }

  // Numeric value with symbol i bound to values[i].
  double eval(const std::vector<double>& values) const {
    auto ev = [&](const Poly& p) {
      double acc = 0;
      for (const auto& t : p.terms) {
        double x = t.c.get_d();
        for (int i = 0; i < kMaxSymbols; ++i)
          if (t.m.e[i]) x *= std::pow(values.at(i), t.m.e[i]);
        acc += x;
      }
      return acc;
    };
    double r = ev(num_);
    for (const auto& f : den_) r /= std::pow(ev(f.p), f.mult);
    return r;
  }

  // Square root when num/den is a perfect square in the polynomial ring.
  std::optional<PolyRat> sqrt() const {
    if (is_zero()) return *this;
    Poly n = num_;
    Poly d = Poly::constant(1);
    for (const auto& f : den_) {
      if (f.mult % 2) n = n * f.p;
      d = d * f.p.pow((f.mult + 1) / 2);
    }
    auto rn = poly_sqrt(n);
    if (!rn) return std::nullopt;
    PolyRat top(tab_, *rn);
    PolyRat bot(tab_, d);
    return top / bot;
  }

  static std::optional<Poly> poly_sqrt(const Poly& p) {
    if (p.is_zero()) return Poly{};
    const Term& lt = p.lead();
    Term root{Monomial{}, 0};
    for (int i = 0; i < kMaxSymbols; ++i) {
      if (lt.m.e[i] % 2) return std::nullopt;
      root.m.e[i] = lt.m.e[i] / 2;
    }
    auto qs = rational_sqrt(lt.c);
    if (!qs) return std::nullopt;
    root.c = *qs;
    Poly r;
    r.terms.push_back(root);
    for (std::size_t it = 0; it <= p.size() + 1; ++it) {
      Poly rem = p - r * r;
      if (rem.is_zero()) return r;
      const Term& t = rem.lead();
      if (!root.m.divides(t.m)) return std::nullopt;
      Term nt{t.m / root.m, t.c / (2 * root.c)};
      if (!r.terms.empty() && nt.m.cmp(r.terms.back().m) >= 0) return std::nullopt;
      r.terms.push_back(nt);
    }
    return std::nullopt;
  }

  static std::optional<mpq_class> rational_sqrt(const mpq_class& c) {
    if (sgn(c) < 0) return std::nullopt;
    mpz_class n = c.get_num(), d = c.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return mpq_class(rn, rd);
  }

  std::string to_string() const {
    std::string n = poly_string(num_, tab_.get());
    if (den_.empty()) return n;
    std::string d;
    for (const auto& f : den_) {
      if (!d.empty()) d += "*";
      std::string fs = poly_string(f.p, tab_.get());
      bool single = f.p.size() == 1;
      d += single ? fs : "(" + fs + ")";
      if (f.mult > 1) d += "^" + std::to_string(f.mult);
    }
    bool nsingle = num_.size() == 1;
    bool dsingle = den_.size() == 1 && den_[0].mult == 1;
    return (nsingle ? n : "(" + n + ")") + "/" + (dsingle ? d : "(" + d + ")");
  }

  static std::string poly_string(const Poly& p, const SymbolTable* tab) {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t k = 0; k < p.terms.size(); ++k) {
      const Term& t = p.terms[k];
      mpq_class c = t.c;
      bool neg = sgn(c) < 0;
      if (neg) c = -c;
      if (k == 0) out += neg ? "-" : "";
      else out += neg ? "-" : "+";
      std::string mono;
      for (int i = 0; i < kMaxSymbols; ++i) {
        if (!t.m.e[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += tab ? tab->name(i) : "x" + std::to_string(i);
        if (t.m.e[i] > 1) mono += "^" + std::to_string(t.m.e[i]);
      }
      if (mono.empty()) out += c.get_str();
      else if (c == 1) out += mono;
      else out += c.get_str() + "*" + mono;
    }
    return out;
  }

  static TablePtr join(const TablePtr& a, const TablePtr& b) {
    if (!a) return b;
    if (!b || a == b) return a;
    throw MixedRings();
  }

 private:
  TablePtr tab_;
  Poly num_;
  std::vector<Factor> den_;

  bool has_constrained() const {
    if (!tab_ || !tab_->any_constraint()) return false;
    for (int i = 0; i < tab_->size(); ++i)
      if (tab_->constrained(i) && num_.uses(i)) return true;
    return false;
  }

  static PolyRat combine(const PolyRat& a, const PolyRat& b, int sign) {
    PolyRat r;
    r.tab_ = join(a.tab_, b.tab_);
    if (b.is_zero()) {
      r.num_ = a.num_;
      r.den_ = a.den_;
      return r;
    }
    if (a.is_zero()) {
      r.num_ = sign > 0 ? b.num_ : -b.num_;
      r.den_ = b.den_;
      return r;
    }
    if (a.den_.empty() && b.den_.empty()) {
      r.num_ = Poly::axpy(a.num_, b.num_, sign);
      return r;
    }
    // common multiple by structural factor matching
    std::vector<Factor> l = a.den_;
    for (const auto& f : b.den_) {
      bool found = false;
      for (auto& g : l)
        if (g.p == f.p) {
          g.mult = std::max(g.mult, f.mult);
          found = true;
          break;
        }
      if (!found) l.push_back(f);
    }
    auto cofactor = [&](const std::vector<Factor>& d) {
      Poly c = Poly::constant(1);
      for (const auto& g : l) {
        int have = 0;
        for (const auto& f : d)
          if (f.p == g.p) have = f.mult;
        if (g.mult > have) c = c * g.p.pow(g.mult - have);
      }
      return c;
    };
    r.num_ = Poly::axpy(a.num_ * cofactor(a.den_), b.num_ * cofactor(b.den_), sign);
    r.den_ = std::move(l);
    r.cancel();
    return r;
  }

  void cancel() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      while (it->mult > 0) {
        auto q = Poly::divide_exact(num_, it->p);
        if (!q) break;
        num_ = std::move(*q);
        --it->mult;
      }
      if (it->mult == 0) it = den_.erase(it);
      else ++it;
    }
  }

  static int total_degree(const Poly& p) { return p.degree(); }

  static void insert_factor(std::vector<Factor>& l, Poly p, int mult) {
    if (p.is_constant() || mult == 0) return;
    for (auto& f : l)
      if (f.p == p) {
        f.mult += mult;
        return;
      }
    for (std::size_t i = 0; i < l.size(); ++i) {
      int dp = total_degree(p), df = total_degree(l[i].p);
      if (df < dp) {
        if (auto q = Poly::divide_exact(p, l[i].p)) {
          Poly f = l[i].p;
          insert_factor(l, f, mult);
          insert_factor(l, std::move(*q), mult);
          return;
        }
      } else if (dp < df) {
        if (auto q = Poly::divide_exact(l[i].p, p)) {
          int m = l[i].mult;
          l.erase(l.begin() + static_cast<long>(i));
          insert_factor(l, p, m + mult);
          insert_factor(l, std::move(*q), m);
          return;
        }
      }
    }
    l.push_back({std::move(p), mult});
  }

  // Splits n into monic factors appended to l; returns the leftover rational constant.
  static mpq_class factorize(Poly n, std::vector<Factor>& l) {
    mpq_class c = n.make_monic();
    // monomial content
    Monomial mn = n.terms[0].m;
    for (const auto& t : n.terms)
      for (int i = 0; i < kMaxSymbols; ++i) mn.e[i] = std::min(mn.e[i], t.m.e[i]);
    if (!mn.is_one()) {
      for (auto& t : n.terms) t.m = t.m / mn;
      for (int i = 0; i < kMaxSymbols; ++i)
        if (mn.e[i]) insert_factor(l, Poly::var(i), mn.e[i]);
    }
    // rational roots of a univariate remainder
    int var = -1, nvars = 0;
    Monomial mx = n.max_exponents();
    for (int i = 0; i < kMaxSymbols; ++i)
      if (mx.e[i]) {
        var = i;
        ++nvars;
      }
    if (nvars == 1 && mx.e[var] >= 2) split_rational_roots(n, var, l);
    insert_factor(l, std::move(n), 1);
    return c;
  }

  static void split_rational_roots(Poly& n, int var, std::vector<Factor>& l) {
    for (;;) {
      if (n.degree_in(var) < 2) return;
      mpz_class lcm_den = 1;
      for (const auto& t : n.terms) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), t.c.get_den_mpz_t());
      mpz_class lead = mpz_class(n.lead().c * lcm_den);
      mpz_class tail = mpz_class(n.trail().c * lcm_den);
      if (!n.trail().m.is_one()) return;
      lead = abs(lead);
      tail = abs(tail);
      if (lead > 1000000 || tail > 1000000) return;
      auto divisors = [](long v) {
        std::vector<long> d;
        for (long k = 1; k * k <= v; ++k)
          if (v % k == 0) {
            d.push_back(k);
            if (k != v / k) d.push_back(v / k);
          }
        return d;
      };
      auto ps = divisors(tail.get_si()), qs = divisors(lead.get_si());
      bool found = false;
      for (long pn : ps) {
        for (long qd : qs) {
          for (int sgn_ : {1, -1}) {
            mpq_class r(sgn_ * pn, qd);
            r.canonicalize();
            Poly lin = Poly::var(var) - Poly::constant(r);
            if (auto q = Poly::divide_exact(n, lin)) {
              insert_factor(l, lin, 1);
              n = std::move(*q);
              n.make_monic();
              found = true;
              break;
            }
          }
          if (found) break;
        }
        if (found) break;
      }
      if (!found) return;
    }
  }
};

inline bool is_zero(const PolyRat& p) { return p.is_zero(); }
inline std::string to_string(const PolyRat& p) { return p.to_string(); }
inline double pivot_cost(const PolyRat& p) { return static_cast<double>(p.complexity()); }

// Recursive-descent reader for + - * / ^ ( ) over a symbol table.
class ExprParser {
 public:
  ExprParser(const std::string& text, TablePtr tab) : s_(text), tab_(std::move(tab)) {}
  PolyRat parse() {
    PolyRat v = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("trailing input in '" + s_ + "'");
    return v;
  }

 private:
  std::string s_;
  TablePtr tab_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  PolyRat expr() {
    PolyRat v = term();
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  PolyRat term() {
    PolyRat v = unary();
    for (;;) {
      if (eat('*')) v = v * unary();
      else if (eat('/')) v = v / unary();
      else return v;
    }
  }
  PolyRat unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    PolyRat b = primary();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      skip();
      std::size_t st = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (st == pos_) throw ParseError("bad exponent in '" + s_ + "'");
      int e = std::stoi(s_.substr(st, pos_ - st));
      return b.pow(neg ? -e : e);
    }
    return b;
  }
  PolyRat primary() {
    skip();
    if (eat('(')) {
      PolyRat v = expr();
      if (!eat(')')) throw ParseError("missing ')' in '" + s_ + "'");
      return v;
    }
    if (pos_ >= s_.size()) throw ParseError("unexpected end of '" + s_ + "'");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t st = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t save = pos_++;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      PolyRat r(Rational::parse(s_.substr(st, pos_ - st)));
      return r;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t st = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name = s_.substr(st, pos_ - st);
      if (!tab_) throw ParseError("symbol '" + name + "' without a symbol table");
      return PolyRat::symbol(tab_, name);
    }
    throw ParseError("unexpected character in '" + s_ + "'");
  }
};

inline PolyRat parse_polyrat(const std::string& text, const TablePtr& tab) {
  return ExprParser(text, tab).parse();
}

inline int SymbolTable::add_constrained(const std::string& name, const std::string& relation) {
  auto snapshot = std::make_shared<const SymbolTable>(*this);
  PolyRat r = parse_polyrat(relation, snapshot);
  if (!r.den().empty()) throw ParseError("relation must be a polynomial");
  return add_constrained(name, r.num());
}

// Convenience constructor: names followed by (name, relation) pairs.
inline TablePtr make_table(const std::vector<std::string>& names,
                           const std::vector<std::pair<std::string, std::string>>& constrained = {}) {
  auto t = std::make_shared<SymbolTable>();
  for (const auto& n : names) t->add(n);
  for (const auto& [n, r] : constrained) t->add_constrained(n, r);
  return t;
}

}  // namespace cliffordlab
