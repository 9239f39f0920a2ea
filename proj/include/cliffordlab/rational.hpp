#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstddef>
#include <string>

#include "cliffordlab/errors.hpp"

namespace cliffordlab {

// Exact rational number; always stored in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) : q_(mpz_class(std::to_string(v))) {}  // NOLINT
  Rational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw DivisionByZero();
    q_ = mpq_class(n, d);
    q_.canonicalize();
  }
  Rational(long n, long d) : Rational(mpz_class(n), mpz_class(d)) {}
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
  // Exact binary value of the double.
  static Rational from_double(double d) {
    if (!std::isfinite(d)) throw ParseError("non-finite double");
    return Rational(mpq_class(d));
  }
  static Rational parse(const std::string& s);

  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }
  std::string to_string() const { return q_.get_str(); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero();
    q_ /= o.q_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_{0};
};

inline Rational Rational::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw ParseError("empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational n = parse(s.substr(0, slash));
    Rational d = parse(s.substr(slash + 1));
    return n / d;
  }
  auto dot = s.find_first_of(".eE");
  if (dot != std::string::npos) {
    // decimal literal: read exactly as a base-10 fraction
    std::size_t epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) exp10 = std::stol(s.substr(epos + 1));
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant = mant.substr(1);
    }
    auto p = mant.find('.');
    std::string digits = mant;
    if (p != std::string::npos) {
      digits = mant.substr(0, p) + mant.substr(p + 1);
      exp10 -= static_cast<long>(mant.size() - p - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad number: " + text);
    mpz_class n(digits), scale = 1;
    for (long i = 0; i < std::labs(exp10); ++i) scale *= 10;
    Rational r = exp10 >= 0 ? Rational(mpq_class(n * scale)) : Rational(n, scale);
    return neg ? -r : r;
  }
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size() || s.find_first_not_of("0123456789", start) != std::string::npos)
    throw ParseError("bad number: " + text);
  return Rational(mpq_class(mpz_class(s[0] == '+' ? s.substr(1) : s)));
}

inline bool is_zero(const Rational& r) { return r.is_zero(); }
inline std::string to_string(const Rational& r) { return r.to_string(); }
inline double to_double(const Rational& r) { return r.to_double(); }
// Cost used to pick Gaussian-elimination pivots: smaller is preferred.
inline double pivot_cost(const Rational& r) {
  return static_cast<double>(mpz_sizeinbase(r.raw().get_num_mpz_t(), 2) +
                             mpz_sizeinbase(r.raw().get_den_mpz_t(), 2));
}

}  // namespace cliffordlab
