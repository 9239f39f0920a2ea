#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

#include "cliffordlab/errors.hpp"
#include "cliffordlab/rational.hpp"

namespace cliffordlab {

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-9;
};

// Process-wide float tolerance. CLIFFORDLAB_TOL="abs" or "abs,rel" overrides the defaults.
inline Tolerance& float_tolerance() {
  static Tolerance tol = [] {
    Tolerance t;
    if (const char* env = std::getenv("CLIFFORDLAB_TOL")) {
      std::string s(env);
      auto comma = s.find(',');
      try {
        t.abs = std::stod(s.substr(0, comma));
        if (comma != std::string::npos) t.rel = std::stod(s.substr(comma + 1));
      } catch (const std::exception&) {
        // malformed value: keep defaults
      }
    }
    return t;
  }();
  return tol;
}

// binary64 coefficient; comparisons use the ring tolerance.
class Float {
 public:
  Float() = default;
  Float(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Float(int v) : v_(v) {}     // NOLINT(google-explicit-constructor)
  explicit Float(const Rational& r) : v_(r.to_double()) {}

  double value() const { return v_; }
  bool is_zero() const { return std::fabs(v_) <= float_tolerance().abs; }
  bool is_zero(double scale) const {
    const auto& t = float_tolerance();
    return std::fabs(v_) <= t.abs + t.rel * scale;
  }

  Float operator-() const { return Float(-v_); }
  Float& operator+=(Float o) { v_ += o.v_; return *this; }
  Float& operator-=(Float o) { v_ -= o.v_; return *this; }
  Float& operator*=(Float o) { v_ *= o.v_; return *this; }
  Float& operator/=(Float o) {
    if (o.is_zero()) throw DivisionByZero();
    v_ /= o.v_;
    return *this;
  }
  friend Float operator+(Float a, Float b) { return a += b; }
  friend Float operator-(Float a, Float b) { return a -= b; }
  friend Float operator*(Float a, Float b) { return a *= b; }
  friend Float operator/(Float a, Float b) { return a /= b; }
  friend bool operator==(Float a, Float b) {
    return (a - b).is_zero(std::max(std::fabs(a.v_), std::fabs(b.v_)));
  }

  // Shortest round-trip decimal.
  std::string to_string() const {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v_);
    return std::string(buf, res.ptr);
  }

 private:
  double v_ = 0.0;
};

inline bool is_zero(const Float& f) { return f.is_zero(); }
inline std::string to_string(const Float& f) { return f.to_string(); }
inline double to_double(const Float& f) { return f.value(); }
inline double pivot_cost(const Float& f) { return -std::fabs(f.value()); }
inline double magnitude(const Float& f) { return std::fabs(f.value()); }

}  // namespace cliffordlab
