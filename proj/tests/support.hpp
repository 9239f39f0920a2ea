#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cliffordlab/algebra.hpp"
#include "cliffordlab/scalar.hpp"

namespace cliffordlab {

// Readable gtest failure messages.
template <class S>
void PrintTo(const Multivector<S>& u, std::ostream* os) {
  *os << u.to_string();
}
inline void PrintTo(const Rational& x, std::ostream* os) { *os << x.to_string(); }
inline void PrintTo(const PolyRat& x, std::ostream* os) { *os << x.to_string(); }

}  // namespace cliffordlab

namespace testing_support {

using namespace cliffordlab;

// "Id", "e1", "e23", ... (single-digit indices only).
inline Blade blade_named(const std::string& name) {
  if (name == "Id") return 0;
  Blade b = 0;
  for (std::size_t k = 1; k < name.size(); ++k) b |= Blade(1) << (name[k] - '1');
  return b;
}

template <class S>
Multivector<S> mv(int n, const std::vector<std::pair<std::string, S>>& terms) {
  Multivector<S> u(n);
  for (const auto& [name, c] : terms) u.add_term(blade_named(name), c);
  return u;
}

inline Multivector<Rational> mvq(int n, const std::vector<std::pair<std::string, long>>& terms) {
  Multivector<Rational> u(n);
  for (const auto& [name, c] : terms) u.add_term(blade_named(name), Rational(c));
  return u;
}

inline Matrix<Rational> qmatrix(const std::vector<std::vector<long>>& rows) {
  Matrix<Rational> m;
  for (const auto& r : rows) {
    std::vector<Rational> row;
    for (long x : r) row.emplace_back(x);
    m.push_back(row);
  }
  return m;
}

// The form used in the worked Helmstetter example.
inline BilinearForm<Rational> example_form() { return BilinearForm<Rational>(qmatrix({{4, 8, 3}, {0, 9, 5}, {-2, 1, 7}})); }

}  // namespace testing_support
