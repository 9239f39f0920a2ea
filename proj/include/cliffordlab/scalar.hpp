#pragma once

#include "cliffordlab/float.hpp"
#include "cliffordlab/polyrat.hpp"
#include "cliffordlab/rational.hpp"

namespace cliffordlab {

template <class S>
S from_rational(const Rational& r) {
  if constexpr (std::is_same_v<S, Float>) return Float(r.to_double());
  else return S(r);
}

// Structural zero (exact zero even for floats); used for sparse storage.
template <class S>
bool exactly_zero(const S& x) {
  if constexpr (std::is_same_v<S, Float>) return x.value() == 0.0;
  else return is_zero(x);
}

// Magnitude used to scale float zero tests; exact rings ignore it.
template <class S>
double scale_of(const S& x) {
  if constexpr (std::is_same_v<S, Float>) return std::fabs(x.value());
  else return 0.0;
}

}  // namespace cliffordlab
