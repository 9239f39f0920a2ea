#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cliffordlab/algebra.hpp"

namespace cliffordlab {

// Independent generator for stream `stream` of a run seeded with `seed`.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Small rational a/b with |a| ≤ range, 1 ≤ b ≤ den.
inline Rational random_rational(std::mt19937_64& rng, int range = 9, int den = 4) {
  std::uniform_int_distribution<int> num(-range, range), d(1, den);
  return Rational(num(rng)) / Rational(d(rng));
}

template <class S>
S random_scalar(std::mt19937_64& rng, int range = 9) {
  if constexpr (std::is_same_v<S, Float>) {
    std::uniform_real_distribution<double> u(-range, range);
    return Float(u(rng));
  } else {
    return S(random_rational(rng, range));
  }
}

// Each blade present with probability `density`.
template <class S>
Multivector<S> random_multivector(int n, std::mt19937_64& rng, double density = 0.6, int range = 9) {
  std::bernoulli_distribution keep(density);
  Multivector<S> u(n);
  for (Blade b : cbasis(n))
    if (keep(rng)) u.add_term(b, random_scalar<S>(rng, range));
  return u;
}

template <class S>
Multivector<S> random_vector(int n, std::mt19937_64& rng, int range = 9) {
  Multivector<S> u(n);
  for (int i = 0; i < n; ++i) u.add_term(Blade(1) << i, random_scalar<S>(rng, range));
  return u;
}

// Random B whose symmetric part is nondegenerate.
template <class S>
BilinearForm<S> random_form(int n, std::mt19937_64& rng, int range = 9) {
  for (;;) {
    Matrix<S> m = zero_matrix<S>(n, n);
    for (auto& row : m)
      for (auto& x : row) x = random_scalar<S>(rng, range);
    BilinearForm<S> f(m);
    if (!is_zero(f.det_g())) return f;
  }
}

}  // namespace cliffordlab
