#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cliffordlab/algebra.hpp"

namespace cliffordlab {

namespace detail {

inline int inversion_parity(const std::vector<int>& seq) {
  int inv = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inv;
  return inv % 2;
}

}  // namespace detail

// Bivector F with Cl(B) products expressible through Cl(g):
// F = −Σ_{k1<k2} (−1)^{inv(k1,k2,L)} A_{k1k2} (e_L ∘_g j⁻¹), L the ascending complement.
template <class S>
Multivector<S> make_F(const BilinearForm<S>& f) {
  const int n = f.dim();
  Multivector<S> jinv = pseudoscalar_inverse(f);
  Multivector<S> F(n);
  const Blade full = (1u << n) - 1;
  for (int k1 = 0; k1 < n; ++k1)
    for (int k2 = k1 + 1; k2 < n; ++k2) {
      const S& a = f.A()[k1][k2];
      if (exactly_zero(a)) continue;
      Blade l = full & ~(1u << k1) & ~(1u << k2);
      std::vector<int> seq{k1, k2};
      for (int i = 0; i < n; ++i)
        if (l & (1u << i)) seq.push_back(i);
      Multivector<S> term = cmulg(Multivector<S>::blade(n, l), jinv, f) * a;
      if (detail::inversion_parity(seq)) F += term;
      else F -= term;
    }
  return F;
}

template <class S>
struct HelmstetterCheck {
  int dim = 0;
  Multivector<S> F, F1, F2;
  Multivector<S> lhs, rhs, residual;
  bool ok() const { return residual.is_zero(); }
};

// Compares cmul(u,v) in Cl(B) with ((u ⌞_g F1) ∘_g (v ⌞_g F1)) ⌞_g F2.
template <class S>
HelmstetterCheck<S> check_identity(const Multivector<S>& u, const Multivector<S>& v, const BilinearForm<S>& f) {
  HelmstetterCheck<S> h;
  h.dim = f.dim();
  h.F = make_F(f);
  const int N = f.dim() / 2;
  h.F1 = wexp(h.F, N);
  h.F2 = wexp(-h.F, N);
  const auto& g = f.g();
  h.lhs = cmul(u, v, f);
  h.rhs = right_contract(cmul_matrix(right_contract(u, h.F1, g), right_contract(v, h.F1, g), g), h.F2, g);
  h.residual = h.lhs - h.rhs;
  return h;
}

struct SymbolicSetup {
  TablePtr table;
  BilinearForm<PolyRat> form;
  Multivector<PolyRat> u, v;
};

// B = g + A with symbols g_ij (i ≤ j), A_ij (i < j), and generic u, v with coefficients
// uu_k, vv_k over the Grassmann basis.
inline SymbolicSetup symbolic_setup(int n) {
  std::vector<std::string> names;
  auto idx = [](int i, int j) { return std::to_string(i + 1) + std::to_string(j + 1); };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) names.push_back("g" + idx(i, j));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) names.push_back("A" + idx(i, j));
  const auto basis = cbasis(n);
  for (std::size_t k = 0; k < basis.size(); ++k) names.push_back("uu" + std::to_string(k + 1));
  for (std::size_t k = 0; k < basis.size(); ++k) names.push_back("vv" + std::to_string(k + 1));
  SymbolicSetup s{make_table(names), BilinearForm<PolyRat>(Matrix<PolyRat>{}), Multivector<PolyRat>(n),
                  Multivector<PolyRat>(n)};
  auto sym = [&](const std::string& name) { return PolyRat::symbol(s.table, name); };
  Matrix<PolyRat> B = zero_matrix<PolyRat>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PolyRat g = sym("g" + idx(std::min(i, j), std::max(i, j)));
      if (i < j) B[i][j] = g + sym("A" + idx(i, j));
      else if (i > j) B[i][j] = g - sym("A" + idx(j, i));
      else B[i][j] = g;
    }
  s.form = BilinearForm<PolyRat>(B);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    s.u.add_term(basis[k], sym("uu" + std::to_string(k + 1)));
    s.v.add_term(basis[k], sym("vv" + std::to_string(k + 1)));
  }
  return s;
}

}  // namespace cliffordlab
