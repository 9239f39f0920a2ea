#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cliffordlab/algebra.hpp"
#include "cliffordlab/solve.hpp"

namespace cliffordlab {

enum class RingKind { real, complex, quaternion };

inline const char* ring_kind_name(RingKind k) {
  switch (k) {
    case RingKind::real: return "real";
    case RingKind::complex: return "complex";
    default: return "quaternion";
  }
}

inline int mod8(int x) { return ((x % 8) + 8) % 8; }

// Radon–Hurwitz number r_i, with r_{i+8} = r_i + 4 extended to negative i.
inline int radon_hurwitz(int i) {
  static constexpr int base[8] = {0, 1, 2, 2, 3, 3, 3, 3};
  int a = (i >= 0) ? i / 8 : -((-i + 7) / 8);
  return base[i - 8 * a] + 4 * a;
}

// Simple algebras Cl(p,q) with real division ring, p+q in [nmin, nmax].
// Order within one n: odd p first, then p descending.
inline std::vector<std::pair<int, int>> all_sigs(int nmin, int nmax) {
  std::vector<std::pair<int, int>> out;
  for (int n = nmin; n <= nmax; ++n) {
    std::vector<std::pair<int, int>> row;
    for (int p = 0; p <= n; ++p) {
      int d = mod8(p - n + p);
      if (d == 0 || d == 2) row.emplace_back(p, n - p);
    }
    std::sort(row.begin(), row.end(), [](auto a, auto b) {
      bool oa = a.first % 2, ob = b.first % 2;
      if (oa != ob) return oa;
      return a.first > b.first;
    });
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

template <class S>
class SpinorContext {
 public:
  using MV = Multivector<S>;

  SpinorContext(int p, int q) : p_(p), q_(q), form_(BilinearForm<S>::signature(p, q)) {
    const int n = p + q;
    if (n > 6 || mod8(p - q) % 4 == 1) throw UnsupportedSignature();
    k_ = q - radon_hurwitz(q - p);
    build_idempotent();
    build_ring();
    build_spinor_basis();
  }

  int p() const { return p_; }
  int q() const { return q_; }
  int n() const { return p_ + q_; }
  int N() const { return static_cast<int>(spinor_basis_.size()); }
  const BilinearForm<S>& form() const { return form_; }
  const MV& f() const { return f_; }
  const std::vector<Blade>& factors() const { return factors_; }
  const std::vector<MV>& spinor_basis() const { return spinor_basis_; }
  const std::vector<Blade>& generators() const { return generators_; }
  const std::vector<MV>& ring_basis() const { return ring_basis_; }
  RingKind ring_kind() const {
    switch (ring_basis_.size()) {
      case 1: return RingKind::real;
      case 2: return RingKind::complex;
      default: return RingKind::quaternion;
    }
  }
  MV mul(const MV& a, const MV& b) const { return cmul(a, b, form_); }

  // Matrix of left multiplication on S; entries are elements of K.
  Matrix<MV> matKrepr_ring(const MV& u) const {
    const int N = this->N();
    Matrix<MV> m(N, std::vector<MV>(N, MV(n())));
    const auto& cols = k_span_columns();
    for (int j = 0; j < N; ++j) {
      auto c = affine_solve(cols, mul(u, spinor_basis_[j]));
      if (!c.consistent || c.dimension()) throw NotRepresentable();
      const std::size_t R = ring_basis_.size();
      for (int i = 0; i < N; ++i)
        for (std::size_t l = 0; l < R; ++l) m[i][j] += ring_basis_[l] * c.particular[i * R + l];
    }
    return m;
  }

  // Real division ring: entries as scalars.
  Matrix<S> matKrepr(const MV& u) const {
    require_real();
    auto mk = matKrepr_ring(u);
    Matrix<S> m = zero_matrix<S>(N(), N());
    for (int i = 0; i < N(); ++i)
      for (int j = 0; j < N(); ++j) m[i][j] = mk[i][j].scalar_part() / f_lead_;
    return m;
  }

  MV phi(const Matrix<S>& m) const {
    require_real();
    const int N = this->N();
    if (static_cast<int>(m.size()) != N) throw DimMismatch();
    for (const auto& r : m)
      if (static_cast<int>(r.size()) != N) throw DimMismatch();
    const auto& inv = phi_inverse();
    const auto basis = cbasis(n());
    MV u(n());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      S acc(0);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          if (!exactly_zero(m[i][j])) acc = acc + inv[b][i * N + j] * m[i][j];
      u.add_term(basis[b], acc);
    }
    return u;
  }

  MV spinor(const std::vector<S>& v) const {
    if (static_cast<int>(v.size()) != N()) throw DimMismatch();
    MV r(n());
    for (int i = 0; i < N(); ++i) r += spinor_basis_[i] * v[i];
    return r;
  }

 private:
  int p_, q_, k_ = 0;
  BilinearForm<S> form_;
  MV f_;
  std::vector<Blade> factors_;
  std::vector<MV> ring_basis_;
  std::vector<MV> spinor_basis_;
  std::vector<Blade> generators_;
  S f_lead_;
  mutable std::optional<std::vector<MV>> kcols_;
  mutable std::optional<Matrix<S>> phi_inv_;

  void require_real() const {
    if (ring_kind() != RingKind::real) throw UnsupportedSignature("division ring is not real");
  }

  MV mono(Blade b) const { return MV::blade(n(), b); }

  bool squares_to_one(Blade b) const { return mul(mono(b), mono(b)) == MV::scalar(n(), S(1)); }
  bool commutes(Blade a, Blade b) const { return mul(mono(a), mono(b)) == mul(mono(b), mono(a)); }

  // Commuting monomials with square +1: hyperbolic pairs e_{p-i} e_{p+1+i}, then positive
  // vectors, then any remaining monomial in graded order.
  void build_idempotent() {
    const int n = this->n();
    std::vector<Blade> cand;
    for (int i = 0; i < std::min(p_, q_); ++i) cand.push_back((1u << (p_ - 1 - i)) | (1u << (p_ + i)));
    for (int i = 0; i < p_; ++i) cand.push_back(1u << i);
    for (Blade b : cbasis(n))
      if (b) cand.push_back(b);
    f_ = MV::scalar(n, S(1));
    for (Blade b : cand) {
      if (static_cast<int>(factors_.size()) == k_) break;
      if (!squares_to_one(b)) continue;
      bool ok = true;
      for (Blade a : factors_) ok = ok && commutes(a, b);
      if (!ok) continue;
      MV next = mul(f_, (MV::scalar(n, S(1)) + mono(b)) / S(2));
      if (next.is_zero() || next == f_) continue;
      factors_.push_back(b);
      f_ = next;
    }
    if (static_cast<int>(factors_.size()) != k_) throw UnsupportedSignature("no primitive idempotent found");
    if (!(mul(f_, f_) == f_)) throw Error("idempotent check failed");
  }

  void build_ring() {
    std::vector<MV> all;
    for (Blade b : cbasis(n())) all.push_back(mul(mul(f_, mono(b)), f_));
    ring_basis_ = findbasis(all);
    f_lead_ = f_.coeff(0);
  }

  void build_spinor_basis() {
    const int target = (1 << n()) >> k_;  // real dimension of S
    std::vector<MV> span;
    for (Blade b : cbasis(n())) {
      MV s = mul(mono(b), f_);
      std::vector<MV> cand;
      for (const auto& r : ring_basis_) cand.push_back(mul(s, r));
      bool grows = false;
      for (const auto& c : cand)
        if (!affine_solve(span, c).consistent) grows = true;
      if (!grows) continue;
      generators_.push_back(b);
      spinor_basis_.push_back(s);
      for (const auto& c : cand) span.push_back(c);
      if (static_cast<int>(span.size()) == target) break;
    }
    if (static_cast<int>(span.size()) != target) throw Error("spinor basis incomplete");
  }

  // f_i ∘ r_l for all i, l: the real basis of S.
  const std::vector<MV>& k_span_columns() const {
    if (!kcols_) {
      std::vector<MV> cols;
      for (const auto& s : spinor_basis_)
        for (const auto& r : ring_basis_) cols.push_back(mul(s, r));
      kcols_ = std::move(cols);
    }
    return *kcols_;
  }

  // Inverse of the map cbasis coordinates -> flattened matKrepr entries.
  const Matrix<S>& phi_inverse() const {
    if (!phi_inv_) {
      const auto basis = cbasis(n());
      const int N = this->N();
      Matrix<S> a = zero_matrix<S>(N * N, basis.size());
      for (std::size_t b = 0; b < basis.size(); ++b) {
        auto m = matKrepr(mono(basis[b]));
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j) a[i * N + j][b] = m[i][j];
      }
      auto inv = inverse(a);
      if (!inv) throw NotRepresentable("representation is not bijective");
      phi_inv_ = std::move(*inv);
    }
    return *phi_inv_;
  }
};

template <class S>
SpinorContext<S> clidata(int p, int q) {
  return SpinorContext<S>(p, q);
}

// Smallest 2^k square containing C in its top-left block.
template <class S>
Matrix<S> embed(const Matrix<S>& c) {
  std::size_t m = c.size(), n = m ? c[0].size() : 0;
  std::size_t size = 1;
  while (size < std::max(m, n)) size *= 2;
  Matrix<S> a = zero_matrix<S>(size, size);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = c[i][j];
  return a;
}

}  // namespace cliffordlab
