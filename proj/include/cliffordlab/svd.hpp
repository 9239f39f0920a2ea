#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "cliffordlab/solve.hpp"
#include "cliffordlab/spinor.hpp"

namespace cliffordlab {

using FMatrix = Matrix<Float>;
using FMV = Multivector<Float>;

struct EigenResult {
  std::vector<double> values;  // descending
  FMatrix vectors;             // eigenvectors as columns
};

namespace detail {

inline std::vector<std::vector<double>> to_doubles(const FMatrix& m) {
  std::vector<std::vector<double>> d(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& x : m[i]) d[i].push_back(x.value());
  return d;
}

inline double max_abs(const FMatrix& m) {
  double s = 0;
  for (const auto& r : m)
    for (const auto& x : r) s = std::max(s, std::fabs(x.value()));
  return s;
}

inline double max_abs(const FMV& u) {
  double s = 0;
  for (const auto& [b, c] : u.terms()) s = std::max(s, std::fabs(c.value()));
  return s;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Orthonormalize v against `basis`; returns false if v is (numerically) in their span.
inline bool gram_schmidt_push(std::vector<std::vector<double>>& basis, std::vector<double> v) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) {
      double d = dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * b[i];
    }
  double nrm = std::sqrt(dot(v, v));
  if (nrm < 1e-8) return false;
  for (auto& x : v) x /= nrm;
  basis.push_back(std::move(v));
  return true;
}

inline FMatrix from_columns(const std::vector<std::vector<double>>& cols, std::size_t n) {
  FMatrix m = zero_matrix<Float>(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) m[i][j] = cols[j][i];
  return m;
}

inline std::vector<double> column(const FMatrix& m, std::size_t j) {
  std::vector<double> c;
  for (const auto& r : m) c.push_back(r[j].value());
  return c;
}

}  // namespace detail

// Cyclic Jacobi eigen-decomposition; eigenpairs sorted by descending eigenvalue, each
// degenerate cluster re-orthonormalized, signs fixed so the first nonzero entry is positive.
inline EigenResult eigen_symmetric(const FMatrix& s) {
  const std::size_t n = s.size();
  for (const auto& r : s)
    if (r.size() != n) throw NonSquare();
  auto a = detail::to_doubles(s);
  const double scale = std::max(1.0, detail::max_abs(s));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(a[i][j] - a[j][i]) > float_tolerance().rel * scale) throw NotSymmetric();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - sn * akq;
          a[k][q] = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - sn * aqk;
          a[q][k] = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - sn * vkq;
          v[k][q] = sn * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a[x][x] > a[y][y]; });
  EigenResult r;
  std::vector<std::vector<double>> cols;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t idx = order[k];
    r.values.push_back(a[idx][idx]);
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = v[i][idx];
    cols.push_back(c);
  }
  std::vector<std::vector<double>> ortho;
  for (std::size_t k = 0; k < n; ++k) {
    if (!detail::gram_schmidt_push(ortho, cols[k])) throw Error("eigenvectors lost orthogonality");
    auto& c = ortho.back();
    for (double x : c)
      if (std::fabs(x) > 1e-12) {
        if (x < 0)
          for (auto& y : c) y = -y;
        break;
      }
  }
  r.vectors = detail::from_columns(ortho, n);
  return r;
}

// All complex roots of a polynomial (coefficients low to high) by Aberth–Ehrlich iteration;
// nearly real roots are snapped to the real axis and polished by Newton steps.
inline std::vector<std::complex<double>> poly_roots(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() <= 1) return {};
  const int d = static_cast<int>(c.size()) - 1;
  for (auto& x : c) x /= c.back();
  using cd = std::complex<double>;
  auto eval = [&](cd z, cd& deriv) {
    cd p = 0;
    deriv = 0;
    for (int i = d; i >= 0; --i) {
      deriv = deriv * z + p;
      p = p * z + c[i];
    }
    return p;
  };
  double radius = 0;
  for (int i = 0; i < d; ++i) radius = std::max(radius, std::fabs(c[i]));
  radius += 1;
  std::vector<cd> z(d);
  for (int i = 0; i < d; ++i) z[i] = std::polar(radius, 2 * M_PI * (i + 0.25) / d + 0.4);
  for (int it = 0; it < 1000; ++it) {
    double step = 0;
    for (int i = 0; i < d; ++i) {
      cd dp;
      cd p = eval(z[i], dp);
      if (p == cd(0)) continue;
      cd ratio = p / dp;
      cd sum = 0;
      for (int j = 0; j < d; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      cd w = ratio / (1.0 - ratio * sum);
      z[i] -= w;
      step = std::max(step, std::abs(w) / (1 + std::abs(z[i])));
    }
    if (step < 1e-16) break;
  }
  for (auto& r : z) {
    if (std::fabs(r.imag()) > 1e-7 * (1 + std::abs(r))) continue;
    double x = r.real();
    for (int k = 0; k < 5; ++k) {
      cd dp;
      cd p = eval(cd(x, 0), dp);
      if (dp.real() == 0) break;
      x -= p.real() / dp.real();
    }
    r = cd(x, 0);
  }
  std::sort(z.begin(), z.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag(); });
  return z;
}

template <class S>
Matrix<S> makediag(std::size_t m, std::size_t n, const std::vector<S>& sigmas) {
  if (sigmas.size() > std::min(m, n)) throw DimMismatch("too many diagonal entries");
  Matrix<S> d = zero_matrix<S>(m, n);
  for (std::size_t i = 0; i < sigmas.size(); ++i) d[i][i] = sigmas[i];
  return d;
}

template <class S>
Multivector<S> convert_vector_to_spinor(const std::vector<S>& v, const SpinorContext<S>& ctx) {
  return ctx.spinor(v);
}

// Basis of {ψ ∈ S : P∘ψ = λψ}, one element per free coordinate.
template <class S>
std::vector<Multivector<S>> eigenspinors(const Multivector<S>& P, const S& lam, const SpinorContext<S>& ctx) {
  std::vector<Multivector<S>> cols;
  const Multivector<S> shifted = P - Multivector<S>::scalar(P.dim(), lam);
  for (const auto& f : ctx.spinor_basis()) cols.push_back(ctx.mul(shifted, f));
  auto sol = affine_solve(cols, Multivector<S>(P.dim()));
  if (sol.directions.empty()) throw NotAnEigenvalue();
  std::vector<Multivector<S>> out;
  for (const auto& d : sol.directions) out.push_back(combine(d, ctx.spinor_basis()));
  return out;
}

struct SvdResult {
  int p = 0, q = 0;
  FMatrix C, A, U, Sigma, Vt;
  std::vector<double> eigenvalues;         // of AᵀA, descending
  std::vector<double> singular_values;     // padded to the embedded size
  std::vector<double> positive_singular_values;
  std::vector<Rational> minpoly;           // exact, of φ(AᵀA), low to high
  std::vector<std::complex<double>> minpoly_roots;
  FMV p_, pU, pSigma, pVt;
  double residual_matrix = 0, residual_clifford = 0, residual_trimmed = 0;
  double orthogonality_U = 0, orthogonality_V = 0;
  double residual_ata = 0, residual_aat = 0, sign_consistency = 0, eigen_root_mismatch = 0;
  std::vector<std::pair<double, int>> multiplicities_pTp, multiplicities_ppT;
  std::vector<FMV> sv, su;
};

inline std::pair<int, int> default_signature(int k) {
  if (k == 0) return {0, 0};
  if (k == 1) return {2, 0};
  if (k == 2) return {3, 1};
  auto sigs = all_sigs(2 * k, 2 * k);
  if (sigs.empty()) throw SignatureUnavailable();
  return sigs.front();
}

namespace detail {

// Distinct eigenvalues (clustered) with eigenspinor dimensions.
inline std::vector<std::pair<double, int>> multiplicities(const FMV& P, const std::vector<double>& values,
                                                          const SpinorContext<Float>& ctx) {
  std::vector<std::pair<double, int>> out;
  const double scale = values.empty() ? 1.0 : std::max(1.0, std::fabs(values.front()));
  for (double v : values) {
    if (!out.empty() && std::fabs(out.back().first - v) <= 1e-9 * scale) continue;
    double lam = std::fabs(v) <= 1e-9 * scale ? 0.0 : v;
    out.emplace_back(lam, static_cast<int>(eigenspinors(P, Float(lam), ctx).size()));
  }
  return out;
}

}  // namespace detail

inline SvdResult svd_via_clifford(const FMatrix& C, std::optional<std::pair<int, int>> signature = std::nullopt) {
  SvdResult r;
  r.C = C;
  r.A = embed(C);
  const std::size_t N = r.A.size();
  int k = 0;
  while ((std::size_t{1} << k) < N) ++k;
  auto sig = signature ? *signature : default_signature(k);
  auto sigs = all_sigs(2 * k, 2 * k);
  if (std::find(sigs.begin(), sigs.end(), sig) == sigs.end()) throw SignatureUnavailable();
  r.p = sig.first;
  r.q = sig.second;
  SpinorContext<Float> ctx(sig.first, sig.second);
  SpinorContext<Rational> exact(sig.first, sig.second);
  const auto& A = r.A;
  FMatrix At = transpose(A), AtA = matmul(At, A), AAt = matmul(A, At);

  // exact minimal polynomial of φ(AᵀA)
  Matrix<Rational> Ar = zero_matrix<Rational>(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) Ar[i][j] = Rational::from_double(A[i][j].value());
  r.minpoly = climinpoly(exact.phi(matmul(transpose(Ar), Ar)), exact.form());
  std::vector<double> mp;
  for (const auto& c : r.minpoly) mp.push_back(c.to_double());
  r.minpoly_roots = poly_roots(mp);

  auto eig = eigen_symmetric(AtA);
  r.eigenvalues = eig.values;
  const double lscale = std::max(1.0, std::fabs(eig.values.front()));
  for (double lam : eig.values) {
    double best = INFINITY;
    for (const auto& z : r.minpoly_roots) best = std::min(best, std::abs(z - std::complex<double>(lam, 0)));
    r.eigen_root_mismatch = std::max(r.eigen_root_mismatch, best / lscale);
  }

  double smax = std::sqrt(std::max(eig.values.front(), 0.0));
  const double thr = 1e-9 * std::max(smax, 1e-300);
  // Round-off in λ of order ε·λmax becomes √ε·σmax after the square root.
  const double lam_floor = 64.0 * static_cast<double>(N) * std::numeric_limits<double>::epsilon() *
                           std::max(eig.values.front(), 0.0);
  std::vector<std::vector<double>> ucols;
  std::vector<std::vector<double>> vcols;
  for (std::size_t i = 0; i < N; ++i) {
    double s = std::sqrt(std::max(eig.values[i], 0.0));
    if (s <= thr || eig.values[i] <= lam_floor) s = 0.0;
    r.singular_values.push_back(s);
    if (s > 0) r.positive_singular_values.push_back(s);
    vcols.push_back(detail::column(eig.vectors, i));
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (r.singular_values[i] == 0.0) continue;
    std::vector<double> u(N, 0.0);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) u[a] += A[a][b].value() * vcols[i][b];
    for (auto& x : u) x /= r.singular_values[i];
    if (!detail::gram_schmidt_push(ucols, u)) throw Error("left singular vectors are dependent");
  }
  auto eigU = eigen_symmetric(AAt);
  for (std::size_t i = 0; i < N && ucols.size() < N; ++i) detail::gram_schmidt_push(ucols, detail::column(eigU.vectors, i));
  for (std::size_t i = 0; i < N && ucols.size() < N; ++i) {
    std::vector<double> e(N, 0.0);
    e[i] = 1.0;
    detail::gram_schmidt_push(ucols, e);
  }
  r.U = detail::from_columns(ucols, N);
  FMatrix V = detail::from_columns(vcols, N);
  r.Vt = transpose(V);
  std::vector<Float> sig_f(r.singular_values.begin(), r.singular_values.end());
  r.Sigma = makediag<Float>(N, N, sig_f);

  // matrix side
  FMatrix rec = matmul(matmul(r.U, r.Sigma), r.Vt);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      r.residual_matrix = std::max(r.residual_matrix, std::fabs(rec[i][j].value() - A[i][j].value()));
  const std::size_t m = C.size(), n = m ? C[0].size() : 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0;
      for (std::size_t t = 0; t < std::min(m, n); ++t)
        acc += r.U[i][t].value() * r.singular_values[t] * V[j][t].value();
      r.residual_trimmed = std::max(r.residual_trimmed, std::fabs(acc - C[i][j].value()));
    }

  // Clifford side
  auto mul = [&](const FMV& a, const FMV& b) { return ctx.mul(a, b); };
  const FMV id = FMV::scalar(ctx.n(), Float(1));
  r.p_ = ctx.phi(A);
  r.pU = ctx.phi(r.U);
  r.pSigma = ctx.phi(r.Sigma);
  r.pVt = ctx.phi(r.Vt);
  FMV pUt = ctx.phi(transpose(r.U)), pV = ctx.phi(V);
  FMV pS2 = ctx.phi(matmul(transpose(r.Sigma), r.Sigma));
  FMV pTp = ctx.phi(AtA), ppT = ctx.phi(AAt);
  r.residual_clifford = detail::max_abs(r.p_ - mul(mul(r.pU, r.pSigma), r.pVt));
  r.orthogonality_U = detail::max_abs(mul(pUt, r.pU) - id);
  r.orthogonality_V = detail::max_abs(mul(r.pVt, pV) - id);
  r.residual_ata = detail::max_abs(pTp - mul(mul(pV, pS2), r.pVt));
  r.residual_aat = detail::max_abs(ppT - mul(mul(r.pU, pS2), pUt));
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<Float> vf, uf;
    for (std::size_t a = 0; a < N; ++a) {
      vf.push_back(V[a][i]);
      uf.push_back(r.U[a][i]);
    }
    r.sv.push_back(convert_vector_to_spinor(vf, ctx));
    r.su.push_back(convert_vector_to_spinor(uf, ctx));
    if (r.singular_values[i] > 0)
      r.sign_consistency =
          std::max(r.sign_consistency, detail::max_abs(mul(r.p_, r.sv[i]) - r.su[i] * Float(r.singular_values[i])));
  }
  r.multiplicities_pTp = detail::multiplicities(pTp, eig.values, ctx);
  r.multiplicities_ppT = detail::multiplicities(ppT, eigU.values, ctx);
  return r;
}

}  // namespace cliffordlab
