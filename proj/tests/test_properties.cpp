#include <gtest/gtest.h>

#include "cliffordlab/algebra.hpp"
#include "cliffordlab/random.hpp"
#include "cliffordlab/spinor.hpp"
#include "support.hpp"

// Seeded randomized identities over exact rationals. Each case draws from its own stream so
// a failure message's index reproduces it in isolation.

using namespace cliffordlab;

namespace {

using Q = Rational;
using MV = Multivector<Q>;
constexpr int kCases = 120;

struct Case {
  int n;
  BilinearForm<Q> f;
  MV u, v, w, x, y;
};

Case draw(std::uint64_t suite, int k, int max_dim = 4) {
  auto rng = stream_rng(suite, k);
  int n = 1 + k % max_dim;
  auto f = random_form<Q>(n, rng);
  return {n,
          f,
          random_multivector<Q>(n, rng),
          random_multivector<Q>(n, rng),
          random_multivector<Q>(n, rng),
          random_vector<Q>(n, rng),
          random_vector<Q>(n, rng)};
}

}  // namespace

TEST(Property, Associativity) {
  for (int k = 0; k < kCases; ++k) {
    auto c = draw(101, k);
    EXPECT_EQ(cmul(cmul(c.u, c.v, c.f), c.w, c.f), cmul(c.u, cmul(c.v, c.w, c.f), c.f)) << k;
  }
}

TEST(Property, AnticommutatorIsTwiceSymmetricPart) {
  for (int k = 0; k < kCases; ++k) {
    auto c = draw(102, k);
    Q gxy(0);
    for (int i = 0; i < c.n; ++i)
      for (int j = 0; j < c.n; ++j) gxy += c.x.coeff(Blade(1) << i) * c.f.g()[i][j] * c.y.coeff(Blade(1) << j);
    EXPECT_EQ(cmul(c.x, c.y, c.f) + cmul(c.y, c.x, c.f), MV::scalar(c.n, gxy * Q(2))) << k;
  }
}

TEST(Property, ReversionIsAntiAutomorphism) {
  for (int k = 0; k < kCases; ++k) {
    auto c = draw(103, k);
    EXPECT_EQ(reversion(cmul(c.u, c.v, c.f), c.f), cmul(reversion(c.v, c.f), reversion(c.u, c.f), c.f)) << k;
    EXPECT_EQ(reversion(reversion(c.u, c.f), c.f), c.u) << k;
  }
}

TEST(Property, GradeInvolutionIsAutomorphism) {
  for (int k = 0; k < kCases; ++k) {
    auto c = draw(104, k);
    EXPECT_EQ(grade_involution(cmul(c.u, c.v, c.f)), cmul(grade_involution(c.u), grade_involution(c.v), c.f)) << k;
  }
}

TEST(Property, ContractionIdentities) {
  for (int k = 0; k < kCases; ++k) {
    auto c = draw(105, k);
    const auto& B = c.f.B();
    // derivation rules for a vector
    EXPECT_EQ(left_contract(c.x, wedge(c.u, c.v), B),
              wedge(left_contract(c.x, c.u, B), c.v) + wedge(grade_involution(c.u), left_contract(c.x, c.v, B)))
        << k;
    EXPECT_EQ(right_contract(wedge(c.u, c.v), c.x, B),
              wedge(c.u, right_contract(c.v, c.x, B)) + wedge(right_contract(c.u, c.x, B), grade_involution(c.v)))
        << k;
    // composition rules
    EXPECT_EQ(left_contract(wedge(c.u, c.v), c.w, B), left_contract(c.u, left_contract(c.v, c.w, B), B)) << k;
    EXPECT_EQ(right_contract(c.w, wedge(c.u, c.v), B), right_contract(right_contract(c.w, c.u, B), c.v, B)) << k;
    // on vectors both contractions are B
    Q bxy(0);
    for (int i = 0; i < c.n; ++i)
      for (int j = 0; j < c.n; ++j) bxy += c.x.coeff(Blade(1) << i) * B[i][j] * c.y.coeff(Blade(1) << j);
    EXPECT_EQ(left_contract(c.x, c.y, B), MV::scalar(c.n, bxy)) << k;
    EXPECT_EQ(right_contract(c.x, c.y, B), MV::scalar(c.n, bxy)) << k;
  }
}

TEST(Property, RieszFormulas) {
  for (int k = 0; k < kCases; ++k) {
    auto c = draw(106, k);
    const auto& B = c.f.B();
    EXPECT_EQ(cmul(c.x, c.u, c.f), left_contract(c.x, c.u, B) + wedge(c.x, c.u)) << k;
    EXPECT_EQ(cmul(c.u, c.x, c.f), right_contract(c.u, c.x, B) + wedge(c.u, c.x)) << k;
  }
}

TEST(Property, CliexpandRoundTrip) {
  for (int k = 0; k < kCases; ++k) {
    auto c = draw(107, k);
    auto e = cliexpand(c.u, c.f.B());
    EXPECT_EQ(clieval(e, c.n, c.f.B()), c.u) << k;
  }
}

TEST(Property, CmulMatchesCmulgWhenSymmetric) {
  for (int k = 0; k < kCases; ++k) {
    auto rng = stream_rng(108, k);
    int n = 1 + k % 4;
    auto B = random_form<Q>(n, rng).B();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) B[i][j] = B[j][i];
    BilinearForm<Q> f(B);
    auto u = random_multivector<Q>(n, rng), v = random_multivector<Q>(n, rng);
    EXPECT_EQ(cmul(u, v, f), cmulg(u, v, f)) << k;
  }
}

TEST(Property, SpinorRepresentationPair) {
  const std::vector<std::pair<int, int>> sigs{{2, 0}, {1, 1}, {3, 1}, {2, 2}};
  std::vector<SpinorContext<Q>> ctxs;
  for (auto [p, q] : sigs) ctxs.push_back(clidata<Q>(p, q));
  for (int k = 0; k < kCases; ++k) {
    const auto& ctx = ctxs[k % ctxs.size()];
    auto rng = stream_rng(109, k);
    const int n = ctx.n();
    auto u = random_multivector<Q>(n, rng), v = random_multivector<Q>(n, rng);
    EXPECT_EQ(ctx.matKrepr(ctx.mul(u, v)), matmul(ctx.matKrepr(u), ctx.matKrepr(v))) << k;
    EXPECT_EQ(ctx.phi(ctx.matKrepr(u)), u) << k;
    Matrix<Q> m = zero_matrix<Q>(ctx.N(), ctx.N());
    for (auto& r : m)
      for (auto& x : r) x = random_rational(rng);
    EXPECT_EQ(ctx.matKrepr(ctx.phi(m)), m) << k;
  }
}

TEST(Property, DegenerateRadicalIsNilpotent) {
  auto f = BilinearForm<Q>::signature(0, 3, 1);
  auto e4 = MV::blade(4, 8);
  for (int k = 0; k < kCases; ++k) {
    auto rng = stream_rng(110, k);
    auto u = random_multivector<Q>(4, rng);
    auto ue = cmul(u, e4, f);
    EXPECT_TRUE(cmul(ue, ue, f).is_zero()) << k;
    auto z = cmul(e4, u, f);
    EXPECT_TRUE(cmul(z, z, f).is_zero()) << k;
  }
}
