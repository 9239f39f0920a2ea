#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cliffordlab/groups.hpp"
#include "cliffordlab/linalg.hpp"
#include "cliffordlab/random.hpp"
#include "support.hpp"

using namespace cliffordlab;

namespace {

using FMV = Multivector<Float>;
using PMV = Multivector<PolyRat>;
using QMV = Multivector<Rational>;
constexpr double kTol = 1e-9;

double max_abs(const FMV& u) {
  double s = 0;
  const auto& terms = u.terms();
  for (const auto& [b, c] : terms) s = std::max(s, std::fabs(c.value()));
  return s;
}

FMV fvec(double a, double b, double c) { return FMV::vector(3, {Float(a), Float(b), Float(c)}); }

// Rodrigues' rotation of v about the unit axis k, counter-clockwise looking down k.
std::array<double, 3> rodrigues(std::array<double, 3> k, std::array<double, 3> v, double theta) {
  double n = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
  for (auto& x : k) x /= n;
  double kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
  std::array<double, 3> cr{k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]};
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = v[i] * std::cos(theta) + cr[i] * std::sin(theta) + k[i] * kv * (1 - std::cos(theta));
  return out;
}

// Matrix of x ↦ g x g* in the basis e1, e2, e3.
Matrix<Float> action_matrix(const FMV& g) {
  auto f = cl03<Float>();
  Matrix<Float> m = zero_matrix<Float>(3, 3);
  for (int j = 0; j < 3; ++j) {
    FMV img = spin_action(FMV::basis_vector(3, j + 1), g, f);
    for (int i = 0; i < 3; ++i) m[i][j] = img.coeff(Blade(1u << i));
  }
  return m;
}

class Groups : public ::testing::Test {
 protected:
  TablePtr tab = groups_table();
  PolyRat s(const char* e) const { return parse_polyrat(e, tab); }
  PMV vec(const char* a, const char* b, const char* c) const { return PMV::vector(3, {s(a), s(b), s(c)}); }
  PMV vec4(const char* a, const char* b, const char* c) const {
    return PMV::vector(4, {s(a), s(b), s(c), PolyRat(0)});
  }
};

}  // namespace

TEST(Conjugation, StarInCl03) {
  auto f = cl03<Rational>();
  EXPECT_EQ(star(QMV::blade(3, 3), f), -QMV::blade(3, 3));
  EXPECT_EQ(star(QMV::blade(3, 1), f), -QMV::blade(3, 1));
  EXPECT_EQ(star(QMV::blade(3, 7), f), QMV::blade(3, 7));
  EXPECT_EQ(star(QMV::scalar(3, Rational(5)), f), QMV::scalar(3, Rational(5)));
}

TEST_F(Groups, EnormAndScalarprod) {
  auto f = cl03<PolyRat>();
  EXPECT_EQ(enorm(vec("c1", "c2", "c3"), f), s("c1^2+c2^2+c3^2"));
  auto fq = cl03<Rational>();
  EXPECT_EQ(scalarprod(QMV::basis_vector(3, 1), QMV::basis_vector(3, 2), fq), Rational(0));
  auto x = vec("x1", "x2", "x3"), y = vec("y1", "y2", "y3");
  EXPECT_EQ(scalarprod(x, y, f), s("x1*y1+x2*y2+x3*y3"));
  EXPECT_EQ(scalarprod(x, y, f), scalarprod(y, x, f));
  EXPECT_EQ(scalarprod(x, x, f), enorm(x, f));
  EXPECT_THROW(enorm(QMV::blade(3, 3), fq), NotAVector);
  EXPECT_THROW(scalarprod(QMV::basis_vector(3, 1), QMV::scalar(3, Rational(1)), fq), NotAVector);
}

TEST_F(Groups, PinActionOfSymbolicVectors) {
  auto f = cl03<PolyRat>();
  auto x = vec("x1", "x2", "x3"), v = vec("v1", "v2", "v3");
  auto out = pin_action(x, v, f);
  EXPECT_TRUE(out.is_grade(1));
  // reflection scaled by |v|²: −v x v̄ = |v|² x − 2(x·v) v
  EXPECT_EQ(out, x * enorm(v, f) - v * (PolyRat(2) * scalarprod(x, v, f)));
  EXPECT_EQ(spin_action(x, PMV::scalar(3, PolyRat(1)), f), x);
}

TEST_F(Groups, SevenPinFamilies) {
  auto fams = pin3_families(tab);
  ASSERT_EQ(fams.size(), 7u);
  auto fs = cl03<PolyRat>();
  auto ff = cl03<Float>();
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const auto& fam = fams[i];
    EXPECT_EQ(cmul(fam.element, star(fam.element, fs), fs), PMV::scalar(3, PolyRat(1))) << fam.name;
    auto rng = stream_rng(9, i);
    for (int k = 0; k < 100; ++k) {
      auto smp = sample_family(fam, tab, rng);
      EXPECT_LT(max_abs(cmul(smp.g, star(smp.g, ff), ff) - FMV::scalar(3, Float(1))), kTol) << fam.name;
      auto x = random_vector<Float>(3, rng, 3), y = random_vector<Float>(3, rng, 3);
      auto px = pin_action(x, smp.g, ff), py = pin_action(y, smp.g, ff);
      EXPECT_LT(max_abs(px - px.grade_part(1)), kTol) << fam.name;
      double d = (scalarprod(FMV(px.grade_part(1)), FMV(py.grade_part(1)), ff) - scalarprod(x, y, ff)).value();
      EXPECT_LT(std::fabs(d), kTol) << fam.name;
    }
  }
}

TEST(PinFamilies, EpsilonIdentityExact) {
  auto f = cl03<Rational>();
  for (int e : {1, -1}) {
    QMV g = QMV::scalar(3, Rational(e));
    EXPECT_EQ(cmul(g, star(g, f), f), QMV::scalar(3, Rational(1)));
    auto x = QMV::vector(3, {Rational(2), Rational(-3), Rational(1, 2)});
    EXPECT_EQ(pin_action(x, g, f), x);
  }
}

TEST_F(Groups, Spin3SymbolicSuite) {
  auto f = cl03<PolyRat>();
  PMV g = spin3_symbolic(tab);
  EXPECT_EQ(cmul(g, star(g, f), f), PMV::scalar(3, PolyRat(1)));
  auto v = vec("v1", "v2", "v3");
  auto gv = spin_action(v, g, f);
  EXPECT_TRUE(gv.is_grade(1));
  EXPECT_EQ(enorm(gv, f), enorm(v, f));
  PMV e11 = rot(PMV::basis_vector(3, 1), g), e22 = rot(PMV::basis_vector(3, 2), g),
      e33 = rot(PMV::basis_vector(3, 3), g);
  EXPECT_TRUE((cmul(e11, e22, f) + cmul(e22, e11, f)).is_zero());
  EXPECT_TRUE((cmul(e11, e33, f) + cmul(e33, e11, f)).is_zero());
  EXPECT_TRUE((cmul(e22, e33, f) + cmul(e33, e22, f)).is_zero());
  EXPECT_EQ(cmul(e11, e11, f), PMV::scalar(3, PolyRat(-1)));
  EXPECT_EQ(wedge(wedge(e11, e22), e33), PMV::blade(3, 7));
}

TEST(Spin3, FloatSamplesAreProperRotations) {
  auto rng = stream_rng(10, 0);
  std::uniform_real_distribution<double> u(-0.55, 0.55);
  for (int k = 0; k < 50; ++k) {
    auto g = spin3_general(u(rng), u(rng), u(rng), (k % 2) ? 1 : -1);
    auto m = action_matrix(g);
    auto mtm = matmul(transpose(m), m);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(mtm[i][j].value(), i == j ? 1.0 : 0.0, kTol);
    EXPECT_NEAR(determinant(m).value(), 1.0, kTol);
  }
  EXPECT_THROW(spin3_general(0.8, 0.8, 0.0, 1), OutOfBall);
}

TEST(Quaternions, PrintedTable) {
  using M = QMV;
  auto t = quaternion_table<Rational>();
  M id = M::scalar(3, Rational(1)), e12 = M::blade(3, 3), e13 = M::blade(3, 5), e23 = M::blade(3, 6);
  M expected[3][3] = {{-id, e23, -e13}, {-e23, -id, e12}, {e13, -e12, -id}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(t[i][j], expected[i][j]) << i << "," << j;
      if (i != j) {
        EXPECT_EQ(t[i][j], -t[j][i]);
      }
    }
}

TEST(Quaternions, CoordinatePlaneRotationsNumeric) {
  auto f = cl03<Float>();
  for (double th : {0.3, 1.1, 2.9}) {
    FMV q12 = FMV::scalar(3, Float(std::cos(th / 2))) + FMV::blade(3, 3) * Float(std::sin(th / 2));
    EXPECT_LT(max_abs(spin_action(FMV::basis_vector(3, 1), q12, f) - fvec(std::cos(th), std::sin(th), 0)), kTol);
    EXPECT_LT(max_abs(rot(FMV::basis_vector(3, 2), q12) - fvec(-std::sin(th), std::cos(th), 0)), kTol);
    EXPECT_LT(max_abs(rot(FMV::basis_vector(3, 3), q12) - fvec(0, 0, 1)), kTol);
  }
}

TEST(Quaternions, QrotPrintedForms) {
  const double th = 0.7, c = std::cos(th / 2), sn = std::sin(th / 2), r3 = std::sqrt(3.0);
  auto expect_q = [&](FMV got, double w, double a23, double a13, double a12) {
    FMV e = FMV::scalar(3, Float(w)) + FMV::blade(3, 6) * Float(a23) + FMV::blade(3, 5) * Float(a13) +
            FMV::blade(3, 3) * Float(a12);
    EXPECT_LT(max_abs(got - e), kTol) << got.to_string();
  };
  expect_q(qrot(1, 0, 0, th), c, sn, 0, 0);
  expect_q(qrot(0, 1, 0, th), c, 0, -sn, 0);
  expect_q(qrot(1, 1, 1, th), c, sn * r3 / 3, -sn * r3 / 3, sn * r3 / 3);
  EXPECT_THROW(qrot(0, 0, 0, th), ZeroAxis);
}

TEST(Quaternions, QrotAgreesWithRodrigues) {
  auto rng = stream_rng(11, 0);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 100; ++k) {
    std::array<double, 3> a{u(rng), u(rng), u(rng)}, v{u(rng), u(rng), u(rng)};
    double th = u(rng);
    auto ref = rodrigues(a, v, th);
    auto q = qrot(a[0], a[1], a[2], th);
    EXPECT_LT(max_abs(rot(fvec(v[0], v[1], v[2]), q) - fvec(ref[0], ref[1], ref[2])), kTol);
    EXPECT_LT(max_abs(rot(fvec(a[0], a[1], a[2]), q) - fvec(a[0], a[1], a[2])), kTol);
  }
}

TEST(Quaternions, ExampleTwoDisplays) {
  const double r3 = std::sqrt(3.0);
  auto e1 = FMV::basis_vector(3, 1);
  EXPECT_LT(max_abs(rot(e1, qrot(1, 1, 1, std::numbers::pi / 2)) - fvec(1.0 / 3, (r3 + 1) / 3, -(r3 - 1) / 3)), 1e-12);
  EXPECT_LT(max_abs(rot(e1, qrot(1, 1, 1, std::numbers::pi)) - fvec(-1.0 / 3, 2.0 / 3, 2.0 / 3)), 1e-12);
  const double s2 = std::sqrt(2.0), s29 = std::sqrt(29.0);
  auto got = rot(fvec(1, -2, 4), qrot(2, -3, 4, std::numbers::pi / 4));
  auto printed = fvec(-2.0 / 29 * s29 * s2 + 48.0 / 29 - 19.0 / 58 * s2, 7.0 / 29 * s2 - 2.0 / 29 * s29 * s2 - 72.0 / 29,
                      -s29 * s2 / 58 + 10.0 / 29 * s2 + 96.0 / 29);
  EXPECT_LT(max_abs(got - printed), 1e-12);
}

TEST_F(Groups, SymbolicAxisFixedAndHalfAngleQrot) {
  auto ch = s("ch"), sh = s("sh");
  PMV q = qrot<PolyRat>(PolyRat(1), PolyRat(2), PolyRat(3), ch, sh, s("r14"));
  PMV ax = PMV::vector(3, {PolyRat(1), PolyRat(2), PolyRat(3)});
  EXPECT_EQ(rot(ax, q), ax);
  PMV q111 = qrot<PolyRat>(PolyRat(1), PolyRat(1), PolyRat(1), ch, sh, s("r3"));
  EXPECT_EQ(q111, PMV::scalar(3, ch) + (PMV::blade(3, 3) - PMV::blade(3, 5) + PMV::blade(3, 6)) * s("sh*r3/3"));
  EXPECT_THROW(qrot<PolyRat>(PolyRat(1), PolyRat(1), PolyRat(1), ch, sh, PolyRat(2)), Error);
}

TEST_F(Groups, CompositionAndAngleDoubling) {
  auto f = cl03<PolyRat>();
  PMV q12 = PMV::scalar(3, s("ch")) + PMV::blade(3, 3) * s("sh");
  EXPECT_EQ(cmul(q12, q12, f), PMV::scalar(3, s("2*ch^2-1")) + PMV::blade(3, 3) * s("2*ch*sh"));
  EXPECT_EQ(cmul({q12, q12, q12}, f), PMV::scalar(3, s("4*ch^3-3*ch")) + PMV::blade(3, 3) * s("sh*(4*ch^2-1)"));
  PMV qa = PMV::scalar(3, s("ca")) + PMV::blade(3, 3) * s("sa");
  PMV qb = PMV::scalar(3, s("cb")) + PMV::blade(3, 5) * s("sb");
  auto w = vec("a", "b", "c");
  auto [lhs, rhs] = compose_check(qb, qa, w);
  EXPECT_EQ(lhs, rhs);
  EXPECT_NE(lhs, rot(w, cmul(qa, qb, f)));

  auto rng = stream_rng(12, 0);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 30; ++k) {
    auto a = qrot(u(rng), u(rng), u(rng), u(rng)), b = qrot(u(rng), u(rng), u(rng), u(rng));
    auto v = fvec(u(rng), u(rng), u(rng));
    auto [x, y] = compose_check(a, b, v);
    EXPECT_LT(max_abs(x - y), kTol);
  }
}

TEST(Rot, RejectsBadInput) {
  auto q = QMV::scalar(3, Rational(1));
  EXPECT_THROW(rot(QMV::blade(3, 3), q), NotAVector);
  EXPECT_THROW(rot(QMV::basis_vector(3, 1), QMV::basis_vector(3, 2)), BadShape);
}

TEST_F(Groups, RigidMotionIdentities) {
  auto F = cl031<PolyRat>();
  PMV id = PMV::scalar(4, PolyRat(1)), e4 = PMV::blade(4, 8);
  auto t = vec4("t1", "t2", "t3"), x = vec4("x1", "x2", "x3"), y = vec4("y1", "y2", "y3");
  EXPECT_EQ(cinv(id + cmul(t, e4, F), F),
            id - PMV::blade(4, 9) * s("t1") - PMV::blade(4, 10) * s("t2") - PMV::blade(4, 12) * s("t3"));
  PMV g = lift4(spin3_symbolic(tab));
  EXPECT_EQ(cmul(g, star(g, F), F), id);
  EXPECT_EQ(star(ge(g, -t), F), star(g, F) + cmul({star(g, F), t, e4}, F) / PolyRat(2));
  EXPECT_EQ(cmul({ge(g, t), id + cmul(x, e4, F), star(ge(g, -t), F)}, F), id + cmul(rigid(x, g, t), e4, F));
  EXPECT_EQ(distance_squared(rigid(x, g, t), rigid(y, g, t)), distance_squared(x, y));
  EXPECT_EQ(distance_squared(x, y), s("(x1-y1)^2+(x2-y2)^2+(x3-y3)^2"));
  EXPECT_EQ(rigid(x, id, t), x + t);
  PMV h = lift4(spin3_symbolic(tab, "d", "delta", false));
  auto t2 = vec4("s1", "s2", "s3");
  EXPECT_EQ(rigid(rigid(x, g, t), h, t2), rigid(x, cmul(h, g, F), rigid(t, h, t2)));
}

TEST(Rigid, FloatDistanceAndErrors) {
  auto rng = stream_rng(13, 0);
  std::uniform_real_distribution<double> u(-2, 2);
  auto v4 = [&] { return FMV::vector(4, {Float(u(rng)), Float(u(rng)), Float(u(rng)), Float(0)}); };
  for (int k = 0; k < 20; ++k) {
    auto g = lift4(qrot(u(rng), u(rng), u(rng), u(rng)));
    auto x = v4(), y = v4(), t = v4();
    EXPECT_NEAR(distance(rigid(x, g, t), rigid(y, g, t)), distance(x, y), kTol);
  }
  auto x = FMV::vector(4, {Float(1), Float(2), Float(2), Float(0)});
  EXPECT_NEAR(distance(x, FMV(4)), 3.0, kTol);
  EXPECT_EQ(distance(x, x), 0.0);
  auto id = FMV::scalar(4, Float(1));
  EXPECT_THROW(rigid(FMV::basis_vector(4, 4), id, FMV(4)), BadShape);
  EXPECT_THROW(rigid(x, FMV::basis_vector(4, 1), FMV(4)), BadShape);
  EXPECT_THROW(ge(id, FMV::basis_vector(4, 4)), BadShape);
}

TEST(Rigid, RadicalIsNilpotent) {
  auto F = cl031<Rational>();
  auto e4 = QMV::blade(4, 8);
  for (int k = 0; k < 50; ++k) {
    auto rng = stream_rng(14, k);
    auto u = random_multivector<Rational>(4, rng);
    auto ue = cmul(u, e4, F), eu = cmul(e4, u, F);
    EXPECT_TRUE(cmul(ue, ue, F).is_zero());
    EXPECT_TRUE(cmul(eu, eu, F).is_zero());
  }
}
