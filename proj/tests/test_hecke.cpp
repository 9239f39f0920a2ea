#include <gtest/gtest.h>

#include "cliffordlab/hecke.hpp"
#include "support.hpp"

using namespace cliffordlab;

namespace {

PolyRat P(const std::string& s, const HeckeContext& c) { return parse_polyrat(s, c.table()); }

HMV at_q1(const HMV& u, const HeckeContext& c) {
  return substitute(u, Substitution{{c.table()->index("q"), PolyRat(1)}});
}

// Shared n = 3 fixture; the Young data is reused by several tests.
class H3 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    ctx = new HeckeContext(3, hecke_table());
    young = new YoungSet(young_operators(*ctx));
  }
  static void TearDownTestSuite() {
    delete young;
    delete ctx;
  }
  static HeckeContext* ctx;
  static YoungSet* young;
};
HeckeContext* H3::ctx = nullptr;
YoungSet* H3::young = nullptr;

}  // namespace

TEST(HeckeForm, PrintedEightByEight) {
  HeckeContext c(4, hecke_table());
  const char* rows[8][8] = {{"0", "0", "0", "0", "q", "-1-q", "1", "1"},
                            {"0", "0", "0", "0", "-1-q", "q", "-1-q", "1"},
                            {"0", "0", "0", "0", "1", "-1-q", "q", "-1-q"},
                            {"0", "0", "0", "0", "1", "1", "-1-q", "q"},
                            {"1", "1", "-1", "-1", "0", "0", "0", "0"},
                            {"q", "1", "1", "-1", "0", "0", "0", "0"},
                            {"-1", "q", "1", "1", "0", "0", "0", "0"},
                            {"-1", "-1", "q", "1", "0", "0", "0", "0"}};
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) EXPECT_EQ(c.form().B()[i][j], P(rows[i][j], c)) << i << "," << j;
}

TEST(HeckeForm, RankOneBlock) {
  HeckeContext c(1, hecke_table());
  EXPECT_EQ(c.form().B(), (Matrix<PolyRat>{{PolyRat(0), c.q()}, {PolyRat(1), PolyRat(0)}}));
  auto rel = check_relations(c);
  ASSERT_EQ(rel.size(), 1u);
  EXPECT_TRUE(rel[0].ok);
}

TEST(HeckeRelations, HoldForRanksOneToFive) {
  for (int n = 1; n <= 5; ++n) {
    HeckeContext c(n, hecke_table());
    auto rel = check_relations(c);
    // n quadratic + C(n−1, 2) far-commutation + (n−1) braid relations
    EXPECT_EQ(rel.size(), static_cast<std::size_t>(n + (n - 1) * (n - 2) / 2 + (n - 1)));
    for (const auto& r : rel) EXPECT_TRUE(r.ok) << "n=" << n << " " << r.name;
  }
}

TEST(HeckeRelations, RankFourCounts) {
  HeckeContext c(4, hecke_table());
  EXPECT_EQ(check_relations(c).size(), 10u);
}

TEST(HeckeRelations, SymmetricGroupLimit) {
  HeckeContext c(3, hecke_table());
  for (int i = 1; i <= 3; ++i) {
    auto bi = at_q1(c.b(i), c);
    auto f1 = BilinearForm<PolyRat>(hecke_form(3, PolyRat(1)).B());
    EXPECT_EQ(cmul(bi, bi, f1), c.id());
  }
}

// The 24 reduced-word products of S_4 evaluate in Cl(B) but are linearly dependent there:
// the representation is not injective from n = 4 on, while the S_3 words stay independent.
TEST(HeckeRelations, ProductsUpToRankFourEvaluate) {
  HeckeContext c(4, hecke_table());
  auto words = reduced_words(4);
  EXPECT_EQ(words.size(), 24u);
  EXPECT_LT(rank_of(c.basis(4)), 24);
  EXPECT_EQ(rank_of(c.basis(3)), 6);
  EXPECT_EQ(word_name({1, 2, 3, 4}), "b1234");
}

TEST(H2, OperatorsAndLimit) {
  HeckeContext c(4, hecke_table());
  auto h = h2_operators(c);
  const auto q = c.q();
  auto e15 = HMV::blade(8, 0x11);
  EXPECT_EQ(h.R12, e15 + c.id() * q);
  EXPECT_EQ(h.C12, c.id() - e15);
  EXPECT_EQ(c.rev(h.C12), h.R12);
  EXPECT_EQ(c.mul(h.R12, h.R12), h.R12 * (q + PolyRat(1)));
  EXPECT_EQ(c.mul(h.C12, h.C12), h.C12 * (q + PolyRat(1)));
  EXPECT_TRUE(c.mul(h.R12, h.C12).is_zero());
  EXPECT_TRUE(c.mul(h.C12, h.R12).is_zero());
  EXPECT_EQ(c.mul(h.Y2, h.Y2), h.Y2);
  EXPECT_EQ(c.mul(h.Y11, h.Y11), h.Y11);
  EXPECT_EQ(h.Y2 + h.Y11, c.id());
  EXPECT_EQ(at_q1(h.Y2, c), (c.id() + e15) / PolyRat(2));
  auto coeffs = bexpand(h.C12 / (PolyRat(1) + q), c, 2);
  EXPECT_EQ(coeffs, (std::vector<PolyRat>{PolyRat(1) / (PolyRat(1) + q), PolyRat(-1) / (PolyRat(1) + q)}));
}

TEST(H2, IdempotentBranches) {
  HeckeContext c(2, hecke_table());
  auto s = h2_idempotents(c);
  ASSERT_EQ(s.size(), 4u);
  // each branch is an idempotent, verified independently of the solver
  for (const auto& br : s.branches) {
    HMV x = c.id() * br.at(c.table()->index("a")) + c.b(1) * br.at(c.table()->index("b"));
    EXPECT_EQ(c.mul(x, x), x);
  }
}

TEST_F(H3, YoungIdentities) {
  auto checks = young_checks(*ctx, *young);
  ASSERT_EQ(checks.size(), 12u);
  for (const auto& ck : checks) EXPECT_TRUE(ck.ok) << ck.name;
  for (const auto& ck : construction_checks(*ctx, *young)) EXPECT_TRUE(ck.ok) << ck.name;
}

TEST_F(H3, SymmetrizerClosedForm) {
  const auto& c = *ctx;
  auto D = P("(1+q+q^2)*(1+q)", c);
  auto Y3 = (c.id() * P("q^3", c) + c.word({1}) * P("q^2", c) + c.word({2}) * P("q^2", c) + c.word({1, 2}) * c.q() +
             c.word({2, 1}) * c.q() + c.word({1, 2, 1})) /
            D;
  EXPECT_EQ(young->Y3, Y3);
  // q ↦ 1: the plain symmetrizer (1/6)Σσ
  EXPECT_EQ(at_q1(young->Y3, c), at_q1((c.id() + c.word({1}) + c.word({2}) + c.word({1, 2}) + c.word({2, 1}) + c.word({1, 2, 1})) /
                             PolyRat(6),
                         c));
}

TEST_F(H3, BexpandOfF1) {
  const auto& c = *ctx;
  auto coeffs = bexpand(young->f1, c);
  std::vector<PolyRat> printed = {P("1/(1+q)", c),
                                  P("-K4", c),
                                  P("K4*q", c),
                                  P("K4", c),
                                  P("-(K4*q^3+q+K4-1)/(q*(1+q))", c),
                                  P("-(-K4+K4*q^2+1)/(q*(1+q))", c)};
  EXPECT_EQ(coeffs, printed);
  EXPECT_EQ(bexpand(c.word({1, 2}), c), (std::vector<PolyRat>{PolyRat(0), PolyRat(0), PolyRat(0), PolyRat(1),
                                                               PolyRat(0), PolyRat(0)}));
}

TEST_F(H3, BexpandOutsideSpan) {
  EXPECT_THROW(bexpand(HMV::blade(6, 1), *ctx), NotInSpan);
}

TEST_F(H3, RowSymmetrizer) {
  const auto& c = *ctx;
  auto r = row_symmetrizer_R13(c, *young);
  EXPECT_EQ(r.product, young->Y21_132);
  EXPECT_EQ(c.mul(r.R13, r.R13), r.R13);
  EXPECT_EQ(r.R13 + c.rev(r.R13), c.id());
  EXPECT_EQ(r.free_params.size(), 1u);
}

// The printed R13 keeps P3 free; it satisfies the same defining equations.
TEST_F(H3, PrintedRowSymmetrizer) {
  const auto& c = *ctx;
  std::vector<PolyRat> coeffs = {
      P("q/(1+q)", c),
      P("-(-q^2+q^2*P3+P3*q-1+P3)/((q+1+q^2)*q)", c),
      P("P3", c),
      P("(q^2*P3+P3*q+P3-1)/(q*(q+1+q^2))", c),
      P("-(q^5*P3+q^4*P3+q^3*P3-q^2+q^2*P3+P3*q-1+P3)/((1+q)*q^2*(q+1+q^2))", c),
      P("-(q^4*P3+q^3*P3-P3*q+1-P3)/(q^2*(q^3+2*q^2+2*q+1))", c)};
  auto R13 = combine(coeffs, c.basis(3));
  EXPECT_EQ(R13 + c.rev(R13), c.id());
  EXPECT_EQ(c.mul(R13, young->f1), young->Y21_132);
  EXPECT_EQ(c.mul(R13, R13), R13);
}

TEST_F(H3, GarnirAndYoungBasis) {
  const auto& c = *ctx;
  auto g = garnir(c, *young);
  EXPECT_EQ(g.dimension, 3);
  EXPECT_EQ(g.rank_representatives, 3);
  for (const auto& r : g.representatives) EXPECT_TRUE(c.mul(young->Y21_123, r).is_zero());
  EXPECT_FALSE(g.GY.is_zero());
  EXPECT_TRUE(g.forced_zero_empty);
  EXPECT_FALSE(g.aGY.is_zero());
  EXPECT_EQ(g.rank_products, 2);
  EXPECT_EQ(g.rank_S, 6);
  // only the trivial combination of the representatives vanishes
  auto tab = c.table();
  HMV comb = g.representatives[0] * c.sym("P1") + g.representatives[1] * c.sym("P2") +
             g.representatives[2] * c.sym("P3");
  auto sol = clisolve_linear(comb, {tab->index("P1"), tab->index("P2"), tab->index("P3")});
  ASSERT_EQ(sol.size(), 1u);
  for (const auto& [k, v] : sol.branches[0]) EXPECT_TRUE(v.is_zero());

  auto id_coeffs = yexpand(c.id(), g.S);
  EXPECT_EQ(id_coeffs, (std::vector<PolyRat>{PolyRat(1), PolyRat(1), PolyRat(0), PolyRat(0), PolyRat(1), PolyRat(1)}));
  auto y3 = yexpand(young->Y3, g.S);
  EXPECT_EQ(y3, (std::vector<PolyRat>{PolyRat(1), PolyRat(0), PolyRat(0), PolyRat(0), PolyRat(0), PolyRat(0)}));
  auto b1 = yexpand(c.b(1), g.S);
  EXPECT_EQ(combine(b1, g.S), c.b(1));
}

TEST_F(H3, AlphaQInvertsReducedWords) {
  const auto& c = *ctx;
  for (const auto& w : reduced_words(3)) {
    auto bw = c.word(w);
    EXPECT_EQ(c.mul(alpha_q(bw, c), bw), c.id()) << word_name(w);
    EXPECT_EQ(alpha_q(bw, c), cinv(bw, c.form())) << word_name(w);
  }
  EXPECT_EQ(alpha_q(c.id(), c), c.id());
  EXPECT_EQ(alpha_q(c.b(1), c), c.id() * P("(q-1)/q", c) + c.b(1) / c.q());
  auto q3 = P("q^3", c);
  auto expected = c.id() * (P("q^3-2*q^2+2*q-1", c) / q3) + (c.b(1) + c.b(2)) * (P("q^2-2*q+1", c) / q3) +
                  (c.word({1, 2}) + c.word({2, 1})) * (P("q-1", c) / q3) + c.word({1, 2, 1}) / q3;
  EXPECT_EQ(alpha_q(c.word({1, 2, 1}), c), expected);
}

TEST_F(H3, AlphaQDoesNotInvertOnePlusB1) {
  const auto& c = *ctx;
  auto x = c.id() + c.b(1);
  auto inv = cinv(x, c.form());
  EXPECT_NE(alpha_q(x, c), inv);
  EXPECT_EQ(inv, (c.id() * (c.q() - PolyRat(2)) + c.b(1)) / (PolyRat(2) * (c.q() - PolyRat(1))));
}
