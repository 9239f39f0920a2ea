#include <gtest/gtest.h>

#include "cliffordlab/io.hpp"
#include "cliffordlab/random.hpp"
#include "support.hpp"

using namespace cliffordlab;
using testing_support::mvq;
using testing_support::qmatrix;

TEST(ScalarParse, AllBackends) {
  EXPECT_EQ(parse_scalar<Rational>("-3/4"), Rational(-3, 4));
  EXPECT_EQ(parse_scalar<Rational>("6/8"), Rational(3, 4));
  EXPECT_DOUBLE_EQ(parse_scalar<Float>("0.25").value(), 0.25);
  EXPECT_DOUBLE_EQ(parse_scalar<Float>("1/8").value(), 0.125);
  EXPECT_DOUBLE_EQ(parse_scalar<Float>("+2e3").value(), 2000.0);
  EXPECT_THROW(parse_scalar<Float>("1.5x"), ParseError);
  EXPECT_THROW(parse_scalar<Rational>("abc"), ParseError);
  auto tab = make_table({"x", "y"});
  EXPECT_EQ(parse_scalar<PolyRat>("x^2*y-1", tab), PolyRat::symbol(tab, "x") * PolyRat::symbol(tab, "x") *
                                                        PolyRat::symbol(tab, "y") -
                                                    PolyRat(1));
}

TEST(ScalarJson, StringsAndNumbers) {
  EXPECT_EQ(scalar_from_json<Rational>(json("5/3")), Rational(5, 3));
  EXPECT_EQ(scalar_from_json<Rational>(json(7)), Rational(7));
  EXPECT_THROW(scalar_from_json<Rational>(json(0.5)), ParseError);
  EXPECT_DOUBLE_EQ(scalar_from_json<Float>(json(0.5)).value(), 0.5);
  EXPECT_THROW(scalar_from_json<Rational>(json::array()), ParseError);
}

TEST(FloatText, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3, -2.5e-17, 4.2360679774997898, 1e300}) {
    EXPECT_EQ(parse_scalar<Float>(double_string(v)).value(), v) << double_string(v);
  }
}

TEST(MultivectorJson, Layout) {
  auto u = mvq(3, {{"Id", 2}, {"e13", -1}});
  json j = to_json(u);
  EXPECT_EQ(j["dim"], 3);
  ASSERT_EQ(j["terms"].size(), 2u);
  EXPECT_EQ(j["terms"][0]["blade"], json::array());
  EXPECT_EQ(j["terms"][0]["coeff"], "2");
  EXPECT_EQ(j["terms"][1]["blade"], json({1, 3}));
  EXPECT_EQ(j["terms"][1]["coeff"], "-1");
}

TEST(MultivectorJson, RoundTripRational) {
  auto rng = stream_rng(21, 0);
  for (int k = 0; k < 100; ++k) {
    auto u = random_multivector<Rational>(1 + k % 5, rng);
    EXPECT_EQ(multivector_from_json<Rational>(json::parse(to_json(u).dump())), u);
  }
}

TEST(MultivectorJson, RoundTripFloatIsBitExact) {
  auto rng = stream_rng(22, 0);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int k = 0; k < 50; ++k) {
    Multivector<Float> u(4);
    for (Blade b = 0; b < 16; ++b)
      if (rng() % 2) u.add_term(b, Float(d(rng)));
    auto back = multivector_from_json<Float>(json::parse(to_json(u).dump()));
    ASSERT_EQ(back.size(), u.size());
    const auto& terms = u.terms();
    for (const auto& [b, c] : terms) EXPECT_EQ(back.coeff(b).value(), c.value());
  }
}

TEST(MultivectorJson, RoundTripPolyRat) {
  auto tab = make_table({"q", "K4"});
  auto s = [&](const char* e) { return parse_polyrat(e, tab); };
  Multivector<PolyRat> u(3);
  u.add_term(0, s("1/(1+q)"));
  u.add_term(5, s("-(K4*q^3+q+K4-1)/(q*(1+q))"));
  EXPECT_EQ(multivector_from_json<PolyRat>(json::parse(to_json(u).dump()), tab), u);
}

TEST(MultivectorJson, Rejects) {
  EXPECT_THROW(multivector_from_json<Rational>(json::parse(R"({"terms": []})")), ParseError);
  EXPECT_THROW(multivector_from_json<Rational>(json::parse(R"({"dim": 2, "terms": [{"blade": [3], "coeff": "1"}]})")),
               ParseError);
  EXPECT_THROW(multivector_from_json<Rational>(json::parse(R"({"dim": 3, "terms": [{"blade": [2, 1], "coeff": "1"}]})")),
               ParseError);
  EXPECT_THROW(multivector_from_json<Rational>(json::parse(R"({"dim": -1, "terms": []})")), ParseError);
  EXPECT_THROW(multivector_from_json<Rational>(json::parse(R"({"dim": 2, "terms": [{"blade": [1], "coeff": "x"}]})")),
               ParseError);
}

TEST(MatrixJson, RoundTripAndShapeChecks) {
  auto m = qmatrix({{4, 8, 3}, {0, 9, 5}, {-2, 1, 7}});
  json j = matrix_to_json(m);
  EXPECT_EQ(j["rows"], 3);
  EXPECT_EQ(j["cols"], 3);
  EXPECT_EQ(matrix_from_json<Rational>(j), m);
  EXPECT_EQ(matrix_from_json<Rational>(json::parse(R"({"entries": [["1/2", 3]]})")),
            (Matrix<Rational>{{Rational(1, 2), Rational(3)}}));
  EXPECT_THROW(matrix_from_json<Rational>(json::parse(R"({"entries": [["1"], ["1", "2"]]})")), ParseError);
  EXPECT_THROW(matrix_from_json<Rational>(json::parse(R"({"rows": 3, "entries": [["1"]]})")), ParseError);
  EXPECT_THROW(matrix_from_json<Rational>(json::parse(R"({"cols": 2, "entries": [["1"]]})")), ParseError);
  EXPECT_THROW(matrix_from_json<Rational>(json::parse(R"([1, 2])")), ParseError);
}

TEST(FormJson, RoundTrip) {
  auto f = testing_support::example_form();
  json j = form_to_json(f);
  EXPECT_EQ(j["dim"], 3);
  EXPECT_EQ(form_from_json<Rational>(j).B(), f.B());
  EXPECT_THROW(form_from_json<Rational>(json::parse(R"({"dim": 2, "entries": [["1"]]})")), ParseError);
}

TEST(RunReportJson, StatusAndDeterminism) {
  RunReport r;
  r.command = "demo";
  r.flag("flag ok", true);
  r.count("count", 3, 3);
  r.numeric("small residual", 1e-12, 1e-9);
  r.exact("exact", mvq(2, {{"e1", 1}}), mvq(2, {{"e1", 1}}));
  r.data["x"] = 1;
  r.elapsed_ms = 123;
  json j = r.to_json();
  EXPECT_EQ(j["status"], "pass");
  EXPECT_EQ(j["checks"].size(), 4u);
  EXPECT_FALSE(j.contains("elapsed_ms"));
  RunReport r2 = r;
  r2.elapsed_ms = 999;
  EXPECT_EQ(r2.to_json().dump(), j.dump());

  r.numeric("large residual", 1e-3, 1e-9);
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.to_json()["status"], "fail");
  r.checks.pop_back();
  r.exact("mismatch", mvq(2, {{"e1", 1}}), mvq(2, {{"e2", 1}, {"e12", 1}}));
  EXPECT_EQ(r.checks.back().residual, 3.0);
  EXPECT_FALSE(r.pass());
  r.checks.pop_back();
  r.numeric("nan residual", std::nan(""), 1.0);
  EXPECT_FALSE(r.pass());
}

TEST(RunReportText, RendersEveryCheck) {
  RunReport r;
  r.command = "demo";
  r.flag("first", true);
  r.flag("second", false);
  auto text = r.to_text();
  EXPECT_NE(text.find("status: fail"), std::string::npos);
  EXPECT_NE(text.find("[PASS] first"), std::string::npos);
  EXPECT_NE(text.find("[FAIL] second"), std::string::npos);
}
