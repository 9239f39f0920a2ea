#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cliffordlab/groups.hpp"
#include "cliffordlab/hecke.hpp"
#include "cliffordlab/helmstetter.hpp"
#include "cliffordlab/io.hpp"
#include "cliffordlab/random.hpp"
#include "cliffordlab/svd.hpp"

using namespace cliffordlab;

namespace {

constexpr const char* kGrammar =
    "usage: cliffordlab <helmstetter|hecke|svd|pin3|spin3|rigid> [subcommand] [--dim N] [--n N]\n"
    "                   [--input PATH] [--signature p,q] [--axis x,y,z] [--angle R] [--vector x,y,z]\n"
    "                   [--samples N] [--seed S] [--jobs N] [--format json|text] [--paper-example]\n"
    "                   [--numeric|--symbolic]\n"
    "subcommands: hecke check|young|garnir, pin3 verify, spin3 rotate|verify, rigid verify\n";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command, sub;
  std::optional<int> dim, n, samples;
  std::string input, signature, axis, angle, vector, format = "json";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool pinned = false, numeric = false, symbolic = false;
};

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      out.push_back(parse_scalar<Float>(item).value());
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + ": " + text);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected) throw UsageError(std::string(what) + " needs " + std::to_string(expected) + " values");
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

template <class S>
json mv_list(const std::vector<Multivector<S>>& list) {
  json a = json::array();
  for (const auto& u : list) a.push_back(to_json(u));
  return a;
}

json doubles(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(double_string(x));
  return a;
}

void reject(bool bad, const std::string& why) {
  if (bad) throw UsageError(why);
}

// ---- helmstetter ---------------------------------------------------------------------------

RunReport run_helmstetter(const Options& o) {
  reject(!o.sub.empty(), "helmstetter takes no subcommand");
  reject(o.numeric && o.symbolic, "--numeric and --symbolic are exclusive");
  const int dim = o.dim.value_or(3);
  RunReport r;
  r.command = "helmstetter";
  using R = Rational;
  using MV = Multivector<R>;

  if (o.symbolic) {
    reject(dim < 2 || dim > 4, "symbolic verification supports --dim 2..4");
    reject(o.pinned && dim != 3, "the printed symbolic example has --dim 3");
    auto s = symbolic_setup(dim);
    auto h = check_identity(s.u, s.v, s.form);
    r.data["mode"] = "symbolic";
    r.data["dim"] = dim;
    r.data["form"] = form_to_json(s.form);
    r.data["F"] = to_json(h.F);
    r.checks.push_back({"F is a bivector", "grade 2", h.F.is_grade(2) || h.F.is_zero() ? "grade 2" : "mixed",
                        h.F.is_grade(2) || h.F.is_zero() ? 0.0 : 1.0, 0.0});
    r.exact("cmul(u,v) - identity rhs", h.residual, Multivector<PolyRat>(dim));
    return r;
  }

  if (o.pinned) {
    reject(dim != 3 || !o.input.empty(), "the printed numeric example has --dim 3 and no --input");
    BilinearForm<R> f(Matrix<R>{{4, 8, 3}, {0, 9, 5}, {-2, 1, 7}});
    MV u(3), v(3);
    u.add_term(0, 2);
    u.add_term(1, 1);
    u.add_term(6, -1);
    u.add_term(7, 1);
    v.add_term(0, 3);
    v.add_term(4, -1);
    v.add_term(3, 1);
    v.add_term(6, 1);
    auto h = check_identity(u, v, f);
    MV F(3);
    F.add_term(5, R(2) / R(91));
    F.add_term(3, R(86) / R(455));
    MV prod(3);
    for (auto [b, c] : std::vector<std::pair<Blade, int>>{{4, -48}, {0, 79}, {5, 13}, {3, -6}, {2, 81}, {7, -8}, {1, -81}})
      prod.add_term(b, R(c));
    r.data["mode"] = "numeric";
    r.data["form"] = form_to_json(f);
    r.data["u"] = to_json(u);
    r.data["v"] = to_json(v);
    r.data["F"] = to_json(h.F);
    r.data["F1"] = to_json(h.F1);
    r.data["F2"] = to_json(h.F2);
    r.data["lhs"] = to_json(h.lhs);
    r.data["rhs"] = to_json(h.rhs);
    r.exact("F", h.F, F);
    r.exact("cmul(u,v)", h.lhs, prod);
    r.exact("identity rhs", h.rhs, prod);
    r.exact("product check residual", h.residual, MV(3));
    return r;
  }

  reject(dim < 2 || dim > 6, "numeric verification supports --dim 2..6");
  const int samples = o.samples.value_or(10);
  reject(samples < 1, "--samples must be positive");
  std::optional<BilinearForm<R>> given;
  if (!o.input.empty()) {
    try {
      given = form_from_json<R>(read_json_file(o.input));
    } catch (const ParseError& e) {
      throw UsageError(e.what());
    }
    reject(given->dim() != dim && o.dim.has_value(), "--dim does not match the input form");
    if (is_zero(given->det_g())) throw UsageError("input form has a degenerate symmetric part");
  }
  const int n = given ? given->dim() : dim;
  long long bad_identity = 0, bad_wexp = 0, bad_grade = 0;
  for (int k = 0; k < samples; ++k) {
    auto rng = stream_rng(o.seed, k);
    BilinearForm<R> f = given ? *given : random_form<R>(n, rng);
    MV u = random_multivector<R>(n, rng), v = random_multivector<R>(n, rng);
    auto h = check_identity(u, v, f);
    bad_identity += !h.residual.is_zero();
    bad_wexp += !(wedge(h.F1, h.F2) == MV::scalar(n, R(1)));
    bad_grade += !(h.F.is_zero() || h.F.is_grade(2));
  }
  r.data["mode"] = "numeric";
  r.data["dim"] = n;
  r.data["samples"] = samples;
  r.data["seed"] = o.seed;
  if (given) r.data["form"] = form_to_json(*given);
  r.count("samples with nonzero identity residual", bad_identity, 0);
  r.count("samples with wexp(F) ^ wexp(-F) != Id", bad_wexp, 0);
  r.count("samples with F not a bivector", bad_grade, 0);
  return r;
}

// ---- hecke ----------------------------------------------------------------------------------

json hecke_coords(const HMV& u, const HeckeContext& c) {
  json j = json::object();
  auto ws = c.words(3);
  auto co = bexpand(u, c);
  for (std::size_t i = 0; i < ws.size(); ++i) j[word_name(ws[i])] = to_string(co[i]);
  return j;
}

json hecke_operator(const HMV& u, const HeckeContext& c) {
  return {{"grassmann", to_json(u)}, {"hecke", hecke_coords(u, c)}};
}

// The printed 8×8 defining matrix for n = 4.
Matrix<PolyRat> printed_hecke_form(const TablePtr& tab) {
  const char* rows[8][8] = {{"0", "0", "0", "0", "q", "-1-q", "1", "1"},     {"0", "0", "0", "0", "-1-q", "q", "-1-q", "1"},
                            {"0", "0", "0", "0", "1", "-1-q", "q", "-1-q"},  {"0", "0", "0", "0", "1", "1", "-1-q", "q"},
                            {"1", "1", "-1", "-1", "0", "0", "0", "0"},      {"q", "1", "1", "-1", "0", "0", "0", "0"},
                            {"-1", "q", "1", "1", "0", "0", "0", "0"},       {"-1", "-1", "q", "1", "0", "0", "0", "0"}};
  Matrix<PolyRat> m(8, std::vector<PolyRat>(8));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m[i][j] = parse_polyrat(rows[i][j], tab);
  return m;
}

RunReport run_hecke(const Options& o) {
  const std::string sub = o.sub.empty() ? "check" : o.sub;
  reject(sub != "check" && sub != "young" && sub != "garnir", "hecke subcommand must be check, young or garnir");
  int n = o.n.value_or(sub == "check" && o.pinned ? 4 : 3);
  reject(o.pinned && sub == "check" && n != 4, "the printed relation example has --n 4");
  reject(sub != "check" && n != 3, "young and garnir need --n 3");
  reject(n < 1 || n > 6, "--n must be in 1..6");
  RunReport r;
  r.command = "hecke " + sub;
  auto tab = hecke_table();
  HeckeContext c(n, tab);
  const PolyRat& q = c.q();

  if (sub == "check") {
    r.data["n"] = n;
    r.data["form"] = form_to_json(c.form());
    json gens = json::array();
    for (int i = 1; i <= n; ++i) gens.push_back(to_json(c.b(i)));
    r.data["generators"] = gens;
    if (o.pinned) {
      bool same = true;
      auto printed = printed_hecke_form(tab);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) same = same && c.form().B()[i][j] == printed[i][j];
      r.flag("form equals the printed 8x8 matrix", same);
    }
    for (const auto& item : check_relations(c)) r.flag(item.name, item.ok);
    Substitution q1{{tab->index("q"), PolyRat(1)}};
    for (int i = 1; i <= n; ++i) {
      HMV sq = substitute(c.mul(c.b(i), c.b(i)), q1);
      r.exact("q=1: b" + std::to_string(i) + "^2", sq, c.id());
    }
    auto h = h2_operators(c);
    r.exact("R12*R12 = (q+1) R12", c.mul(h.R12, h.R12), h.R12 * (PolyRat(1) + q));
    r.exact("C12*C12 = (q+1) C12", c.mul(h.C12, h.C12), h.C12 * (PolyRat(1) + q));
    r.exact("R12*C12", c.mul(h.R12, h.C12), HMV(c.dim()));
    r.exact("C12*R12", c.mul(h.C12, h.R12), HMV(c.dim()));
    r.exact("rev(C12)", c.rev(h.C12), h.R12);
    r.exact("Y2+Y11", h.Y2 + h.Y11, c.id());
    r.exact("q=1: Y2", substitute(h.Y2, q1), (c.id() + c.b(1)) / PolyRat(2));
    r.exact("q=1: Y11", substitute(h.Y11, q1), (c.id() - c.b(1)) / PolyRat(2));
    auto branches = h2_idempotents(c);
    r.count("H(2,q) idempotent branches", static_cast<long long>(branches.size()), 4);
    json bj = json::array();
    for (const auto& br : branches.branches)
      bj.push_back({{"a", to_string(br.at(tab->index("a")))}, {"b", to_string(br.at(tab->index("b")))}});
    r.data["h2_idempotents"] = bj;
    r.data["R12"] = to_json(h.R12);
    r.data["C12"] = to_json(h.C12);
    return r;
  }

  auto y = young_operators(c);
  if (sub == "young") {
    for (const auto& item : young_checks(c, y)) r.flag(item.name, item.ok);
    json cons = json::object();
    for (const auto& item : construction_checks(c, y)) cons[item.name] = item.ok;
    r.data["construction"] = cons;
    r.data["Y3"] = hecke_operator(y.Y3, c);
    r.data["Y111"] = hecke_operator(y.Y111, c);
    r.data["f1"] = hecke_operator(y.f1, c);
    r.data["Y21_132"] = hecke_operator(y.Y21_132, c);
    r.data["Y21_123"] = hecke_operator(y.Y21_123, c);
    return r;
  }

  // garnir: R13, Garnir element, Young basis and the α_q inverses.
  auto r13 = row_symmetrizer_R13(c, y);
  r.exact("R13*R13", c.mul(r13.R13, r13.R13), r13.R13);
  r.exact("R13*f1", r13.product, y.Y21_132);
  r.exact("rev(R13)+R13", c.rev(r13.R13) + r13.R13, c.id());
  {
    const char* printed[6][2] = {
        {"Id", "q/(q+1+q^2)"},
        {"b1", "-(K4*q^3+2*K4*q^2+2*K4*q-1+K4)/(q^3+2*q^2+2*q+1)"},
        {"b2", "(q^4*K4+2*K4*q^3+2*K4*q^2+K4*q+1)/(q^3+2*q^2+2*q+1)"},
        {"b12", "(K4*q^3+2*K4*q^2+2*K4*q-1+K4)/(q^3+2*q^2+2*q+1)"},
        {"b21", "-(q^5*K4+q^4*K4+K4*q^3+q^3+K4*q^2+K4*q+q+K4-1)/(q*(q^3+2*q^2+2*q+1))"},
        {"b121", "-(q^4*K4+K4*q^3+q^2-K4*q-K4+1)/((q+1+q^2)*q*(1+q))"}};
    HMV expected(c.dim());
    for (const auto& [w, e] : printed) {
      auto ws = c.words(3);
      for (const auto& word : ws)
        if (word_name(word) == w) expected += c.word(word) * parse_polyrat(e, tab);
    }
    r.exact("bexpand(R13*f1) matches the printed K4 display", r13.product, expected);
  }
  auto g = garnir(c, y);
  r.count("Garnir solution space dimension", g.dimension, 3);
  r.count("rank of the representatives", g.rank_representatives, 3);
  r.flag("G*Y21_123 != 0", !g.GY.is_zero());
  r.flag("forced-zero system for G*Y21_123 is empty", g.forced_zero_empty);
  r.flag("alpha_q(G)*Y21_132 != 0", !g.aGY.is_zero());
  r.count("rank of {G*Y21_123, alpha_q(G)*Y21_132}", g.rank_products, 2);
  r.count("rank of the Young basis S", g.rank_S, 6);
  auto yid = yexpand(c.id(), g.S);
  std::vector<std::string> pattern;
  bool pattern_ok = yid.size() == 6;
  const int expect[6] = {1, 1, 0, 0, 1, 1};
  for (std::size_t i = 0; i < yid.size(); ++i) {
    pattern.push_back(to_string(yid[i]));
    pattern_ok = pattern_ok && yid[i] == PolyRat(expect[i]);
  }
  r.checks.push_back({"yexpand(Id)", "1,1,0,0,1,1",
                      [&] {
                        std::string s;
                        for (const auto& p : pattern) s += (s.empty() ? "" : ",") + p;
                        return s;
                      }(),
                      pattern_ok ? 0.0 : 1.0, 0.0});
  for (const auto& w : c.words(3)) {
    HMV bw = c.word(w);
    r.exact("alpha_q(" + word_name(w) + ") = cinv(" + word_name(w) + ")", alpha_q(bw, c), cinv(bw, c.form()));
  }
  HMV one_b1 = c.id() + c.b(1);
  HMV inv = cinv(one_b1, c.form());
  r.flag("alpha_q(Id+b1) != cinv(Id+b1)", !(alpha_q(one_b1, c) == inv));
  r.exact("cinv(Id+b1)", inv, (c.id() * (q - PolyRat(2)) + c.b(1)) / (PolyRat(2) * (q - PolyRat(1))));
  r.data["R13"] = hecke_operator(r13.R13, c);
  r.data["G"] = hecke_operator(g.G, c);
  r.data["G*Y21_123"] = hecke_operator(g.GY, c);
  r.data["alpha_q(G)*Y21_132"] = hecke_operator(g.aGY, c);
  json S = json::array();
  for (const auto& s : g.S) S.push_back(hecke_coords(s, c));
  r.data["young_basis"] = S;
  return r;
}

// ---- svd ------------------------------------------------------------------------------------

void svd_checks(RunReport& r, const SvdResult& s, const std::string& prefix) {
  const double scale = std::max(1.0, detail::max_abs(s.C));
  const double tol = 1e-9 * scale * scale;
  r.numeric(prefix + "A = U Sigma Vt", s.residual_matrix, tol);
  r.numeric(prefix + "p = pU pSigma pVt", s.residual_clifford, tol);
  r.numeric(prefix + "trimmed U Sigma Vt = C", s.residual_trimmed, tol);
  r.numeric(prefix + "Ut U = I", s.orthogonality_U, 1e-9);
  r.numeric(prefix + "Vt V = I", s.orthogonality_V, 1e-9);
  r.numeric(prefix + "AtA = V SigmaT Sigma Vt", s.residual_ata, tol);
  r.numeric(prefix + "AAt = U Sigma SigmaT Ut", s.residual_aat, tol);
  r.numeric(prefix + "A v_i = sigma_i u_i", s.sign_consistency, tol);
  r.numeric(prefix + "eigenvalues vs minpoly roots", s.eigen_root_mismatch, tol);
  int sum1 = 0, sum2 = 0;
  for (auto [v, m] : s.multiplicities_pTp) sum1 += m;
  for (auto [v, m] : s.multiplicities_ppT) sum2 += m;
  const long long N = static_cast<long long>(s.A.size());
  r.count(prefix + "eigenspinor multiplicities of pTp sum to N", sum1, N);
  r.count(prefix + "eigenspinor multiplicities of ppT sum to N", sum2, N);
}

json svd_data(const SvdResult& s) {
  json mult = json::array(), mult2 = json::array();
  for (auto [v, m] : s.multiplicities_pTp) mult.push_back({{"eigenvalue", double_string(v)}, {"multiplicity", m}});
  for (auto [v, m] : s.multiplicities_ppT) mult2.push_back({{"eigenvalue", double_string(v)}, {"multiplicity", m}});
  json mp = json::array();
  for (const auto& c : s.minpoly) mp.push_back(c.to_string());
  return {{"signature", std::to_string(s.p) + "," + std::to_string(s.q)},
          {"C", matrix_to_json(s.C)},
          {"A", matrix_to_json(s.A)},
          {"U", matrix_to_json(s.U)},
          {"Sigma", matrix_to_json(s.Sigma)},
          {"Vt", matrix_to_json(s.Vt)},
          {"singular_values", doubles(s.singular_values)},
          {"positive_singular_values", doubles(s.positive_singular_values)},
          {"eigenvalues_AtA", doubles(s.eigenvalues)},
          {"minpoly_pTp", mp},
          {"multiplicities_pTp", mult},
          {"multiplicities_ppT", mult2},
          {"p", to_json(s.p_)},
          {"pU", to_json(s.pU)},
          {"pSigma", to_json(s.pSigma)},
          {"pVt", to_json(s.pVt)},
          {"residual_matrix", double_string(s.residual_matrix)},
          {"residual_clifford", double_string(s.residual_clifford)}};
}

double sigma_error(const SvdResult& s, const std::vector<double>& expected) {
  if (s.singular_values.size() != expected.size()) return INFINITY;
  double e = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) e = std::max(e, std::fabs(s.singular_values[i] - expected[i]));
  return e;
}

RunReport run_svd(const Options& o) {
  reject(!o.sub.empty(), "svd takes no subcommand");
  reject(o.pinned == !o.input.empty(), "svd needs exactly one of --input or --paper-example");
  std::optional<std::pair<int, int>> sig;
  if (!o.signature.empty()) {
    auto v = parse_list(o.signature, 2, "--signature");
    sig = std::make_pair(static_cast<int>(v[0]), static_cast<int>(v[1]));
  }
  RunReport r;
  r.command = "svd";
  if (!o.pinned) {
    FMatrix C;
    try {
      C = matrix_from_json<Float>(read_json_file(o.input));
    } catch (const ParseError& e) {
      throw UsageError(e.what());
    }
    reject(C.empty() || C[0].empty(), "empty matrix");
    SvdResult s;
    try {
      s = svd_via_clifford(C, sig);
    } catch (const SignatureUnavailable& e) {
      throw UsageError(std::string("--signature: ") + e.what());
    } catch (const UnsupportedSignature& e) {
      throw UsageError(std::string("--signature: ") + e.what());
    }
    svd_checks(r, s, "");
    r.data = svd_data(s);
    return r;
  }
  reject(sig.has_value(), "--paper-example uses the printed signatures");
  // 2×2 example in Cl(2,0)
  FMatrix a22{{Float(2), Float(3)}, {Float(1), Float(2)}};
  auto s2 = svd_via_clifford(a22);
  svd_checks(r, s2, "2x2: ");
  FMV p2(2);
  p2.add_term(0, Float(2));
  p2.add_term(2, Float(2));
  p2.add_term(3, Float(1));
  r.numeric("2x2: p = 2Id+2e2+e12", detail::max_abs(s2.p_ - p2), 1e-12, p2.to_string(), s2.p_.to_string());
  bool mp = s2.minpoly == std::vector<Rational>{Rational(1), Rational(-18), Rational(1)};
  r.flag("2x2: climinpoly(pTp) = x^2-18x+1", mp);
  const double r5 = std::sqrt(5.0);
  r.numeric("2x2: sigma = sqrt(5)+2, sqrt(5)-2", sigma_error(s2, {r5 + 2, r5 - 2}), 1e-9);
  // 3×2 example in Cl(3,1)
  FMatrix c32{{Float(3), Float(0)}, {Float(0), Float(-1)}, {Float(0), Float(1)}};
  auto s3 = svd_via_clifford(c32);
  svd_checks(r, s3, "3x2: ");
  FMatrix printed{{Float(3), Float(0), Float(0), Float(0)},
                  {Float(0), Float(-1), Float(0), Float(0)},
                  {Float(0), Float(1), Float(0), Float(0)},
                  {Float(0), Float(0), Float(0), Float(0)}};
  double emb = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) emb = std::max(emb, std::fabs((s3.A[i][j] - printed[i][j]).value()));
  r.numeric("3x2: embed(C) equals the printed 4x4", emb, 0.0);
  r.numeric("3x2: sigma = 3, sqrt(2), 0, 0", sigma_error(s3, {3.0, std::sqrt(2.0), 0.0, 0.0}), 1e-9);
  auto mult_ok = [](const std::vector<std::pair<double, int>>& m) {
    return m.size() == 3 && std::fabs(m[0].first - 9) < 1e-9 && m[0].second == 1 && std::fabs(m[1].first - 2) < 1e-9 &&
           m[1].second == 1 && std::fabs(m[2].first) < 1e-9 && m[2].second == 2;
  };
  r.flag("3x2: multiplicities (1,1,2) for pTp", mult_ok(s3.multiplicities_pTp));
  r.flag("3x2: multiplicities (1,1,2) for ppT", mult_ok(s3.multiplicities_ppT));
  r.data["a22"] = svd_data(s2);
  r.data["c32"] = svd_data(s3);
  return r;
}

// ---- pin3 -----------------------------------------------------------------------------------

struct FamilyStats {
  bool symbolic_unit = false;
  double unit = 0, grade = 0, scalarprod = 0;
};

FamilyStats family_stats(const PinFamily& fam, const TablePtr& tab, int samples, std::uint64_t seed, int index) {
  FamilyStats st;
  auto f = cl03<PolyRat>();
  st.symbolic_unit = cmul(fam.element, star(fam.element, f), f) == Multivector<PolyRat>::scalar(3, PolyRat(1));
  auto ff = cl03<Float>();
  auto rng = stream_rng(seed, index);
  for (int k = 0; k < samples; ++k) {
    auto s = sample_family(fam, tab, rng);
    auto x = random_vector<Float>(3, rng, 1), y = random_vector<Float>(3, rng, 1);
    st.unit = std::max(st.unit, detail::max_abs(cmul(s.g, star(s.g, ff), ff) - FMV::scalar(3, Float(1))));
    auto px = pin_action(x, s.g, ff), py = pin_action(y, s.g, ff);
    st.grade = std::max(st.grade, detail::max_abs(px - px.grade_part(1)));
    double sp = (scalarprod(px.grade_part(1), py.grade_part(1), ff) - scalarprod(x, y, ff)).value();
    st.scalarprod = std::max(st.scalarprod, std::fabs(sp));
  }
  return st;
}

RunReport run_pin3(const Options& o) {
  reject(!o.sub.empty() && o.sub != "verify", "pin3 subcommand must be verify");
  const int samples = o.samples.value_or(100);
  reject(samples < 1, "--samples must be positive");
  reject(o.jobs < 1, "--jobs must be positive");
  RunReport r;
  r.command = "pin3 verify";
  auto tab = groups_table();
  auto fams = pin3_families(tab);
  std::vector<FamilyStats> stats(fams.size());
  std::vector<std::exception_ptr> errors(fams.size());
  auto work = [&](std::size_t start) {
    for (std::size_t i = start; i < fams.size(); i += static_cast<std::size_t>(o.jobs)) {
      try {
        stats[i] = family_stats(fams[i], tab, samples, o.seed, static_cast<int>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < o.jobs; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  json fj = json::array();
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const auto& nm = fams[i].name;
    r.flag(nm + ": g g* = Id (symbolic)", stats[i].symbolic_unit);
    r.numeric(nm + ": max |g g* - Id|", stats[i].unit, 1e-9);
    r.numeric(nm + ": max non-vector part of the action", stats[i].grade, 1e-9);
    r.numeric(nm + ": max scalarprod change", stats[i].scalarprod, 1e-9);
    json fr = json::array();
    for (const auto& s : fams[i].free_symbols) fr.push_back(s);
    fj.push_back({{"name", nm},
                  {"element", to_json(fams[i].element)},
                  {"free_symbols", fr},
                  {"constrained", fams[i].constrained},
                  {"relation", PolyRat(tab, tab->relation(tab->index(fams[i].constrained))).to_string()}});
  }
  r.data["samples"] = samples;
  r.data["seed"] = o.seed;
  r.data["families"] = fj;
  return r;
}

// ---- spin3 ----------------------------------------------------------------------------------

using PMV = Multivector<PolyRat>;

RunReport run_spin3_rotate(const Options& o) {
  RunReport r;
  r.command = "spin3 rotate";
  std::vector<double> axis, v;
  double theta = 0;
  if (o.pinned) {
    reject(!o.axis.empty() || !o.angle.empty() || !o.vector.empty(), "--paper-example fixes axis, angle and vector");
    axis = {2, -3, 4};
    theta = std::numbers::pi / 4;
    v = {1, -2, 4};
  } else {
    reject(o.axis.empty() || o.angle.empty() || o.vector.empty(), "spin3 rotate needs --axis, --angle and --vector");
    axis = parse_list(o.axis, 3, "--axis");
    theta = parse_list(o.angle, 1, "--angle")[0];
    v = parse_list(o.vector, 3, "--vector");
  }
  FMV q;
  try {
    q = qrot(axis[0], axis[1], axis[2], theta);
  } catch (const ZeroAxis&) {
    throw UsageError("--axis must be nonzero");
  }
  auto f = cl03<Float>();
  FMV vin = FMV::vector(3, {Float(v[0]), Float(v[1]), Float(v[2])});
  FMV out = rot(vin, q);
  // Rodrigues' formula as an independent reference.
  const double nrm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  const double k[3] = {axis[0] / nrm, axis[1] / nrm, axis[2] / nrm};
  const double kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
  const double cross[3] = {k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]};
  std::vector<double> ref(3);
  for (int i = 0; i < 3; ++i)
    ref[i] = v[i] * std::cos(theta) + cross[i] * std::sin(theta) + k[i] * kv * (1 - std::cos(theta));
  FMV refv = FMV::vector(3, {Float(ref[0]), Float(ref[1]), Float(ref[2])});
  const double scale = std::max(1.0, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
  r.numeric("q q* = Id", detail::max_abs(cmul(q, star(q, f), f) - FMV::scalar(3, Float(1))), 1e-12);
  r.numeric("result is a vector", detail::max_abs(out - out.grade_part(1)), 1e-12 * scale);
  r.numeric("length preserved", std::fabs((enorm(FMV(out.grade_part(1)), f) - enorm(vin, f)).value()),
            1e-12 * scale * scale);
  FMV ax = FMV::vector(3, {Float(axis[0]), Float(axis[1]), Float(axis[2])});
  r.numeric("axis fixed", detail::max_abs(rot(ax, q) - ax), 1e-12 * std::max(1.0, nrm));
  r.numeric("agrees with the axis-angle formula", detail::max_abs(out - refv), 1e-12 * scale, refv.to_string(),
            out.to_string());
  if (o.pinned) {
    const double s2 = std::sqrt(2.0), s29 = std::sqrt(29.0);
    FMV printed = FMV::vector(3, {Float(-2.0 / 29 * s29 * s2 + 48.0 / 29 - 19.0 / 58 * s2),
                                  Float(7.0 / 29 * s2 - 2.0 / 29 * s29 * s2 - 72.0 / 29),
                                  Float(-s29 * s2 / 58 + 10.0 / 29 * s2 + 96.0 / 29)});
    r.numeric("matches the printed radical expression", detail::max_abs(out - printed), 1e-12, printed.to_string(),
              out.to_string());
  }
  r.data["axis"] = doubles(axis);
  r.data["angle"] = double_string(theta);
  r.data["vector"] = to_json(vin);
  r.data["quaternion"] = to_json(q);
  r.data["rotated"] = to_json(out);
  return r;
}

RunReport run_spin3_verify(const Options& o) {
  reject(!o.axis.empty() || !o.angle.empty() || !o.vector.empty(), "spin3 verify takes no axis, angle or vector");
  RunReport r;
  r.command = "spin3 verify";
  auto tab = groups_table();
  auto s = [&](const char* e) { return parse_polyrat(e, tab); };
  auto f = cl03<PolyRat>();
  auto vec = [&](const char* a, const char* b, const char* c) { return PMV::vector(3, {s(a), s(b), s(c)}); };
  PMV id = PMV::scalar(3, PolyRat(1));
  PMV e1 = PMV::basis_vector(3, 1), e2 = PMV::basis_vector(3, 2), e3 = PMV::basis_vector(3, 3);
  PMV e12 = PMV::blade(3, 3), e13 = PMV::blade(3, 5), e23 = PMV::blade(3, 6), e123 = PMV::blade(3, 7);

  // general element
  PMV g = spin3_symbolic(tab);
  r.exact("gSpin gSpin* = Id", cmul(g, star(g, f), f), id);
  PMV v = vec("v1", "v2", "v3");
  PMV gv = spin_action(v, g, f);
  r.exact("gSpin v gSpin* is a vector", gv - gv.grade_part(1), PMV(3));
  PMV e11 = rot(e1, g), e22 = rot(e2, g), e33 = rot(e3, g);
  r.exact("e11 e22 + e22 e11", cmul(e11, e22, f) + cmul(e22, e11, f), PMV(3));
  r.exact("e11 e33 + e33 e11", cmul(e11, e33, f) + cmul(e33, e11, f), PMV(3));
  r.exact("e22 e33 + e33 e22", cmul(e22, e33, f) + cmul(e33, e22, f), PMV(3));
  r.exact("e11^e22^e33", wedge(wedge(e11, e22), e33), e123);
  r.exact("enorm preserved", PMV::scalar(3, enorm(gv, f)), PMV::scalar(3, enorm(v, f)));
  {
    auto c0 = s("x1");
    PMV gs = spin3_general<PolyRat>(s("c1"), s("c2"), s("c3"), c0);
    auto sol = clisolve_quadratic(cmul(gs, star(gs, f), f) - id, {tab->index("x1")});
    bool ok = sol.size() == 2;
    std::vector<PolyRat> roots;
    for (const auto& b : sol.branches) roots.push_back(b.at(tab->index("x1")));
    ok = ok && ((roots[0] == s("kappa") && roots[1] == -s("kappa")) || (roots[1] == s("kappa") && roots[0] == -s("kappa")));
    r.flag("scalar part solves to +-kappa", ok);
  }

  // quaternion table
  {
    auto t = quaternion_table<PolyRat>();
    PMV expected[3][3] = {{-id, e23, -e13}, {-e23, -id, e12}, {e13, -e12, -id}};
    const char* names[3] = {"e12", "e13", "e23"};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.exact(std::string(names[i]) + "*" + names[j], t[i][j], expected[i][j]);
  }

  // coordinate-plane rotation, half-angle symbols ch = cos(θ/2), sh = sin(θ/2)
  PolyRat ch = s("ch"), sh = s("sh"), cos_t = s("2*ch^2-1"), sin_t = s("2*ch*sh");
  PMV q12 = PMV::scalar(3, ch) + e12 * sh;
  r.exact("rot(e1, q12)", rot(e1, q12), e1 * cos_t + e2 * sin_t);
  r.exact("rot(e2, q12)", rot(e2, q12), e1 * (-sin_t) + e2 * cos_t);
  r.exact("rot(e3, q12)", rot(e3, q12), e3);
  r.exact("q12^2", cmul(q12, q12, f), PMV::scalar(3, cos_t) + e12 * sin_t);
  r.exact("q12^3", cmul({q12, q12, q12}, f), PMV::scalar(3, s("4*ch^3-3*ch")) + e12 * s("sh*(4*ch^2-1)"));
  r.exact("q12^4 = rotation by 2 theta", cmul({q12, q12, q12, q12}, f),
          PMV::scalar(3, s("2*(2*ch^2-1)^2-1")) + e12 * s("2*(2*ch^2-1)*(2*ch*sh)"));

  // composition and non-commutativity with α, β half-angles (ca, sa), (cb, sb)
  {
    PMV qa = PMV::scalar(3, s("ca")) + e12 * s("sa");
    PMV qb = PMV::scalar(3, s("cb")) + e13 * s("sb");
    PMV w = vec("a", "b", "c");
    auto [lhs, rhs] = compose_check(qb, qa, w);
    r.exact("rot(v, q13 q12) = rot(rot(v, q12), q13)", lhs, rhs);
    PMV v132 = rot(w, cmul(qa, qb, f));
    r.exact("length of v123", PMV::scalar(3, enorm(lhs, f)), PMV::scalar(3, enorm(w, f)));
    // printed difference with cos α = 2ca²−1, sin α = 2ca·sa and likewise for β
    const char* ca = "(2*ca^2-1)";
    const char* sa = "(2*ca*sa)";
    const char* cb = "(2*cb^2-1)";
    const char* sb = "(2*cb*sb)";
    auto E = [&](std::string t) {
      for (auto [k, val] : std::vector<std::pair<std::string, std::string>>{{"CA", ca}, {"SA", sa}, {"CB", cb}, {"SB", sb}}) {
        for (std::size_t p; (p = t.find(k)) != std::string::npos;) t.replace(p, k.size(), val);
      }
      return s(t.c_str());
    };
    PMV diff = e3 * E("-b*SB*SA+a*SB*CA-a*SB") + e1 * E("-b*SA*CB-c*SB+c*SB*CA+b*SA") +
               e2 * E("a*SA+c*SB*SA-a*SA*CB");
    r.exact("v123 - v132 equals the printed difference", lhs - v132, diff);
    r.flag("v123 != v132", !(lhs == v132));
  }

  // qrot displays: axes with their symbolic norms
  struct Axis {
    int a1, a2, a3;
    const char* norm;
    const char* name;
  };
  const Axis axes[7] = {{1, 0, 0, "1", "q100"},  {0, 1, 0, "1", "q010"},  {0, 0, 1, "1", "q001"}, {1, 0, 1, "r2", "q101"},
                        {0, 1, 1, "r2", "q011"}, {1, 1, 0, "r2", "q110"}, {1, 1, 1, "r3", "q111"}};
  const char* qexp[7][3] = {{"sh", "0", "0"},           {"0", "-sh", "0"},         {"0", "0", "sh"},
                            {"sh*r2/2", "0", "sh*r2/2"}, {"0", "-sh*r2/2", "sh*r2/2"}, {"sh*r2/2", "-sh*r2/2", "0"},
                            {"sh*r3/3", "-sh*r3/3", "sh*r3/3"}};
  // rot(e1, ·) displays as (e1, e2, e3) coefficients in cos θ = C, sin θ = S
  const char* rexp[7][3] = {{"1", "0", "0"},
                            {"C", "0", "-S"},
                            {"C", "S", "0"},
                            {"(C+1)/2", "r2*S/2", "-(C-1)/2"},
                            {"C", "r2*S/2", "-r2*S/2"},
                            {"(C+1)/2", "-(C-1)/2", "-r2*S/2"},
                            {"(2*C+1)/3", "(r3*S+1-C)/3", "-(r3*S-1+C)/3"}};
  auto expand_cs = [&](std::string t) {
    for (std::size_t p; (p = t.find('C')) != std::string::npos;) t.replace(p, 1, "(2*ch^2-1)");
    for (std::size_t p; (p = t.find('S')) != std::string::npos;) t.replace(p, 1, "(2*ch*sh)");
    return s(t.c_str());
  };
  for (int i = 0; i < 7; ++i) {
    const auto& A = axes[i];
    PMV q = qrot<PolyRat>(PolyRat(A.a1), PolyRat(A.a2), PolyRat(A.a3), ch, sh, s(A.norm));
    PMV qe = PMV::scalar(3, ch) + e23 * s(qexp[i][0]) + e13 * s(qexp[i][1]) + e12 * s(qexp[i][2]);
    r.exact(std::string(A.name), q, qe);
    PMV re = e1 * expand_cs(rexp[i][0]) + e2 * expand_cs(rexp[i][1]) + e3 * expand_cs(rexp[i][2]);
    r.exact(std::string("rot(e1, ") + A.name + ")", rot(e1, q), re);
  }
  {
    PMV q = qrot<PolyRat>(PolyRat(1), PolyRat(2), PolyRat(3), ch, sh, s("r14"));
    PMV ax = PMV::vector(3, {PolyRat(1), PolyRat(2), PolyRat(3)});
    r.exact("rot(e1+2e2+3e3, qrot(1,2,3))", rot(ax, q), ax);
    PMV lam_axis = vec("a1", "a2", "lam");
    PMV ql = qrot<PolyRat>(s("a1"), s("a2"), s("lam"), ch, sh, PolyRat(1));
    r.exact("rot(axis, qrot(axis)) for a unit symbolic axis", rot(lam_axis, ql), lam_axis);
  }
  // numeric displays of Example 2
  {
    auto ff = cl03<Float>();
    const double r3 = std::sqrt(3.0);
    FMV e1f = FMV::basis_vector(3, 1);
    FMV a = rot(e1f, qrot(1, 1, 1, std::numbers::pi / 2));
    FMV ea = FMV::vector(3, {Float(1.0 / 3), Float((r3 + 1) / 3), Float(-(r3 - 1) / 3)});
    r.numeric("rot(e1, q111) at theta = pi/2", detail::max_abs(a - ea), 1e-12, ea.to_string(), a.to_string());
    FMV b = rot(e1f, qrot(1, 1, 1, std::numbers::pi));
    FMV eb = FMV::vector(3, {Float(-1.0 / 3), Float(2.0 / 3), Float(2.0 / 3)});
    r.numeric("rot(e1, q111) at theta = pi", detail::max_abs(b - eb), 1e-12, eb.to_string(), b.to_string());
    (void)ff;
  }
  r.data["gSpin"] = to_json(g);
  r.data["rotated_frame"] = mv_list(std::vector<PMV>{e11, e22, e33});
  (void)o;
  return r;
}

RunReport run_spin3(const Options& o) {
  const std::string sub = o.sub.empty() ? "rotate" : o.sub;
  if (sub == "rotate") return run_spin3_rotate(o);
  if (sub == "verify") return run_spin3_verify(o);
  throw UsageError("spin3 subcommand must be rotate or verify");
}

// ---- rigid ----------------------------------------------------------------------------------

RunReport run_rigid(const Options& o) {
  reject(!o.sub.empty() && o.sub != "verify", "rigid subcommand must be verify");
  const int samples = o.samples.value_or(50);
  reject(samples < 1, "--samples must be positive");
  RunReport r;
  r.command = "rigid verify";
  auto tab = groups_table();
  auto s = [&](const char* e) { return parse_polyrat(e, tab); };
  auto F = cl031<PolyRat>();
  auto vec4 = [&](const char* a, const char* b, const char* c) { return PMV::vector(4, {s(a), s(b), s(c), PolyRat(0)}); };
  PMV id = PMV::scalar(4, PolyRat(1)), e4 = PMV::blade(4, 8);
  PMV t = vec4("t1", "t2", "t3"), x = vec4("x1", "x2", "x3"), y = vec4("y1", "y2", "y3");
  PMV expected_inv = id - PMV::blade(4, 9) * s("t1") - PMV::blade(4, 10) * s("t2") - PMV::blade(4, 12) * s("t3");
  r.exact("cinv(1 + t e4)", cinv(id + cmul(t, e4, F), F), expected_inv);
  PMV g = lift4(spin3_symbolic(tab));
  r.exact("g g* = Id in Cl(0,3,1)", cmul(g, star(g, F), F), id);
  r.exact("st1: star(ge(g,-t)) - (g* + g* t e4 / 2)", star(ge(g, -t), F),
          star(g, F) + cmul({star(g, F), t, e4}, F) / PolyRat(2));
  r.exact("st2: ge(g,t)(1 + x e4)star(ge(g,-t)) - (1 + rigid(x) e4)",
          cmul({ge(g, t), id + cmul(x, e4, F), star(ge(g, -t), F)}, F), id + cmul(rigid(x, g, t), e4, F));
  r.exact("distance^2 preserved", PMV::scalar(4, distance_squared(rigid(x, g, t), rigid(y, g, t))),
          PMV::scalar(4, distance_squared(x, y)));
  r.exact("rigid(x, Id, t) = x + t", rigid(x, id, t), x + t);
  PMV h = lift4(spin3_symbolic(tab, "d", "delta", false));
  PMV t2 = vec4("s1", "s2", "s3");
  r.exact("composition of rigid motions", rigid(rigid(x, g, t), h, t2), rigid(x, cmul(h, g, F), rigid(t, h, t2)));
  auto Fr = cl031<Rational>();
  Multivector<Rational> e4r = Multivector<Rational>::blade(4, 8);
  long long bad = 0;
  for (int k = 0; k < samples; ++k) {
    auto rng = stream_rng(o.seed, k);
    auto u = random_multivector<Rational>(4, rng);
    auto ue = cmul(u, e4r, Fr);
    bad += !cmul(ue, ue, Fr).is_zero();
  }
  r.count("random u with (u e4)^2 != 0", bad, 0);
  r.data["samples"] = samples;
  r.data["seed"] = o.seed;
  r.data["ge(g,t)"] = to_json(ge(g, t));
  r.data["rigid(x,g,t)"] = to_json(rigid(x, g, t));
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford algebra scenarios", "cliffordlab"};
  app.set_help_flag("-h,--help", "print the grammar");
  Options o;
  app.add_option("command", o.command)->required();
  app.add_option("subcommand", o.sub);
  app.add_option("--dim", o.dim);
  app.add_option("--n", o.n);
  app.add_option("--input", o.input);
  app.add_option("--signature", o.signature);
  app.add_option("--axis", o.axis);
  app.add_option("--angle", o.angle);
  app.add_option("--vector", o.vector);
  app.add_option("--samples", o.samples);
  app.add_option("--seed", o.seed);
  app.add_option("--jobs", o.jobs);
  app.add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--paper-example", o.pinned);
  app.add_flag("--numeric", o.numeric);
  app.add_flag("--symbolic", o.symbolic);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << kGrammar;
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << kGrammar;
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  try {
    reject((o.numeric || o.symbolic) && o.command != "helmstetter", "--numeric/--symbolic apply to helmstetter only");
    if (o.command == "helmstetter") report = run_helmstetter(o);
    else if (o.command == "hecke") report = run_hecke(o);
    else if (o.command == "svd") report = run_svd(o);
    else if (o.command == "pin3") report = run_pin3(o);
    else if (o.command == "spin3") report = run_spin3(o);
    else if (o.command == "rigid") report = run_rigid(o);
    else throw UsageError("unknown command: " + o.command);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << kGrammar;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  report.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  if (o.format == "text") std::cout << report.to_text();
  else std::cout << report.to_json().dump(2) << "\n";
  std::cerr << "elapsed_ms: " << report.elapsed_ms << "\n";
  return report.pass() ? 0 : 1;
}
