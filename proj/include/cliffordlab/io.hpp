#pragma once

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cliffordlab/algebra.hpp"
#include "cliffordlab/scalar.hpp"

namespace cliffordlab {

using json = nlohmann::json;

// ---- scalars ---------------------------------------------------------------------------

template <class S>
S parse_scalar(const std::string& text, const TablePtr& tab = nullptr);

template <>
inline Rational parse_scalar<Rational>(const std::string& text, const TablePtr&) {
  return Rational::parse(text);
}

template <>
inline Float parse_scalar<Float>(const std::string& text, const TablePtr&) {
  if (text.find('/') != std::string::npos) return Float(Rational::parse(text).to_double());
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  while (b < e && *b == ' ') ++b;
  if (b < e && *b == '+') ++b;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) throw ParseError("bad number: " + text);
  return Float(v);
}

template <>
inline PolyRat parse_scalar<PolyRat>(const std::string& text, const TablePtr& tab) {
  return parse_polyrat(text, tab);
}

// Accepts either a JSON string or a JSON number.
template <class S>
S scalar_from_json(const json& j, const TablePtr& tab = nullptr) {
  if (j.is_string()) return parse_scalar<S>(j.get<std::string>(), tab);
  if (j.is_number_integer()) return parse_scalar<S>(std::to_string(j.get<long long>()), tab);
  if (j.is_number()) {
    if constexpr (std::is_same_v<S, Float>) return Float(j.get<double>());
    else throw ParseError("non-integer number for an exact ring; use a fraction string");
  }
  throw ParseError("scalar must be a string or a number");
}

inline std::string double_string(double v) { return Float(v).to_string(); }

// ---- multivectors, matrices, forms ------------------------------------------------------

inline json blade_to_json(Blade b) {
  json a = json::array();
  for (int i = 0; b; ++i, b >>= 1)
    if (b & 1u) a.push_back(i + 1);
  return a;
}

template <class S>
json to_json(const Multivector<S>& u) {
  json terms = json::array();
  for (const auto& [b, c] : u.terms()) terms.push_back({{"blade", blade_to_json(b)}, {"coeff", to_string(c)}});
  return {{"dim", u.dim()}, {"terms", terms}};
}

template <class S>
Multivector<S> multivector_from_json(const json& j, const TablePtr& tab = nullptr) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("terms")) throw ParseError("multivector needs dim and terms");
  const int n = j.at("dim").get<int>();
  if (n < 0 || n > 30) throw ParseError("dimension out of range");
  Multivector<S> u(n);
  for (const auto& t : j.at("terms")) {
    std::vector<int> idx = t.at("blade").get<std::vector<int>>();
    Blade b = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 1 || idx[k] > n) throw ParseError("blade index out of range");
      if (k && idx[k] <= idx[k - 1]) throw ParseError("blade indices must be increasing");
      b |= Blade(1) << (idx[k] - 1);
    }
    u.add_term(b, scalar_from_json<S>(t.at("coeff"), tab));
  }
  return u;
}

template <class S>
json matrix_to_json(const Matrix<S>& m) {
  json rows = json::array();
  for (const auto& r : m) {
    json row = json::array();
    for (const auto& x : r) row.push_back(to_string(x));
    rows.push_back(row);
  }
  return {{"rows", m.size()}, {"cols", m.empty() ? 0 : m[0].size()}, {"entries", rows}};
}

template <class S>
Matrix<S> matrix_from_json(const json& j, const TablePtr& tab = nullptr) {
  if (!j.is_object() || !j.contains("entries")) throw ParseError("matrix needs entries");
  Matrix<S> m;
  for (const auto& r : j.at("entries")) {
    std::vector<S> row;
    for (const auto& x : r) row.push_back(scalar_from_json<S>(x, tab));
    m.push_back(std::move(row));
  }
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (const auto& r : m)
    if (r.size() != cols) throw ParseError("ragged matrix");
  if (j.contains("rows") && j.at("rows").get<std::size_t>() != rows) throw ParseError("rows does not match entries");
  if (j.contains("cols") && j.at("cols").get<std::size_t>() != cols) throw ParseError("cols does not match entries");
  return m;
}

template <class S>
json form_to_json(const BilinearForm<S>& f) {
  return {{"dim", f.dim()}, {"entries", matrix_to_json(f.B())["entries"]}};
}

template <class S>
BilinearForm<S> form_from_json(const json& j, const TablePtr& tab = nullptr) {
  Matrix<S> m = matrix_from_json<S>(json{{"entries", j.at("entries")}}, tab);
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != m.size()) throw ParseError("dim does not match entries");
  return BilinearForm<S>(m);
}

// ---- run reports -------------------------------------------------------------------------

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass() const { return std::isfinite(residual) && residual <= tolerance; }
};

struct RunReport {
  std::string command;
  std::vector<Check> checks;
  json data = json::object();
  long long elapsed_ms = 0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }

  // Exact comparison: residual counts the nonzero terms of lhs − rhs.
  template <class S>
  void exact(const std::string& name, const Multivector<S>& actual, const Multivector<S>& expected) {
    auto d = actual - expected;
    checks.push_back({name, expected.to_string(), actual.to_string(), static_cast<double>(d.terms().size()), 0.0});
  }
  void flag(const std::string& name, bool ok, const std::string& expected = "true") {
    checks.push_back({name, expected, ok ? expected : "false", ok ? 0.0 : 1.0, 0.0});
  }
  void count(const std::string& name, long long actual, long long expected) {
    checks.push_back({name, std::to_string(expected), std::to_string(actual),
                      static_cast<double>(actual > expected ? actual - expected : expected - actual), 0.0});
  }
  void numeric(const std::string& name, double residual, double tol, const std::string& expected = "0",
               const std::string& actual = "") {
    checks.push_back({name, expected, actual.empty() ? double_string(residual) : actual, residual, tol});
  }

  // Deterministic JSON; elapsed time is reported separately by the caller.
  json to_json() const {
    json cs = json::array();
    for (const auto& c : checks)
      cs.push_back({{"name", c.name},
                    {"expected", c.expected},
                    {"actual", c.actual},
                    {"residual", c.residual},
                    {"tolerance", c.tolerance},
                    {"pass", c.pass()}});
    return {{"command", command}, {"status", pass() ? "pass" : "fail"}, {"checks", cs}, {"data", data}};
  }

  std::string to_text() const {
    std::ostringstream o;
    o << "command: " << command << "\nstatus: " << (pass() ? "pass" : "fail") << "\nchecks:\n";
    for (const auto& c : checks) {
      o << "  [" << (c.pass() ? "PASS" : "FAIL") << "] " << c.name << "\n";
      o << "      expected: " << c.expected << "\n      actual:   " << c.actual << "\n";
      if (c.tolerance > 0 || c.residual != 0) o << "      residual: " << double_string(c.residual) << " (tol " << double_string(c.tolerance) << ")\n";
    }
    if (!data.empty()) {
      o << "data:\n";
      render(o, data, 1);
    }
    return o.str();
  }

 private:
  static bool looks_like_multivector(const json& j) {
    return j.is_object() && j.size() == 2 && j.contains("dim") && j.contains("terms");
  }
  static std::string display(const json& mv) {
    std::string s;
    for (const auto& t : mv.at("terms")) {
      std::string blade = "Id";
      if (!t.at("blade").empty()) {
        blade = "e";
        for (int i : t.at("blade")) blade += std::to_string(i);
      }
      std::string c = t.at("coeff").get<std::string>();
      std::string term = c == "1" ? blade : c == "-1" ? "-" + blade : "(" + c + ")*" + blade;
      if (!s.empty() && term[0] != '-') s += "+";
      s += term;
    }
    return s.empty() ? "0" : s;
  }
  static void render(std::ostringstream& o, const json& j, int depth) {
    const std::string pad(2 * depth, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
      const json& v = it.value();
      std::string key = j.is_object() ? it.key() : "-";
      if (looks_like_multivector(v)) o << pad << key << ": " << display(v) << "\n";
      else if (v.is_structured() && !v.empty() && !(v.is_array() && !v[0].is_structured())) {
        o << pad << key << ":\n";
        render(o, v, depth + 1);
      } else o << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
};

}  // namespace cliffordlab
