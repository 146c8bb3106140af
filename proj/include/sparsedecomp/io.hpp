#pragma once

// JSON interchange.
//
// SystemFile:   {"vars":[name...], "polynomials":[{"terms":[{"coeff":[re,im],"exponents":[int...]}]}]}
// SolutionFile: {"solutions":[{"point":[[re,im]...],"residual":r}], "count":k,
//                "mixed_volume":m?, "deficiency":d?, "trace":{...}?}
//
// Doubles are written in shortest round-trip form, so reading back is bit-exact.

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/polynomial.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sparsedecomp {

// Malformed JSON or a document that does not match the schema.
struct FormatError : Error {
  using Error::Error;
};

using Json = nlohmann::json;

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json system_to_json(const SparseSystem& system) {
  Json polys = Json::array();
  for (const auto& p : system.polynomials()) {
    Json terms = Json::array();
    for (const auto& t : p.terms()) terms.push_back({{"coeff", complex_to_json(t.coeff)}, {"exponents", t.exponent}});
    polys.push_back({{"terms", std::move(terms)}});
  }
  return {{"vars", system.variables()}, {"polynomials", std::move(polys)}};
}

inline SparseSystem system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("polynomials"))
    throw FormatError("system file needs \"vars\" and \"polynomials\"");
  const Json& vars = j["vars"];
  const Json& polys = j["polynomials"];
  if (!vars.is_array() || !polys.is_array()) throw FormatError("\"vars\" and \"polynomials\" must be arrays");
  std::vector<std::string> names;
  for (const auto& v : vars) {
    if (!v.is_string()) throw FormatError("variable names must be strings");
    names.push_back(v.get<std::string>());
  }
  const std::size_t n = names.size();
  if (n == 0) throw FormatError("system has no variables");
  if (polys.size() != n)
    throw FormatError("system is not square: " + std::to_string(polys.size()) + " polynomials in " +
                      std::to_string(n) + " variables");
  std::vector<SparsePolynomial> out;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const std::string where = "polynomial " + std::to_string(i);
    if (!polys[i].is_object() || !polys[i].contains("terms") || !polys[i]["terms"].is_array())
      throw FormatError(where + ": expected {\"terms\": [...]}");
    std::vector<Term> terms;
    for (const auto& t : polys[i]["terms"]) {
      if (!t.is_object() || !t.contains("coeff") || !t.contains("exponents"))
        throw FormatError(where + ": term needs \"coeff\" and \"exponents\"");
      const Json& e = t["exponents"];
      if (!e.is_array() || e.size() != n) throw FormatError(where + ": exponent vector must have length " + std::to_string(n));
      Exponent exp;
      for (const auto& k : e) {
        if (!k.is_number_integer()) throw FormatError(where + ": exponents must be integers");
        exp.push_back(k.get<std::int64_t>());
      }
      terms.push_back({complex_from_json(t["coeff"], where), std::move(exp)});
    }
    SparsePolynomial p(n, terms);
    if (p.empty()) throw FormatError(where + " has no nonzero terms");
    out.push_back(std::move(p));
  }
  return SparseSystem(std::move(out), std::move(names));
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

inline Json point_to_json(const Point& x) {
  Json p = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) p.push_back(complex_to_json(x[i]));
  return p;
}

struct SolutionEntry {
  Point point;
  double residual = 0.0;
};

struct SolutionFile {
  std::vector<SolutionEntry> solutions;
  std::optional<std::int64_t> mixed_volume;
  std::optional<std::int64_t> deficiency;
};

inline Json solution_file_to_json(const SolutionFile& file) {
  Json sols = Json::array();
  for (const auto& s : file.solutions) sols.push_back({{"point", point_to_json(s.point)}, {"residual", s.residual}});
  Json j = {{"solutions", std::move(sols)}, {"count", file.solutions.size()}};
  if (file.mixed_volume) j["mixed_volume"] = *file.mixed_volume;
  if (file.deficiency) j["deficiency"] = *file.deficiency;
  return j;
}

inline SolutionFile solution_file_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("solutions") || !j["solutions"].is_array())
    throw FormatError("solution file needs a \"solutions\" array");
  SolutionFile file;
  for (const auto& s : j["solutions"]) {
    if (!s.is_object() || !s.contains("point") || !s["point"].is_array())
      throw FormatError("solution entry needs a \"point\" array");
    Point x(static_cast<Eigen::Index>(s["point"].size()));
    for (std::size_t i = 0; i < s["point"].size(); ++i)
      x[static_cast<Eigen::Index>(i)] = complex_from_json(s["point"][i], "solution point");
    double r = 0.0;
    if (s.contains("residual")) {
      if (!s["residual"].is_number()) throw FormatError("residual must be a number");
      r = s["residual"].get<double>();
    }
    file.solutions.push_back({std::move(x), r});
  }
  if (j.contains("count")) {
    if (!j["count"].is_number_integer() || j["count"].get<std::int64_t>() != static_cast<std::int64_t>(file.solutions.size()))
      throw FormatError("\"count\" does not match the number of solutions");
  }
  if (j.contains("mixed_volume")) file.mixed_volume = j["mixed_volume"].get<std::int64_t>();
  if (j.contains("deficiency")) file.deficiency = j["deficiency"].get<std::int64_t>();
  return file;
}

}  // namespace sparsedecomp
