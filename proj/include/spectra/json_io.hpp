#pragma once

// JSON formats:
//   matrix     {"rows":r,"cols":c,"entries":[["1","-1/2"],...]}
//   cochain    {"lo":a,"hi":b,"dims":{"k":n},"diffs":{"k":matrix}}
//   bicomplex  {"support":[p0,p1,q0,q1],"dims":{"p,q":n},"d1":{"p,q":matrix},"d2":{...}}
//   lie spec   {"n":3,"twist_rank":1,"d":{"3":[{"wedge":["1","2"],"coeff":"-1"}]}}
//   product    {"product":[model,model]}
//   model dump {"model":recipe,"n":..,"twist_rank":..,"basis_labels":{..},"base":bicomplex}

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spectra/geomodels.hpp"
#include "spectra/report.hpp"
#include "spectra/spectral.hpp"

namespace spectra::io {

using json = nlohmann::ordered_json;

/// Cap on any single space dimension; SPECTRA_DR_MAX_DIM overrides 4096.
inline std::size_t max_dim() {
  if (const char* env = std::getenv("SPECTRA_DR_MAX_DIM")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

inline void check_dim(std::size_t n, const std::string& where) {
  if (n > max_dim())
    fail(ErrorKind::ValidationError, where + ": dimension " + std::to_string(n) + " exceeds SPECTRA_DR_MAX_DIM=" + std::to_string(max_dim()));
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::ParseError, where + ": missing field '" + key + "'");
  return j.at(key);
}

inline long long as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(ErrorKind::ParseError, where + ": expected an integer");
  return j.get<long long>();
}

inline std::size_t as_count(const json& j, const std::string& where) {
  long long v = as_int(j, where);
  if (v < 0) fail(ErrorKind::ParseError, where + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline Rational as_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (!j.is_string()) fail(ErrorKind::ParseError, where + ": expected a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    fail(ErrorKind::ParseError, where + ": " + e.what());
  }
}

inline std::pair<int, int> parse_key2(const std::string& key, const std::string& where) {
  std::size_t comma = key.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(key);
    std::size_t a = 0, b = 0;
    int p = std::stoi(key.substr(0, comma), &a);
    int q = std::stoi(key.substr(comma + 1), &b);
    if (a != comma || b != key.size() - comma - 1) throw std::invalid_argument(key);
    return {p, q};
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, where + ": bad bidegree key '" + key + "'");
  }
}

inline int parse_key1(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    int k = std::stoi(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
    return k;
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, where + ": bad degree key '" + key + "'");
  }
}

}  // namespace detail

inline json to_json(const RatMatrix& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(format_rational(m(i, j)));
    entries.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline RatMatrix matrix_from_json(const json& j, const std::string& where) {
  const std::size_t rows = detail::as_count(detail::field(j, "rows", where), where + ".rows");
  const std::size_t cols = detail::as_count(detail::field(j, "cols", where), where + ".cols");
  check_dim(rows, where);
  check_dim(cols, where);
  const json& entries = detail::field(j, "entries", where);
  if (!entries.is_array() || entries.size() != rows) fail(ErrorKind::ParseError, where + ": entries must have " + std::to_string(rows) + " rows");
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = entries[i];
    if (!row.is_array() || row.size() != cols)
      fail(ErrorKind::ParseError, where + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(i, c) = detail::as_rational(row[c], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
  }
  return m;
}

inline json to_json(const CochainComplex& k) {
  json dims = json::object(), diffs = json::object();
  for (int d = k.lo(); d <= k.hi(); ++d) {
    dims[std::to_string(d)] = k.dim(d);
    if (d < k.hi()) diffs[std::to_string(d)] = to_json(k.diff(d));
  }
  return {{"lo", k.lo()}, {"hi", k.hi()}, {"dims", std::move(dims)}, {"diffs", std::move(diffs)}};
}

inline CochainComplex cochain_from_json(const json& j) {
  const std::string where = "cochain";
  const int lo = static_cast<int>(detail::as_int(detail::field(j, "lo", where), "cochain.lo"));
  const int hi = static_cast<int>(detail::as_int(detail::field(j, "hi", where), "cochain.hi"));
  if (hi < lo) return CochainComplex::zero();
  std::vector<std::size_t> dims(static_cast<std::size_t>(hi - lo + 1), 0);
  const json& jd = detail::field(j, "dims", where);
  if (!jd.is_object()) fail(ErrorKind::ParseError, "cochain.dims must be an object");
  for (const auto& [key, value] : jd.items()) {
    int d = detail::parse_key1(key, "cochain.dims");
    if (d < lo || d > hi) fail(ErrorKind::ValidationError, "cochain.dims: degree " + key + " outside [lo,hi]");
    dims[static_cast<std::size_t>(d - lo)] = detail::as_count(value, "cochain.dims." + key);
    check_dim(dims[static_cast<std::size_t>(d - lo)], "cochain.dims." + key);
  }
  std::vector<RatMatrix> diffs(dims.size());
  if (j.contains("diffs")) {
    const json& jf = j.at("diffs");
    if (!jf.is_object()) fail(ErrorKind::ParseError, "cochain.diffs must be an object");
    for (const auto& [key, value] : jf.items()) {
      int d = detail::parse_key1(key, "cochain.diffs");
      if (d < lo || d > hi) fail(ErrorKind::ValidationError, "cochain.diffs: degree " + key + " outside [lo,hi]");
      diffs[static_cast<std::size_t>(d - lo)] = matrix_from_json(value, "cochain.diffs." + key);
    }
  }
  return {lo, hi, std::move(dims), std::move(diffs)};
}

inline json to_json(const DoubleComplex& k) {
  const Support& s = k.support();
  json dims = json::object(), d1 = json::object(), d2 = json::object();
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q) {
      const std::string key = bidegree_key(p, q);
      dims[key] = k.dim(p, q);
      if (!k.d1(p, q).is_zero()) d1[key] = to_json(k.d1(p, q));
      if (!k.d2(p, q).is_zero()) d2[key] = to_json(k.d2(p, q));
    }
  return {{"support", {s.p0, s.p1, s.q0, s.q1}}, {"dims", std::move(dims)}, {"d1", std::move(d1)}, {"d2", std::move(d2)}};
}

inline DoubleComplex bicomplex_from_json(const json& j) {
  const std::string where = "bicomplex";
  const json& js = detail::field(j, "support", where);
  if (!js.is_array() || js.size() != 4) fail(ErrorKind::ParseError, "bicomplex.support must be [p0,p1,q0,q1]");
  Support s{static_cast<int>(detail::as_int(js[0], "support[0]")), static_cast<int>(detail::as_int(js[1], "support[1]")),
            static_cast<int>(detail::as_int(js[2], "support[2]")), static_cast<int>(detail::as_int(js[3], "support[3]"))};
  std::map<Bidegree, std::size_t> dims;
  const json& jd = detail::field(j, "dims", where);
  if (!jd.is_object()) fail(ErrorKind::ParseError, "bicomplex.dims must be an object");
  for (const auto& [key, value] : jd.items()) {
    auto pq = detail::parse_key2(key, "bicomplex.dims");
    dims[pq] = detail::as_count(value, "bicomplex.dims." + key);
    check_dim(dims[pq], "bicomplex.dims." + key);
  }
  DoubleComplex k(s, dims);
  for (const char* name : {"d1", "d2"}) {
    if (!j.contains(name)) continue;
    const json& jm = j.at(name);
    if (!jm.is_object()) fail(ErrorKind::ParseError, std::string("bicomplex.") + name + " must be an object");
    for (const auto& [key, value] : jm.items()) {
      auto [p, q] = detail::parse_key2(key, std::string("bicomplex.") + name);
      RatMatrix m = matrix_from_json(value, std::string("bicomplex.") + name + "." + key);
      if (!s.contains(p, q)) fail(ErrorKind::ValidationError, std::string(name) + " given outside the support at (" + key + ")");
      if (name[1] == '1')
        k.set_d1(p, q, std::move(m));
      else
        k.set_d2(p, q, std::move(m));
    }
  }
  k.validate();
  return k;
}

inline json to_json(const SpectralPage& page) {
  json terms = json::object(), ranks = json::object();
  for (const auto& [pq, t] : page.terms) {
    terms[bidegree_key(pq.first, pq.second)] = t.dim();
    ranks[bidegree_key(pq.first, pq.second)] = page.diff_rank(pq.first, pq.second);
  }
  return {{"r", page.r}, {"terms", std::move(terms)}, {"d_r_ranks", std::move(ranks)}};
}

inline json to_json(const Report& r) {
  json records = json::array();
  for (const auto& rec : r.records)
    records.push_back({{"check", rec.check}, {"degree", rec.degree}, {"lhs", rec.lhs}, {"rhs", rec.rhs}, {"pass", rec.pass}});
  return {{"name", r.name}, {"pass", r.pass()}, {"records", std::move(records)}};
}

inline json to_json(const LieModelSpec& spec) {
  json d = json::object();
  for (const auto& [i, terms] : spec.d) {
    json list = json::array();
    for (const auto& t : terms) list.push_back({{"wedge", {t.left, t.right}}, {"coeff", format_rational(t.coeff)}});
    d[std::to_string(i)] = std::move(list);
  }
  return {{"n", spec.n}, {"twist_rank", spec.twist_rank}, {"d", std::move(d)}};
}

inline LieModelSpec lie_spec_from_json(const json& j) {
  const std::string where = "lie spec";
  LieModelSpec spec;
  spec.n = static_cast<int>(detail::as_int(detail::field(j, "n", where), "n"));
  if (spec.n < 0) fail(ErrorKind::ValidationError, "n must be nonnegative");
  if (j.contains("twist_rank")) spec.twist_rank = detail::as_count(j.at("twist_rank"), "twist_rank");
  if (spec.twist_rank < 1) fail(ErrorKind::ValidationError, "twist_rank must be positive");
  // 4^n monomials per copy.
  if (spec.n > 15 || (std::size_t{1} << (2 * spec.n)) * spec.twist_rank > 64 * max_dim())
    fail(ErrorKind::ValidationError, "model is too large for SPECTRA_DR_MAX_DIM");
  if (j.contains("d")) {
    const json& jd = j.at("d");
    if (!jd.is_object()) fail(ErrorKind::ParseError, "d must be an object");
    for (const auto& [key, value] : jd.items()) {
      const int i = detail::parse_key1(key, "d");
      if (!value.is_array()) fail(ErrorKind::ParseError, "d." + key + " must be an array");
      for (std::size_t t = 0; t < value.size(); ++t) {
        const std::string at = "d." + key + "[" + std::to_string(t) + "]";
        const json& w = detail::field(value[t], "wedge", at);
        if (!w.is_array() || w.size() != 2 || !w[0].is_string() || !w[1].is_string())
          fail(ErrorKind::ParseError, at + ".wedge must be two generator labels");
        spec.d[i].push_back({w[0].get<std::string>(), w[1].get<std::string>(), detail::as_rational(detail::field(value[t], "coeff", at), at + ".coeff")});
      }
    }
  }
  return spec;
}

inline json to_json(const ModelRecipe& r) {
  if (r.lie) return to_json(*r.lie);
  json factors = json::array();
  for (const auto& f : r.factors) factors.push_back(to_json(f));
  return {{"product", std::move(factors)}};
}

inline ModelRecipe recipe_from_json(const json& j) {
  ModelRecipe r;
  if (j.is_object() && j.contains("product")) {
    const json& f = j.at("product");
    if (!f.is_array() || f.size() != 2) fail(ErrorKind::ParseError, "product must list exactly two models");
    r.factors = {recipe_from_json(f[0]), recipe_from_json(f[1])};
    return r;
  }
  r.lie = lie_spec_from_json(j);
  return r;
}

inline ModelDoubleComplex build(const ModelRecipe& r) {
  if (r.lie) return lie_model(*r.lie);
  if (r.factors.size() != 2) fail(ErrorKind::ValidationError, "product recipe needs two factors");
  return product_model(build(r.factors[0]), build(r.factors[1]));
}

inline json to_json(const ModelDoubleComplex& m) {
  json labels = json::object();
  for (const auto& [pq, list] : m.basis_labels) labels[bidegree_key(pq.first, pq.second)] = list;
  return {{"model", to_json(m.recipe)},
          {"n", m.n},
          {"twist_rank", m.twist_rank},
          {"basis_labels", std::move(labels)},
          {"base", to_json(m.base)}};
}

/// Accepts a Lie spec, a product recipe, or a model dump; a dump is rebuilt
/// from its recipe and must match its stored base.
inline ModelDoubleComplex model_from_json(const json& j) {
  if (j.is_object() && j.contains("model")) {
    ModelDoubleComplex m = build(recipe_from_json(j.at("model")));
    if (j.contains("base") && !(bicomplex_from_json(j.at("base")) == m.base))
      fail(ErrorKind::ValidationError, "model dump: stored base does not match the rebuilt model");
    return m;
  }
  return build(recipe_from_json(j));
}

inline json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, source + ": " + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

}  // namespace spectra::io
