// spectra_dr: command-line front end for the spectra headers.
// Exit status: 0 success, 1 failed verification, 2 invalid input.

#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectra/json_io.hpp"
#include "spectra/verify.hpp"

namespace {

using namespace spectra;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

enum class Format { text, json, csv };

struct Config {
  Format format = Format::text;
  std::string model, input;
  std::optional<int> s, t, k, r;
  int pages = 1;
  bool emit = false;
  std::string suite = "all";
  std::uint64_t seed = 0;
  int count = 100;
  std::string x, y, spec_path, degrees;
  int c = 0, n = 1;
  std::size_t rank = 1;
  bool verbose = false;
};

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

/// Builtin model names: point, iwasawa, torusN.
std::optional<ModelDoubleComplex> builtin_model(const std::string& name) {
  if (name == "point") return point_model();
  if (name == "iwasawa") return lie_model(iwasawa_spec());
  std::smatch m;
  static const std::regex torus("torus([0-9]+)");
  if (std::regex_match(name, m, torus)) return torus_model(std::stoi(m[1].str()));
  return std::nullopt;
}

/// A file path (Lie spec, product recipe or model dump) or a builtin name.
ModelDoubleComplex load_model(const std::string& source) {
  if (!std::filesystem::exists(source))
    if (auto b = builtin_model(source)) return *b;
  return io::model_from_json(io::read_file(source));
}

/// Bicomplex from --input, or the base of --model.
DoubleComplex load_bicomplex(const Config& cfg) {
  if (!cfg.input.empty()) {
    json j = io::read_file(cfg.input);
    if (j.is_object() && j.contains("support")) return io::bicomplex_from_json(j);
    return load_model(cfg.input).base;
  }
  if (!cfg.model.empty()) return load_model(cfg.model).base;
  fail(ErrorKind::ValidationError, "one of --input or --model is required");
}

TruncationSpec window_of(const Config& cfg, const DoubleComplex& k) {
  const Support& s = k.support();
  return {cfg.s.value_or(s.p0), cfg.t.value_or(s.p1)};
}

std::string window_name(TruncationSpec w) { return "[" + std::to_string(w.s) + "," + std::to_string(w.t) + "]"; }

int run_cohomology(const Config& cfg) {
  if (!cfg.input.empty()) {
    json j = io::read_file(cfg.input);
    if (j.is_object() && j.contains("lo")) {
      CochainComplex c = io::cochain_from_json(j);
      if (cfg.emit) {
        print_json(io::to_json(c));
        return kExitOk;
      }
      json out = json::object();
      for (int deg = c.lo(); deg <= c.hi(); ++deg) out[std::to_string(deg)] = cohomology_dim(c, deg);
      if (cfg.format == Format::json) {
        print_json({{"cohomology", out}});
      } else {
        if (cfg.format == Format::csv) std::cout << "k,dim\n";
        for (const auto& [deg, d] : out.items())
          std::cout << (cfg.format == Format::csv ? deg + "," : "H^" + deg + " = ") << d.get<std::size_t>() << "\n";
      }
      return kExitOk;
    }
  }
  DoubleComplex k = load_bicomplex(cfg);
  if (cfg.emit) {
    print_json(io::to_json(k));
    return kExitOk;
  }
  CochainComplex t = total(k);
  json totals = json::object(), rows = json::object();
  for (int deg = k.min_total_degree(); deg <= k.max_total_degree(); ++deg) totals[std::to_string(deg)] = cohomology_dim(t, deg);
  const Support& s = k.support();
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q) rows[bidegree_key(p, q)] = cohomology_dim(row(k, p), q);
  if (cfg.format == Format::json) {
    print_json({{"total", totals}, {"row_cohomology", rows}});
  } else if (cfg.format == Format::csv) {
    std::cout << "k,dim\n";
    for (const auto& [deg, d] : totals.items()) std::cout << deg << "," << d.get<std::size_t>() << "\n";
  } else {
    for (const auto& [deg, d] : totals.items()) std::cout << "H^" << deg << "(total) = " << d.get<std::size_t>() << "\n";
    for (const auto& [pq, d] : rows.items()) std::cout << "H_row^(" << pq << ") = " << d.get<std::size_t>() << "\n";
  }
  return kExitOk;
}

int run_spectral(const Config& cfg) {
  if (cfg.pages < 1) fail(ErrorKind::ValidationError, "--pages must be at least 1");
  DoubleComplex k = load_bicomplex(cfg);
  FilteredTotal ft(k);
  json pages = json::array();
  for (int r = 1; r <= cfg.pages; ++r) pages.push_back(io::to_json(page(ft, r)));
  if (cfg.format == Format::json) {
    print_json({{"pages", pages}, {"degenerates_at_E1", degenerates_at_E1(k)}});
    return kExitOk;
  }
  if (cfg.format == Format::csv) std::cout << "r,p,q,dim,d_r_rank\n";
  for (const auto& pg : pages) {
    const int r = pg["r"].get<int>();
    if (cfg.format == Format::text) std::cout << "E_" << r << ":\n";
    for (const auto& [pq, d] : pg["terms"].items()) {
      const std::size_t rk = pg["d_r_ranks"][pq].get<std::size_t>();
      if (cfg.format == Format::csv) {
        std::cout << r << "," << pq << "," << d.get<std::size_t>() << "," << rk << "\n";
      } else {
        std::cout << "  (" << pq << ") dim " << d.get<std::size_t>() << ", rank d_" << r << " " << rk << "\n";
      }
    }
  }
  if (cfg.format == Format::text) std::cout << "degenerates at E_1: " << (degenerates_at_E1(k) ? "yes" : "no") << "\n";
  return kExitOk;
}

int run_truncate(const Config& cfg) {
  DoubleComplex k = load_bicomplex(cfg);
  const Support& sup = k.support();
  if (cfg.s && cfg.t && cfg.k) {
    TruncationSpec w{*cfg.s, *cfg.t};
    if (w.s > w.t) fail(ErrorKind::ValidationError, "window needs s <= t");
    const std::size_t b = hypercohomology(k, w, *cfg.k);
    if (cfg.format == Format::json)
      print_json({{"s", w.s}, {"t", w.t}, {"k", *cfg.k}, {"b", b}});
    else if (cfg.format == Format::csv)
      std::cout << "s,t,k,b\n" << w.s << "," << w.t << "," << *cfg.k << "," << b << "\n";
    else
      std::cout << "b^" << *cfg.k << window_name(w) << " = " << b << "\n";
    return kExitOk;
  }
  // Table: rows k, columns windows 0 <= s <= t <= n unless s or t is fixed.
  const int lo = std::max(0, sup.p0), hi = sup.p1;
  std::vector<TruncationSpec> windows;
  for (int s = lo; s <= hi; ++s)
    for (int t = s; t <= hi; ++t)
      if ((!cfg.s || *cfg.s == s) && (!cfg.t || *cfg.t == t)) windows.push_back({s, t});
  if (cfg.s && cfg.t && windows.empty()) windows.push_back({*cfg.s, *cfg.t});
  std::vector<int> degrees;
  if (cfg.k)
    degrees.push_back(*cfg.k);
  else
    for (int d = k.min_total_degree(); d <= k.max_total_degree(); ++d) degrees.push_back(d);
  std::vector<std::vector<std::size_t>> table(degrees.size(), std::vector<std::size_t>(windows.size()));
  for (std::size_t j = 0; j < windows.size(); ++j) {
    CochainComplex t = total(truncate(k, windows[j]));
    for (std::size_t i = 0; i < degrees.size(); ++i) table[i][j] = cohomology_dim(t, degrees[i]);
  }
  if (cfg.format == Format::json) {
    json jw = json::array(), rows = json::array();
    for (auto w : windows) jw.push_back({w.s, w.t});
    for (std::size_t i = 0; i < degrees.size(); ++i) rows.push_back({{"k", degrees[i]}, {"b", table[i]}});
    print_json({{"windows", jw}, {"rows", rows}});
    return kExitOk;
  }
  const char* sep = cfg.format == Format::csv ? "," : "\t";
  std::cout << "k";
  for (auto w : windows) std::cout << sep << (cfg.format == Format::csv ? "\"" + window_name(w) + "\"" : window_name(w));
  std::cout << "\n";
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    std::cout << degrees[i];
    for (std::size_t v : table[i]) std::cout << sep << v;
    std::cout << "\n";
  }
  return kExitOk;
}

int run_hodge(const Config& cfg) {
  DoubleComplex k = load_bicomplex(cfg);
  const Support& s = k.support();
  TruncationSpec w = window_of(cfg, k);
  json h = json::object(), b = json::object(), filt = json::object();
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q) h[bidegree_key(p, q)] = cohomology_dim(row(k, p), q);
  CochainComplex t = total(k);
  for (int deg = k.min_total_degree(); deg <= k.max_total_degree(); ++deg) {
    if (cfg.k && *cfg.k != deg) continue;
    b[std::to_string(deg)] = cohomology_dim(t, deg);
    filt[std::to_string(deg)] = hodge_filtration_dims(k, deg);
  }
  FrolicherReport fr = frolicher_inequality(k, w);
  json frol = json::array();
  for (const auto& rec : fr.report.records) frol.push_back({{"k", std::stoi(rec.degree)}, {"b", rec.lhs}, {"hodge_sum", rec.rhs}});
  const bool degenerate = degenerates_at_E1(truncate(k, w));
  if (cfg.format == Format::json) {
    print_json({{"hodge_numbers", h},
                {"betti_numbers", b},
                {"hodge_filtration", filt},
                {"window", {w.s, w.t}},
                {"frolicher", frol},
                {"degenerates_at_E1", degenerate}});
    return kExitOk;
  }
  if (cfg.format == Format::csv) {
    std::cout << "p,q,h\n";
    for (const auto& [pq, d] : h.items()) std::cout << pq << "," << d.get<std::size_t>() << "\n";
    return kExitOk;
  }
  for (const auto& [pq, d] : h.items()) std::cout << "h^(" << pq << ") = " << d.get<std::size_t>() << "\n";
  for (const auto& [deg, d] : b.items()) std::cout << "b^" << deg << " = " << d.get<std::size_t>() << "\n";
  for (const auto& [deg, f] : filt.items()) {
    std::cout << "F^p H^" << deg << " dims:";
    for (const auto& v : f) std::cout << " " << v.get<std::size_t>();
    std::cout << "\n";
  }
  for (const auto& rec : fr.report.records)
    std::cout << "window " << window_name(w) << ": b^" << rec.degree << " = " << rec.lhs << " <= " << rec.rhs << "\n";
  std::cout << "window " << window_name(w) << " degenerates at E_1: " << (degenerate ? "yes" : "no") << "\n";
  return kExitOk;
}

int run_verify(const Config& cfg) {
  Report report = run_suite(cfg.suite, {cfg.seed, cfg.count});
  std::size_t failed = 0;
  for (const auto& r : report.records) failed += r.pass ? 0 : 1;
  if (cfg.format == Format::json) {
    json j = io::to_json(report);
    j["seed"] = cfg.seed;
    j["count"] = cfg.count;
    print_json(j);
  } else if (cfg.format == Format::csv) {
    std::cout << "check,degree,lhs,rhs,pass\n";
    for (const auto& r : report.records)
      std::cout << "\"" << r.check << "\"," << r.degree << "," << r.lhs << "," << r.rhs << "," << (r.pass ? 1 : 0) << "\n";
  } else {
    for (const auto& r : report.records)
      if (!r.pass || cfg.verbose)
        std::cout << (r.pass ? "ok   " : "FAIL ") << r.check << " @ " << r.degree << ": " << r.lhs << " vs " << r.rhs << "\n";
    std::cout << "suite " << report.name << " seed " << cfg.seed << " count " << cfg.count << ": " << report.records.size()
              << " checks, " << failed << " failed\n";
  }
  return failed == 0 ? kExitOk : kExitFailed;
}

std::vector<Bidegree> parse_degrees(const std::string& text) {
  // "u,v;u,v;..."
  std::vector<Bidegree> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    out.push_back(io::detail::parse_key2(item, "--degrees"));
  }
  if (out.empty()) fail(ErrorKind::ValidationError, "--degrees must list at least one bidegree");
  return out;
}

int emit_prediction(const Config& cfg, const std::string& name, TruncationSpec w, int k, std::size_t value) {
  if (cfg.format == Format::json)
    print_json({{"predictor", name}, {"s", w.s}, {"t", w.t}, {"k", k}, {"value", value}});
  else if (cfg.format == Format::csv)
    std::cout << "predictor,s,t,k,value\n" << name << "," << w.s << "," << w.t << "," << k << "," << value << "\n";
  else
    std::cout << name << " b^" << k << window_name(w) << " = " << value << "\n";
  return kExitOk;
}

TruncationSpec required_window(const Config& cfg) {
  if (!cfg.s || !cfg.t) fail(ErrorKind::ValidationError, "--s and --t are required");
  if (*cfg.s > *cfg.t) fail(ErrorKind::ValidationError, "window needs s <= t");
  return {*cfg.s, *cfg.t};
}

int required_k(const Config& cfg) {
  if (!cfg.k) fail(ErrorKind::ValidationError, "--k is required");
  return *cfg.k;
}

int required_r(const Config& cfg) {
  if (!cfg.r) fail(ErrorKind::ValidationError, "--r is required");
  return *cfg.r;
}

int run_predict(const std::string& which, const Config& cfg) {
  if (cfg.x.empty()) fail(ErrorKind::ValidationError, "--x is required");
  ModelDoubleComplex x = load_model(cfg.x);
  const TruncationSpec w = required_window(cfg);
  if (which == "kunneth") {
    if (cfg.y.empty()) fail(ErrorKind::ValidationError, "--y is required");
    return emit_prediction(cfg, which, w, cfg.c, kunneth_predict(x, load_model(cfg.y), cfg.c, w));
  }
  const int k = required_k(cfg);
  if (which == "leray-hirsch") return emit_prediction(cfg, which, w, k, leray_hirsch_predict(x, parse_degrees(cfg.degrees), k, w));
  if (which == "projective") return emit_prediction(cfg, which, w, k, projective_bundle_predict(x, required_r(cfg), k, w));
  if (cfg.y.empty()) fail(ErrorKind::ValidationError, "--y is required");
  ModelDoubleComplex y = load_model(cfg.y);
  const int r = required_r(cfg);
  if (!blowup_dimensions_consistent(x, y, r))
    std::cerr << "warning: center dimension " << y.n << " plus codimension " << r << " differs from ambient dimension " << x.n << "\n";
  return emit_prediction(cfg, which, w, k, blowup_predict(x, y, r, k, w));
}

int run_model(const std::string& which, const Config& cfg) {
  ModelDoubleComplex m;
  if (which == "torus") {
    if (cfg.n < 0) fail(ErrorKind::ValidationError, "--n must be nonnegative");
    m = cfg.n == 0 ? point_model() : torus_model(cfg.n, cfg.rank);
  } else if (which == "lie") {
    if (cfg.spec_path.empty()) fail(ErrorKind::ValidationError, "--spec is required");
    m = lie_model(io::lie_spec_from_json(io::read_file(cfg.spec_path)));
  } else {
    if (cfg.x.empty() || cfg.y.empty()) fail(ErrorKind::ValidationError, "--x and --y are required");
    m = product_model(load_model(cfg.x), load_model(cfg.y));
  }
  print_json(io::to_json(m));
  return kExitOk;
}

void add_model_options(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--model", cfg.model, "model JSON (Lie spec, product recipe or dump) or builtin: point, iwasawa, torusN");
  cmd->add_option("--input", cfg.input, "bicomplex or cochain JSON");
}

void add_window_options(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--s", cfg.s, "window start column");
  cmd->add_option("--t", cfg.t, "window end column");
  cmd->add_option("--k", cfg.k, "total degree");
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Exact spectral sequences, truncations and model computations"};
  app.require_subcommand(1);
  // Subcommands inherit this, so --format is accepted after the subcommand too.
  app.fallthrough();
  std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}};
  app.add_option("--format", cfg.format, "output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* cohomology = app.add_subcommand("cohomology", "cohomology of a cochain complex or total complex");
  add_model_options(cohomology, cfg);
  cohomology->add_flag("--emit", cfg.emit, "re-emit the parsed complex as JSON");

  auto* spectral = app.add_subcommand("spectral", "pages of the column-filtration spectral sequence");
  add_model_options(spectral, cfg);
  spectral->add_option("--pages", cfg.pages, "number of pages")->check(CLI::PositiveNumber);

  auto* trunc = app.add_subcommand("truncate", "hypercohomology of column truncations");
  add_model_options(trunc, cfg);
  add_window_options(trunc, cfg);

  auto* hodge = app.add_subcommand("hodge", "Hodge and Betti numbers, Hodge filtration, Frolicher inequality");
  add_model_options(hodge, cfg);
  add_window_options(hodge, cfg);

  auto* verify = app.add_subcommand("verify", "seeded property suites");
  verify->add_option("--suite", cfg.suite, "suite name")
      ->check(CLI::IsMember({"cochain", "bicomplex", "tensor", "spectral", "truncation", "models", "all"}));
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--count", cfg.count, "trials per suite")->check(CLI::NonNegativeNumber);
  verify->add_flag("--verbose", cfg.verbose, "print passing checks too");

  auto* predict = app.add_subcommand("predict", "predicted hypercohomology of product, bundle and blowup spaces");
  predict->require_subcommand(1);
  std::string predict_kind;
  for (const char* name : {"kunneth", "leray-hirsch", "projective", "blowup"}) {
    auto* sub = predict->add_subcommand(name);
    sub->add_option("--x", cfg.x, "model of X (or ambient space)");
    add_window_options(sub, cfg);
    sub->final_callback([&predict_kind, name] { predict_kind = name; });
  }
  predict->get_subcommand("kunneth")->add_option("--y", cfg.y, "model of Y");
  predict->get_subcommand("kunneth")->add_option("--c", cfg.c, "total degree of the product");
  predict->get_subcommand("leray-hirsch")->add_option("--degrees", cfg.degrees, "fibre class bidegrees as \"u,v;u,v\"");
  predict->get_subcommand("projective")->add_option("--r", cfg.r, "bundle rank");
  predict->get_subcommand("blowup")->add_option("--y", cfg.y, "model of the center");
  predict->get_subcommand("blowup")->add_option("--r", cfg.r, "codimension of the center");

  auto* model = app.add_subcommand("model", "build and dump a model double complex");
  model->require_subcommand(1);
  std::string model_kind;
  auto* torus = model->add_subcommand("torus");
  torus->add_option("--n", cfg.n, "complex dimension");
  torus->add_option("--rank", cfg.rank, "rank of the trivial local system")->check(CLI::PositiveNumber);
  model->add_subcommand("lie")->add_option("--spec", cfg.spec_path, "Lie model spec JSON")->required();
  auto* product = model->add_subcommand("product");
  product->add_option("--x", cfg.x)->required();
  product->add_option("--y", cfg.y)->required();
  for (auto* sub : model->get_subcommands({}))
    sub->final_callback([&model_kind, sub] { model_kind = sub->get_name(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*cohomology) return run_cohomology(cfg);
    if (*spectral) return run_spectral(cfg);
    if (*trunc) return run_truncate(cfg);
    if (*hodge) return run_hodge(cfg);
    if (*verify) return run_verify(cfg);
    if (*predict) return run_predict(predict_kind, cfg);
    if (*model) return run_model(model_kind, cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::WitnessFailure ? kExitFailed : kExitInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
