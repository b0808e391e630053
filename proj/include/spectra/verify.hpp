#pragma once

// Seeded property suites. Each trial appends records to one Report; a trial
// that throws is recorded as a failed "exception" record and the suite moves on.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra/geomodels.hpp"
#include "spectra/random.hpp"
#include "spectra/report.hpp"
#include "spectra/spectral.hpp"
#include "spectra/tensorops.hpp"
#include "spectra/truncation.hpp"

namespace spectra {

struct SuiteOptions {
  std::uint64_t seed = 0;
  int count = 100;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"cochain", "bicomplex", "tensor", "spectral", "truncation", "models"};
  return names;
}

namespace detail {

inline void guarded(Report& report, const std::string& trial, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    report.add(std::string("exception: ") + e.what(), trial, 0, 1, false);
  }
}

inline long as_long(std::size_t n) { return static_cast<long>(n); }

/// Same spaces, every differential negated; dualizing twice lands here.
inline CochainComplex negated(const CochainComplex& k) {
  std::vector<std::size_t> dims;
  std::vector<RatMatrix> diffs;
  for (int deg = k.lo(); deg <= k.hi(); ++deg) {
    dims.push_back(k.dim(deg));
    diffs.push_back(Rational(-1) * k.diff(deg));
  }
  return {k.lo(), k.hi(), std::move(dims), std::move(diffs)};
}

inline DoubleComplex negated(const DoubleComplex& k) {
  DoubleComplex out = k;
  const Support& s = k.support();
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q) {
      out.set_d1(p, q, Rational(-1) * k.d1(p, q));
      out.set_d2(p, q, Rational(-1) * k.d2(p, q));
    }
  return out;
}

inline Report cochain_suite(const SuiteOptions& opt) {
  Report report{"cochain", {}};
  Rng rng(opt.seed);
  for (int trial = 0; trial < opt.count; ++trial) {
    const std::string tag = std::to_string(trial);
    CochainComplex k = random_cochain_complex(rng);
    const int m = rng.uniform(-3, 3);
    guarded(report, tag, [&] {
      CochainComplex kd = dual(k), ks = shift(k, m);
      for (int deg = k.lo() - 1; deg <= k.hi() + 1; ++deg) {
        const std::string at = tag + ":" + std::to_string(deg);
        report.add("H^k(dual K) = H^-k(K)", at, as_long(cohomology_dim(kd, -deg)), as_long(cohomology_dim(k, deg)));
        report.add("H^k(K[m]) = H^(k+m)(K)", at, as_long(cohomology_dim(ks, deg - m)), as_long(cohomology_dim(k, deg)));
      }
      report.add("dual(dual K) = K with d negated", tag, dual(kd) == negated(k) ? 1 : 0, 1);
      long alt = 0;
      for (int deg = k.lo(); deg <= k.hi(); ++deg)
        alt += (deg % 2 == 0 ? 1 : -1) * as_long(cohomology_dim(k, deg));
      report.add("Euler characteristic from cohomology", tag, euler_characteristic(k), alt);
    });
  }
  return report;
}

inline Report bicomplex_suite(const SuiteOptions& opt) {
  Report report{"bicomplex", {}};
  Rng rng(opt.seed);
  for (int trial = 0; trial < opt.count; ++trial) {
    const std::string tag = std::to_string(trial);
    DoubleComplex k = random_double_complex(rng);
    guarded(report, tag, [&] {
      k.validate();
      BicomplexWitness w = verify_total_dual_iso(k);
      CochainComplex t = total(k), td = total(dual2(k));
      for (int deg = k.min_total_degree() - 1; deg <= k.max_total_degree() + 1; ++deg) {
        const std::string at = tag + ":" + std::to_string(deg);
        report.add("witness bijective", at, as_long(rank(w.map.mat(-deg))), as_long(td.dim(-deg)));
        report.add("H^k(total dual2) = H^-k(total)", at, as_long(cohomology_dim(td, -deg)), as_long(cohomology_dim(t, deg)));
      }
      report.add("dual2(dual2 K) = K with d1, d2 negated", tag, dual2(dual2(k)) == negated(k) ? 1 : 0, 1);
    });
  }
  return report;
}

inline Report tensor_suite(const SuiteOptions& opt) {
  Report report{"tensor", {}};
  Rng rng(opt.seed);
  for (int trial = 0; trial < opt.count; ++trial) {
    const std::string tag = std::to_string(trial);
    CochainComplex k = random_cochain_complex(rng), l = random_cochain_complex(rng);
    DoubleComplex a = random_double_complex(rng), b = random_double_complex(rng);
    guarded(report, tag, [&] {
      BicomplexMap iso = parity_iso(k, l);
      bool bijective = true;
      for (const auto& [pq, m] : iso.mats()) bijective = bijective && rank(m) == m.rows() && m.rows() == m.cols();
      report.add("parity isomorphism bijective", tag, bijective ? 1 : 0, 1);
      for (int m = 0; m <= 1; ++m) report.append(kunneth_complex_check(k, l, m), tag);
      report.append(verify_slice_identity(a, b), tag);
      DoubleComplex ss = ss_collapse(quad_tensor(a, b));
      if (!ss.support().empty())
        for (int c = ss.support().p0; c <= ss.support().p1; ++c) report.append(verify_row_decomposition(a, b, c), tag);
      report.append(verify_total_of_collapse(a, b), tag);
      report.append(kunneth_double_check(a, b), tag);
    });
  }
  return report;
}

inline Report spectral_suite(const SuiteOptions& opt) {
  Report report{"spectral", {}};
  Rng rng(opt.seed);
  for (int trial = 0; trial < opt.count; ++trial) {
    const std::string tag = std::to_string(trial);
    DoubleComplex k = random_double_complex(rng);
    guarded(report, tag, [&] {
      const Support& s = k.support();
      FilteredTotal ft(k);
      const int width = s.p1 - s.p0;
      std::vector<SpectralPage> pages;
      for (int r = 1; r <= width + 1; ++r) pages.push_back(page(ft, r));
      for (std::size_t i = 0; i + 1 < pages.size(); ++i)
        for (const auto& [pq, t] : pages[i].terms) {
          const long now = as_long(t.dim()), next = as_long(pages[i + 1].dim(pq.first, pq.second));
          // dim E_{r+1} = dim E_r - rank of incoming and outgoing d_r.
          long in = 0;
          auto src = pages[i].diffs.find({pq.first - pages[i].r, pq.second + pages[i].r - 1});
          if (src != pages[i].diffs.end()) in = as_long(rank(src->second));
          const long out = as_long(pages[i].diff_rank(pq.first, pq.second));
          report.add("E_{r+1} = H(E_r, d_r)", tag + ":" + std::to_string(pages[i].r) + ":" + bidegree_key(pq.first, pq.second),
                     next, now - in - out, next <= now && next == now - in - out);
        }
      const SpectralPage inf = limit_page(k);
      const CochainComplex t = total(k);
      for (int deg = k.min_total_degree(); deg <= k.max_total_degree(); ++deg) {
        const std::string at = tag + ":" + std::to_string(deg);
        report.add("sum E_inf = H^k(total)", at, as_long(inf.diagonal_dim(deg)), as_long(cohomology_dim(t, deg)));
        std::vector<std::size_t> f = filtration_dims(k, deg);
        for (std::size_t i = 0; i + 1 < f.size(); ++i) {
          const int p = s.p0 + static_cast<int>(i);
          report.add("F^p/F^(p+1) = E_inf", at + ":" + std::to_string(p), as_long(f[i]) - as_long(f[i + 1]), as_long(inf.dim(p, deg - p)));
        }
      }
    });
  }
  return report;
}

inline Report truncation_suite(const SuiteOptions& opt) {
  Report report{"truncation", {}};
  Rng rng(opt.seed);
  for (int trial = 0; trial < opt.count; ++trial) {
    const std::string tag = std::to_string(trial);
    DoubleComplex k = random_double_complex(rng);
    const Support& sup = k.support();
    std::vector<int> cut(4);
    for (int& c : cut) c = rng.uniform(sup.p0 - 1, sup.p1 + 1);
    std::sort(cut.begin(), cut.end());
    guarded(report, tag, [&] {
      report.append(four_term_check(k, cut[0], cut[1], cut[2], cut[3]), tag);
      // The long exact sequence needs r <= s <= t with a nonempty right window.
      LongExactReport les = les_of_truncations(k, cut[0], cut[1], cut[3]);
      report.append(les.as_report(), tag);
      report.append(frolicher_inequality(k, {cut[0], cut[3]}).report, tag);
    });
  }
  return report;
}

inline Report models_suite(const SuiteOptions& opt) {
  Report report{"models", {}};
  Rng rng(opt.seed);
  const std::vector<std::pair<std::string, ModelDoubleComplex>> models{
      {"torus1", torus_model(1)}, {"torus2", torus_model(2)}, {"torus1x2", torus_model(1, 2)}, {"iwasawa", lie_model(iwasawa_spec())}};
  for (int trial = 0; trial < opt.count; ++trial) {
    const auto& [name, m] = models[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(models.size()) - 1))];
    const int s = rng.uniform(0, m.n), t = rng.uniform(s, m.n);
    const std::string tag = std::to_string(trial) + ":" + name + "[" + std::to_string(s) + "," + std::to_string(t) + "]";
    guarded(report, tag, [&] {
      BicomplexMap dm = duality_map(m, {s, t});
      ChainMap total_dm = total_map(dm);
      for (int k = 0; k <= 2 * m.n; ++k) {
        const std::string at = tag + ":" + std::to_string(k);
        const RatMatrix h = cohomology_map(total_dm, k);
        const long dim_src = as_long(model_hypercohomology(m, {s, t}, k));
        const long dim_tgt = as_long(model_hypercohomology(m, {m.n - t, m.n - s}, 2 * m.n - k));
        report.add("duality dims", at, dim_src, dim_tgt);
        report.add("duality map bijective", at, as_long(rank(h)), dim_src, rank(h) == h.rows() && h.rows() == h.cols() && h.rows() == static_cast<std::size_t>(dim_src));
      }
      report.append(frolicher_inequality(m.base, {s, t}).report, tag);
    });
  }
  return report;
}

}  // namespace detail

inline Report run_suite(const std::string& name, const SuiteOptions& opt = {}) {
  if (opt.count < 0) fail(ErrorKind::ValidationError, "suite count must be nonnegative");
  if (name == "cochain") return detail::cochain_suite(opt);
  if (name == "bicomplex") return detail::bicomplex_suite(opt);
  if (name == "tensor") return detail::tensor_suite(opt);
  if (name == "spectral") return detail::spectral_suite(opt);
  if (name == "truncation") return detail::truncation_suite(opt);
  if (name == "models") return detail::models_suite(opt);
  if (name == "all") {
    Report all{"all", {}};
    for (const auto& n : suite_names()) all.append(run_suite(n, opt), n);
    return all;
  }
  fail(ErrorKind::ValidationError, "unknown suite '" + name + "'");
}

}  // namespace spectra
