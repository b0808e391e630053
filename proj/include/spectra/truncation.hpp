#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "spectra/bicomplex.hpp"
#include "spectra/report.hpp"
#include "spectra/spectral.hpp"

namespace spectra {

struct TruncationSpec {
  int s = 0;
  int t = -1;
};

/// Columns outside [s,t] are zeroed; the support and the bases of the kept
/// columns are those of S, so window maps are coordinate inclusions.
inline DoubleComplex truncate(const DoubleComplex& k, TruncationSpec spec) {
  const Support& sup = k.support();
  if (sup.empty()) return k;
  auto kept = [&](int p) { return p >= spec.s && p <= spec.t; };
  std::map<Bidegree, std::size_t> dims;
  for (int p = sup.p0; p <= sup.p1; ++p)
    for (int q = sup.q0; q <= sup.q1; ++q)
      if (kept(p)) dims[{p, q}] = k.dim(p, q);
  DoubleComplex out(sup, dims);
  for (int p = sup.p0; p <= sup.p1; ++p) {
    if (!kept(p)) continue;
    for (int q = sup.q0; q <= sup.q1; ++q) {
      out.set_d2(p, q, k.d2(p, q));
      if (kept(p + 1)) out.set_d1(p, q, k.d1(p, q));
    }
  }
  return out;
}

inline std::size_t hypercohomology(const DoubleComplex& k, TruncationSpec spec, int degree) {
  return cohomology_dim(total(truncate(k, spec)), degree);
}

/// truncate(S, from) → truncate(S, to): identity on shared columns, zero elsewhere.
inline BicomplexMap window_map(const DoubleComplex& k, TruncationSpec from, TruncationSpec to) {
  DoubleComplex source = truncate(k, from), target = truncate(k, to);
  std::map<Bidegree, RatMatrix> mats;
  const Support& sup = k.support();
  const int lo = std::max(from.s, to.s), hi = std::min(from.t, to.t);
  for (int p = std::max(lo, sup.p0); p <= std::min(hi, sup.p1); ++p)
    for (int q = sup.q0; q <= sup.q1; ++q)
      if (k.dim(p, q) > 0) mats[{p, q}] = RatMatrix::identity(k.dim(p, q));
  return {std::move(source), std::move(target), std::move(mats)};
}

/// 0 → S(t+1,t') → S(s',t') → S(s,t) → S(s,s'-1) → 0, exact at every bidegree.
inline Report four_term_check(const DoubleComplex& k, int s, int s2, int t, int t2) {
  if (!(s <= s2 && s2 <= t && t <= t2))
    fail(ErrorKind::PreconditionViolation, "four-term sequence needs s <= s' <= t <= t'");
  Report report{"four_term", {}};
  TruncationSpec a{t + 1, t2}, b{s2, t2}, c{s, t}, d{s, s2 - 1};
  BicomplexMap f1 = window_map(k, a, b), f2 = window_map(k, b, c), f3 = window_map(k, c, d);
  const Support& sup = k.support();
  for (int p = sup.p0; p <= sup.p1; ++p)
    for (int q = sup.q0; q <= sup.q1; ++q) {
      const std::string key = bidegree_key(p, q);
      RatMatrix m1 = f1.mat(p, q), m2 = f2.mat(p, q), m3 = f3.mat(p, q);
      const auto r1 = static_cast<long>(rank(m1)), r2 = static_cast<long>(rank(m2)), r3 = static_cast<long>(rank(m3));
      const auto da = static_cast<long>(f1.source().dim(p, q)), db = static_cast<long>(f2.source().dim(p, q));
      const auto dc = static_cast<long>(f3.source().dim(p, q)), dd = static_cast<long>(f3.target().dim(p, q));
      report.add("injective at S(t+1,t')", key, r1, da);
      report.add("exact at S(s',t')", key, r1, db - r2, (m2 * m1).is_zero() && r1 == db - r2);
      report.add("exact at S(s,t)", key, r2, dc - r3, (m3 * m2).is_zero() && r2 == dc - r3);
      report.add("surjective onto S(s,s'-1)", key, r3, dd);
    }
  return report;
}

struct LongExactReport {
  struct Node {
    std::string label;  // "A", "B" or "C"
    int degree;
    long dim;
    long rank_in;
    long rank_out;
    bool exact;
  };

  struct Degree {
    int k;
    long dim_a, dim_b, dim_c;
    long rank_g, rank_h, rank_delta;
  };

  std::vector<Degree> degrees;
  std::vector<Node> nodes;

  bool exact() const {
    return std::all_of(nodes.begin(), nodes.end(), [](const Node& n) { return n.exact; });
  }

  bool any_nonzero_connecting_map() const {
    return std::any_of(degrees.begin(), degrees.end(), [](const Degree& d) { return d.rank_delta > 0; });
  }

  Report as_report() const {
    Report r{"long_exact", {}};
    for (const auto& n : nodes)
      r.add("exact at H^k(" + n.label + ")", std::to_string(n.degree), n.rank_in, n.dim - n.rank_out, n.exact);
    return r;
  }
};

/// Connecting map H^k(C) → H^{k+1}(A) of 0 → A →ι B →π C → 0 where ι and π
/// are coordinate inclusion and projection: lift by π^T, apply d_B, land in A.
inline RatMatrix connecting_map(const ChainMap& iota, const ChainMap& pi, int degree) {
  const CochainComplex& a = iota.source();
  const CochainComplex& b = iota.target();
  const CochainComplex& c = pi.target();
  Subquotient hc = cohomology(c, degree), ha = cohomology(a, degree + 1);
  RatMatrix lifted = b.diff(degree) * pi.mat(degree).transpose();
  if (!(pi.mat(degree + 1) * lifted * hc.cycle_basis).is_zero())
    fail(ErrorKind::WitnessFailure, "connecting map: d of a lifted cycle does not land in the subcomplex");
  RatMatrix f = iota.mat(degree + 1).transpose() * lifted;
  if (!(iota.mat(degree + 1) * f * hc.cycle_basis == lifted * hc.cycle_basis))
    fail(ErrorKind::WitnessFailure, "connecting map: lifted boundary is not in the image of the inclusion");
  return induced_map(f, hc, ha);
}

/// ⋯ → ℍ^k([s,t]) → ℍ^k([r,t]) → ℍ^k([r,s-1]) → ℍ^{k+1}([s,t]) → ⋯
inline LongExactReport les_of_truncations(const DoubleComplex& k, int r, int s, int t) {
  if (!(r <= s && s <= t)) fail(ErrorKind::PreconditionViolation, "long exact sequence needs r <= s <= t");
  ChainMap iota = total_map(window_map(k, {s, t}, {r, t}));
  ChainMap pi = total_map(window_map(k, {r, t}, {r, s - 1}));
  const CochainComplex& a = iota.source();
  const CochainComplex& b = iota.target();
  const CochainComplex& c = pi.target();
  LongExactReport out;
  const int lo = k.min_total_degree() - 1, hi = k.max_total_degree() + 1;
  std::map<int, RatMatrix> g, h, delta;
  for (int deg = lo - 1; deg <= hi; ++deg) {
    g[deg] = cohomology_map(iota, deg);
    h[deg] = cohomology_map(pi, deg);
    delta[deg] = connecting_map(iota, pi, deg);
  }
  for (int deg = lo; deg <= hi; ++deg)
    out.degrees.push_back({deg, static_cast<long>(cohomology_dim(a, deg)), static_cast<long>(cohomology_dim(b, deg)),
                           static_cast<long>(cohomology_dim(c, deg)), static_cast<long>(rank(g[deg])),
                           static_cast<long>(rank(h[deg])), static_cast<long>(rank(delta[deg]))});
  auto node = [&](std::string label, int deg, const RatMatrix& in, const RatMatrix& outm) {
    const auto dim = static_cast<long>(in.rows());
    const auto rin = static_cast<long>(rank(in)), rout = static_cast<long>(rank(outm));
    bool exact = (outm * in).is_zero() && rin == dim - rout;
    out.nodes.push_back({std::move(label), deg, dim, rin, rout, exact});
  };
  for (int deg = lo; deg <= hi; ++deg) {
    node("A", deg, delta[deg - 1], g[deg]);
    node("B", deg, g[deg], h[deg]);
    node("C", deg, h[deg], delta[deg]);
  }
  return out;
}

inline SpectralPage truncated_E1(const DoubleComplex& k, TruncationSpec spec) { return first_page(truncate(k, spec)); }

struct FrolicherReport {
  Report report;
  bool equality_all_k = true;
};

/// b^k([s,t]) ≤ Σ_{p+q=k, s≤p≤t} h^{p,q}, with h taken from the rows of S.
inline FrolicherReport frolicher_inequality(const DoubleComplex& k, TruncationSpec spec) {
  FrolicherReport out{{"frolicher", {}}, true};
  CochainComplex t = total(truncate(k, spec));
  const Support& sup = k.support();
  std::map<int, CochainComplex> rows;
  for (int p = std::max(spec.s, sup.p0); p <= std::min(spec.t, sup.p1); ++p) rows[p] = row(k, p);
  for (int deg = k.min_total_degree(); deg <= k.max_total_degree(); ++deg) {
    long sum = 0;
    for (const auto& [p, r] : rows) sum += static_cast<long>(cohomology_dim(r, deg - p));
    const auto b = static_cast<long>(cohomology_dim(t, deg));
    out.report.add("b^k <= sum h^{p,q}", std::to_string(deg), b, sum, b <= sum);
    if (b != sum) out.equality_all_k = false;
  }
  return out;
}

/// dim F^p H^k for p = p0 .. p1+1, as ranks of ℍ^k([p,p1]) → ℍ^k([p0,p1]).
inline std::vector<std::size_t> hodge_filtration_dims(const DoubleComplex& k, int degree) {
  const Support& sup = k.support();
  if (sup.empty()) return {};
  std::vector<std::size_t> out;
  for (int p = sup.p0; p <= sup.p1 + 1; ++p)
    out.push_back(rank(cohomology_map(total_map(window_map(k, {p, sup.p1}, {sup.p0, sup.p1})), degree)));
  return out;
}

}  // namespace spectra
