#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "spectra/bicomplex.hpp"
#include "spectra/report.hpp"

namespace spectra {

namespace detail {

inline Rational parity_sign(int e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

inline std::string key2(int a, int b) { return bidegree_key(a, b); }

}  // namespace detail

/// (K⊗L)_m: d1 = dK⊗1, d2 = (-1)^{m+p} 1⊗dL. Kronecker order is K-major.
inline DoubleComplex tensor_complexes(const CochainComplex& k, const CochainComplex& l, int m) {
  if (k.is_empty_range() || l.is_empty_range()) return DoubleComplex();
  Support s{k.lo(), k.hi(), l.lo(), l.hi()};
  std::map<Bidegree, std::size_t> dims;
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q) dims[{p, q}] = k.dim(p) * l.dim(q);
  DoubleComplex out(s, dims);
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q) {
      out.set_d1(p, q, kron(k.diff(p), RatMatrix::identity(l.dim(q))));
      out.set_d2(p, q, detail::parity_sign(m + p) * kron(RatMatrix::identity(k.dim(p)), l.diff(q)));
    }
  out.validate();
  return out;
}

/// α⊗β ↦ (-1)^q α⊗β, checked to be an isomorphism (K⊗L)_0 → (K⊗L)_1.
inline BicomplexMap parity_iso(const CochainComplex& k, const CochainComplex& l) {
  DoubleComplex source = tensor_complexes(k, l, 0), target = tensor_complexes(k, l, 1);
  std::map<Bidegree, RatMatrix> mats;
  const Support& s = source.support();
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q)
      if (source.dim(p, q) > 0) mats[{p, q}] = RatMatrix::scalar(source.dim(p, q), detail::parity_sign(q));
  try {
    return {std::move(source), std::move(target), std::move(mats)};
  } catch (const Error& e) {
    fail(ErrorKind::WitnessFailure, std::string("parity isomorphism: ") + e.what());
  }
}

/// dim H^k(s((K⊗L)_m)) against Σ_{p+q=k} dim H^p(K) dim H^q(L).
inline Report kunneth_complex_check(const CochainComplex& k, const CochainComplex& l, int m) {
  Report report{"kunneth_complex", {}};
  if (k.is_empty_range() || l.is_empty_range()) return report;
  CochainComplex t = total(tensor_complexes(k, l, m));
  for (int deg = k.lo() + l.lo(); deg <= k.hi() + l.hi(); ++deg) {
    long rhs = 0;
    for (int p = k.lo(); p <= k.hi(); ++p)
      rhs += static_cast<long>(cohomology_dim(k, p) * cohomology_dim(l, deg - p));
    report.add("H^k(tensor total)", std::to_string(deg), static_cast<long>(cohomology_dim(t, deg)), rhs);
  }
  return report;
}

/// Four-graded complex A^{p,q;r,s} with differentials raising p, q, r, s
/// respectively. Index order of a quad-degree is (p,q,r,s).
class QuadComplex {
 public:
  using Degree = std::array<int, 4>;

  QuadComplex() = default;

  QuadComplex(Degree lo, Degree hi, std::map<Degree, std::size_t> dims) : lo_(lo), hi_(hi) {
    for (auto& [d, n] : dims)
      if (n > 0) {
        if (!contains(d)) fail(ErrorKind::ValidationError, "quad complex: dims outside support");
        dims_[d] = n;
      }
  }

  bool empty() const {
    for (int i = 0; i < 4; ++i)
      if (hi_[i] < lo_[i]) return true;
    return false;
  }

  bool contains(const Degree& d) const {
    for (int i = 0; i < 4; ++i)
      if (d[i] < lo_[i] || d[i] > hi_[i]) return false;
    return true;
  }

  const Degree& lo() const { return lo_; }
  const Degree& hi() const { return hi_; }

  std::size_t dim(const Degree& d) const {
    auto it = dims_.find(d);
    return it == dims_.end() ? 0 : it->second;
  }

  static Degree step(Degree d, int direction) {
    ++d[static_cast<std::size_t>(direction)];
    return d;
  }

  /// direction 0..3 for d1..d4.
  void set_diff(int direction, const Degree& d, RatMatrix m) {
    if (m.rows() != dim(step(d, direction)) || m.cols() != dim(d))
      fail(ErrorKind::ValidationError, "quad complex: differential has the wrong shape");
    diffs_[static_cast<std::size_t>(direction)][d] = std::move(m);
  }

  RatMatrix diff(int direction, const Degree& d) const {
    const auto& table = diffs_[static_cast<std::size_t>(direction)];
    auto it = table.find(d);
    if (it != table.end()) return it->second;
    return RatMatrix(dim(step(d, direction)), dim(d));
  }

  /// Each d_i squares to zero and every pair anticommutes.
  void validate() const {
    if (empty()) return;
    for_each_degree([&](const Degree& d) {
      for (int i = 0; i < 4; ++i) {
        if (!(diff(i, step(d, i)) * diff(i, d)).is_zero())
          fail(ErrorKind::WitnessFailure, "quad complex: d" + std::to_string(i + 1) + " squared is nonzero at " + label(d));
        for (int j = i + 1; j < 4; ++j) {
          RatMatrix a = diff(j, step(d, i)) * diff(i, d);
          RatMatrix b = diff(i, step(d, j)) * diff(j, d);
          if (!(a + b).is_zero())
            fail(ErrorKind::WitnessFailure, "quad complex: d" + std::to_string(i + 1) + " and d" + std::to_string(j + 1) +
                                                " do not anticommute at " + label(d));
        }
      }
    });
  }

  template <class F>
  void for_each_degree(F&& f) const {
    if (empty()) return;
    for (int p = lo_[0]; p <= hi_[0]; ++p)
      for (int q = lo_[1]; q <= hi_[1]; ++q)
        for (int r = lo_[2]; r <= hi_[2]; ++r)
          for (int s = lo_[3]; s <= hi_[3]; ++s) f(Degree{p, q, r, s});
  }

  static std::string label(const Degree& d) {
    return "(" + std::to_string(d[0]) + "," + std::to_string(d[1]) + ";" + std::to_string(d[2]) + "," + std::to_string(d[3]) + ")";
  }

 private:
  Degree lo_{0, 0, 0, 0};
  Degree hi_{-1, -1, -1, -1};
  std::map<Degree, std::size_t> dims_;
  std::array<std::map<Degree, RatMatrix>, 4> diffs_;
};

/// A^{p,q;r,s} = K^{p,r} ⊗ L^{q,s}; d1 = dK1⊗1, d2 = (-1)^{p+r} 1⊗dL1,
/// d3 = dK2⊗1, d4 = (-1)^{p+r} 1⊗dL2.
inline QuadComplex quad_tensor(const DoubleComplex& kb, const DoubleComplex& lb) {
  const Support& a = kb.support();
  const Support& b = lb.support();
  if (a.empty() || b.empty()) return QuadComplex();
  QuadComplex::Degree lo{a.p0, b.p0, a.q0, b.q0}, hi{a.p1, b.p1, a.q1, b.q1};
  std::map<QuadComplex::Degree, std::size_t> dims;
  for (int p = a.p0; p <= a.p1; ++p)
    for (int q = b.p0; q <= b.p1; ++q)
      for (int r = a.q0; r <= a.q1; ++r)
        for (int s = b.q0; s <= b.q1; ++s) dims[{p, q, r, s}] = kb.dim(p, r) * lb.dim(q, s);
  QuadComplex out(lo, hi, dims);
  out.for_each_degree([&](const QuadComplex::Degree& d) {
    const int p = d[0], q = d[1], r = d[2], s = d[3];
    const RatMatrix ik = RatMatrix::identity(kb.dim(p, r)), il = RatMatrix::identity(lb.dim(q, s));
    const Rational sign = detail::parity_sign(p + r);
    out.set_diff(0, d, kron(kb.d1(p, r), il));
    out.set_diff(1, d, sign * kron(ik, lb.d1(q, s)));
    out.set_diff(2, d, kron(kb.d2(p, r), il));
    out.set_diff(3, d, sign * kron(ik, lb.d2(q, s)));
  });
  out.validate();
  return out;
}

/// Placement of A^{p,q;r,s} inside ss^{k,l}, summands ordered by (p,r).
struct CollapseLayout {
  struct Summand {
    QuadComplex::Degree degree;
    std::size_t offset, dim;
  };

  explicit CollapseLayout(const QuadComplex& quad) {
    quad.for_each_degree([&](const QuadComplex::Degree& d) {
      auto& list = cells[{d[0] + d[1], d[2] + d[3]}];
      list.push_back({d, 0, quad.dim(d)});
    });
    for (auto& [kl, list] : cells) {
      std::sort(list.begin(), list.end(), [](const Summand& x, const Summand& y) {
        return std::pair(x.degree[0], x.degree[2]) < std::pair(y.degree[0], y.degree[2]);
      });
      std::size_t offset = 0;
      for (auto& s : list) {
        s.offset = offset;
        offset += s.dim;
      }
    }
  }

  const std::vector<Summand>& at(int k, int l) const {
    static const std::vector<Summand> none;
    auto it = cells.find({k, l});
    return it == cells.end() ? none : it->second;
  }

  std::size_t dim(int k, int l) const {
    std::size_t n = 0;
    for (const auto& s : at(k, l)) n += s.dim;
    return n;
  }

  std::size_t offset(const QuadComplex::Degree& d) const {
    for (const auto& s : at(d[0] + d[1], d[2] + d[3]))
      if (s.degree == d) return s.offset;
    return TotalLayout::npos;
  }

  std::map<Bidegree, std::vector<Summand>> cells;
};

/// ss^{k,l} = ⊕_{p+q=k, r+s=l} A^{p,q;r,s} with D1 = d1 + d2 and D2 = d3 + d4.
inline DoubleComplex ss_collapse(const QuadComplex& quad) {
  if (quad.empty()) return DoubleComplex();
  const auto& lo = quad.lo();
  const auto& hi = quad.hi();
  Support s{lo[0] + lo[1], hi[0] + hi[1], lo[2] + lo[3], hi[2] + hi[3]};
  CollapseLayout layout(quad);
  std::map<Bidegree, std::size_t> dims;
  for (int k = s.p0; k <= s.p1; ++k)
    for (int l = s.q0; l <= s.q1; ++l) dims[{k, l}] = layout.dim(k, l);
  DoubleComplex out(s, dims);
  for (int k = s.p0; k <= s.p1; ++k)
    for (int l = s.q0; l <= s.q1; ++l) {
      RatMatrix d1(layout.dim(k + 1, l), layout.dim(k, l)), d2(layout.dim(k, l + 1), layout.dim(k, l));
      for (const auto& summand : layout.at(k, l)) {
        if (summand.dim == 0) continue;
        for (int dir = 0; dir < 4; ++dir) {
          auto next = QuadComplex::step(summand.degree, dir);
          if (quad.dim(next) == 0) continue;
          RatMatrix& target = dir < 2 ? d1 : d2;
          target.add_block(layout.offset(next), summand.offset, quad.diff(dir, summand.degree));
        }
      }
      out.set_d1(k, l, std::move(d1));
      out.set_d2(k, l, std::move(d2));
    }
  out.validate();
  return out;
}

/// (A^{p,q;•,•}, d3, d4) as a double complex graded by (r,s).
inline DoubleComplex quad_slice(const QuadComplex& quad, int p, int q) {
  if (quad.empty()) return DoubleComplex();
  const auto& lo = quad.lo();
  const auto& hi = quad.hi();
  Support s{lo[2], hi[2], lo[3], hi[3]};
  std::map<Bidegree, std::size_t> dims;
  for (int r = s.p0; r <= s.p1; ++r)
    for (int t = s.q0; t <= s.q1; ++t) dims[{r, t}] = quad.dim({p, q, r, t});
  DoubleComplex out(s, dims);
  for (int r = s.p0; r <= s.p1; ++r)
    for (int t = s.q0; t <= s.q1; ++t) {
      out.set_d1(r, t, quad.diff(2, {p, q, r, t}));
      out.set_d2(r, t, quad.diff(3, {p, q, r, t}));
    }
  return out;
}

/// Slice (A^{p,q;•,•}, d3, d4) equals (row_K(p) ⊗ row_L(q))_p entrywise.
inline Report verify_slice_identity(const DoubleComplex& kb, const DoubleComplex& lb) {
  Report report{"quad_slice", {}};
  QuadComplex quad = quad_tensor(kb, lb);
  if (quad.empty()) return report;
  for (int p = kb.support().p0; p <= kb.support().p1; ++p)
    for (int q = lb.support().p0; q <= lb.support().p1; ++q) {
      bool equal = quad_slice(quad, p, q) == tensor_complexes(row(kb, p), row(lb, q), p);
      report.add("slice equals row tensor", detail::key2(p, q), equal ? 1 : 0, 1);
    }
  return report;
}

/// Row k of ss(K⊗L) against ⊕_{p+q=k} s((row_K(p) ⊗ row_L(q))_p), with an
/// explicit witness matching summands by their (p,r) labels.
inline Report verify_row_decomposition(const DoubleComplex& kb, const DoubleComplex& lb, int k) {
  Report report{"row_decomposition", {}};
  QuadComplex quad = quad_tensor(kb, lb);
  DoubleComplex ss = ss_collapse(quad);
  CochainComplex lhs = row(ss, k);
  CollapseLayout collapse(quad);

  // Direct-sum side: p ascending, then the total layout of each block.
  std::vector<CochainComplex> parts;
  std::vector<int> part_p;
  std::vector<TotalLayout> part_layouts;
  if (!quad.empty())
    for (int p = kb.support().p0; p <= kb.support().p1; ++p) {
      const int q = k - p;
      if (q < lb.support().p0 || q > lb.support().p1) continue;
      DoubleComplex t = tensor_complexes(row(kb, p), row(lb, q), p);
      parts.push_back(total(t));
      part_p.push_back(p);
      part_layouts.emplace_back(t);
    }
  CochainComplex rhs = direct_sum(parts);

  auto [lo, hi] = joint_range(lhs, rhs);
  std::map<int, RatMatrix> mats;
  for (int l = lo; l <= hi; ++l) {
    if (lhs.dim(l) != rhs.dim(l)) fail(ErrorKind::WitnessFailure, "row decomposition: dimension mismatch at l = " + std::to_string(l));
    RatMatrix m(rhs.dim(l), lhs.dim(l));
    std::size_t block_offset = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const int p = part_p[i], q = k - p;
      for (const auto& s : part_layouts[i].at(l)) {
        if (s.dim == 0) continue;
        std::size_t src = collapse.offset({p, q, s.p, s.q});
        if (src == TotalLayout::npos) fail(ErrorKind::WitnessFailure, "row decomposition: unmatched summand");
        m.set_block(block_offset + s.offset, src, RatMatrix::identity(s.dim));
      }
      block_offset += parts[i].dim(l);
    }
    if (rank(m) != m.rows()) fail(ErrorKind::WitnessFailure, "row decomposition witness is singular at l = " + std::to_string(l));
    mats[l] = std::move(m);
  }
  try {
    ChainMap witness(lhs, rhs, std::move(mats));
  } catch (const Error& e) {
    fail(ErrorKind::WitnessFailure, std::string("row decomposition witness: ") + e.what());
  }
  for (int l = lo; l <= hi; ++l)
    report.add("H^l(row k of ss)", detail::key2(k, l), static_cast<long>(cohomology_dim(lhs, l)),
               static_cast<long>(cohomology_dim(rhs, l)));
  return report;
}

/// dim H^a(s(ss(K⊗L))) against dim H^a(s((sK ⊗ sL)_0)).
inline Report verify_total_of_collapse(const DoubleComplex& kb, const DoubleComplex& lb) {
  Report report{"total_of_collapse", {}};
  CochainComplex lhs = total(ss_collapse(quad_tensor(kb, lb)));
  CochainComplex rhs = total(tensor_complexes(total(kb), total(lb), 0));
  auto [lo, hi] = joint_range(lhs, rhs);
  for (int a = lo; a <= hi; ++a)
    report.add("H^a", std::to_string(a), static_cast<long>(cohomology_dim(lhs, a)), static_cast<long>(cohomology_dim(rhs, a)));
  return report;
}

/// Part (1): total Künneth. Part (2): row Künneth at every (k,l).
inline Report kunneth_double_check(const DoubleComplex& kb, const DoubleComplex& lb) {
  Report report{"kunneth_double", {}};
  DoubleComplex ss = ss_collapse(quad_tensor(kb, lb));
  if (ss.support().empty()) return report;
  CochainComplex tk = total(kb), tl = total(lb), ts = total(ss);
  for (int a = ts.lo(); a <= ts.hi(); ++a) {
    long rhs = 0;
    for (int k = tk.lo(); k <= tk.hi(); ++k) rhs += static_cast<long>(cohomology_dim(tk, k) * cohomology_dim(tl, a - k));
    report.add("(1) H^a total", std::to_string(a), static_cast<long>(cohomology_dim(ts, a)), rhs);
  }
  const Support& a = kb.support();
  const Support& b = lb.support();
  std::map<int, CochainComplex> rows_k, rows_l;
  for (int p = a.p0; p <= a.p1; ++p) rows_k[p] = row(kb, p);
  for (int q = b.p0; q <= b.p1; ++q) rows_l[q] = row(lb, q);
  const Support& s = ss.support();
  for (int k = s.p0; k <= s.p1; ++k) {
    CochainComplex ssrow = row(ss, k);
    for (int l = s.q0; l <= s.q1; ++l) {
      long rhs = 0;
      for (int p = a.p0; p <= a.p1; ++p) {
        auto it = rows_l.find(k - p);
        if (it == rows_l.end()) continue;
        for (int r = a.q0; r <= a.q1; ++r)
          rhs += static_cast<long>(cohomology_dim(rows_k[p], r) * cohomology_dim(it->second, l - r));
      }
      report.add("(2) H^l row k", detail::key2(k, l), static_cast<long>(cohomology_dim(ssrow, l)), rhs);
    }
  }
  return report;
}

}  // namespace spectra
