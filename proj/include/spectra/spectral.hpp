#pragma once

// Column-filtration spectral sequence of a bounded double complex, realized
// inside the total complex T:
//   F^p T^k       = ⊕_{p' ≥ p} K^{p', k-p'}
//   A_r^p         = {x ∈ F^p T^k : dx ∈ F^{p+r} T^{k+1}}       (zig-zags)
//   E_r^{p,q}     = A_r^p / (A_{r-1}^{p+1} + d A_{r-1}^{p-r+1})
//   d_r           = induced by d on E_r^{p,q} → E_r^{p+r,q-r+1}

#include <map>
#include <vector>

#include "spectra/bicomplex.hpp"

namespace spectra {

struct SpectralPage {
  int r = 1;
  Support support;
  std::map<Bidegree, Subquotient> terms;
  std::map<Bidegree, RatMatrix> diffs;

  std::size_t dim(int p, int q) const {
    auto it = terms.find({p, q});
    return it == terms.end() ? 0 : it->second.dim();
  }

  std::size_t diff_rank(int p, int q) const {
    auto it = diffs.find({p, q});
    return it == diffs.end() ? 0 : rank(it->second);
  }

  bool all_differentials_zero() const {
    for (const auto& [pq, m] : diffs)
      if (!m.is_zero()) return false;
    return true;
  }

  /// Σ_{p+q=k} dim E^{p,q}.
  std::size_t diagonal_dim(int k) const {
    std::size_t n = 0;
    for (const auto& [pq, t] : terms)
      if (pq.first + pq.second == k) n += t.dim();
    return n;
  }

  bool same_dims(const SpectralPage& other) const {
    for (const auto& [pq, t] : terms)
      if (t.dim() != other.dim(pq.first, pq.second)) return false;
    for (const auto& [pq, t] : other.terms)
      if (t.dim() != dim(pq.first, pq.second)) return false;
    return true;
  }
};

/// Total complex with its column filtration.
class FilteredTotal {
 public:
  explicit FilteredTotal(const DoubleComplex& k) : k_(k), t_(total(k)), layout_(k) {}

  const CochainComplex& total_complex() const { return t_; }
  const TotalLayout& layout() const { return layout_; }
  const DoubleComplex& bicomplex() const { return k_; }

  /// Offset of the first coordinate with column ≥ p in degree deg.
  std::size_t filtration_start(int deg, int p) const {
    for (const auto& s : layout_.at(deg))
      if (s.p >= p) return s.offset;
    return t_.dim(deg);
  }

  /// Inclusion F^p T^deg → T^deg.
  RatMatrix filtration_inclusion(int deg, int p) const {
    const std::size_t n = t_.dim(deg), start = filtration_start(deg, p);
    RatMatrix m(n, n - start);
    for (std::size_t i = start; i < n; ++i) m(i, i - start) = 1;
    return m;
  }

  /// Basis of A_r^p in degree deg, as columns in T^deg.
  RatMatrix zigzags(int deg, int p, int r) const {
    RatMatrix f = filtration_inclusion(deg, p);
    if (r <= 0 || f.cols() == 0) return f;
    RatMatrix image = t_.diff(deg) * f;
    const std::size_t cut = filtration_start(deg + 1, p + r);
    RatMatrix low = image.block(0, 0, cut, image.cols());
    return f * kernel_basis(low);
  }

  /// E_r^{p,q} for p+q = deg, r ≥ 1.
  Subquotient term(int p, int q, int r) const {
    const int deg = p + q;
    RatMatrix cycles = zigzags(deg, p, r);
    RatMatrix lower = zigzags(deg, p + 1, r - 1);
    RatMatrix bounded = t_.diff(deg - 1) * zigzags(deg - 1, p - r + 1, r - 1);
    return subquotient(cycles, hstack(lower, bounded));
  }

  /// Dimension of the image of H^deg(F^p T) in H^deg(T).
  std::size_t filtration_dim(int deg, int p) const {
    RatMatrix f = filtration_inclusion(deg, p);
    RatMatrix closed = f * kernel_basis(t_.diff(deg) * f);
    RatMatrix exact = image_basis(t_.diff(deg - 1));
    return rank(hstack(closed, exact)) - exact.cols();
  }

 private:
  DoubleComplex k_;
  CochainComplex t_;
  TotalLayout layout_;
};

inline SpectralPage page(const FilteredTotal& ft, int r) {
  if (r < 1) fail(ErrorKind::PreconditionViolation, "spectral page index must be at least 1");
  SpectralPage out;
  out.r = r;
  out.support = ft.bicomplex().support();
  const Support& s = out.support;
  if (s.empty()) return out;
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q) out.terms.emplace(Bidegree{p, q}, ft.term(p, q, r));
  const CochainComplex& t = ft.total_complex();
  for (auto& [pq, src] : out.terms) {
    const int tp = pq.first + r, tq = pq.second - r + 1;
    auto it = out.terms.find({tp, tq});
    if (it == out.terms.end()) {
      out.diffs.emplace(pq, RatMatrix(0, src.dim()));
      continue;
    }
    out.diffs.emplace(pq, induced_map(t.diff(pq.first + pq.second), src, it->second));
  }
  return out;
}

inline SpectralPage page(const DoubleComplex& k, int r) { return page(FilteredTotal(k), r); }

inline SpectralPage first_page(const DoubleComplex& k) { return page(k, 1); }

/// Page r+1, recomputed from zig-zags one step longer.
inline SpectralPage next_page(const SpectralPage& current, const DoubleComplex& k) { return page(k, current.r + 1); }

/// First page after which all differentials vanish. Past the column span d_r
/// has no target, so E_{w+1} is the limit; one further page is checked.
inline SpectralPage limit_page(const DoubleComplex& k) {
  FilteredTotal ft(k);
  const Support& s = k.support();
  const int width = s.empty() ? 0 : s.p1 - s.p0;
  SpectralPage last = page(ft, width + 1);
  SpectralPage beyond = page(ft, width + 2);
  if (!last.all_differentials_zero() || !last.same_dims(beyond))
    fail(ErrorKind::WitnessFailure, "spectral sequence did not stabilize past the column span");
  for (int r = 1; r <= width; ++r) {
    SpectralPage candidate = page(ft, r);
    if (candidate.same_dims(last)) return candidate;
  }
  return last;
}

/// dim F^p H^deg(total K) for p = p0 .. p1+1.
inline std::vector<std::size_t> filtration_dims(const DoubleComplex& k, int deg) {
  const Support& s = k.support();
  if (s.empty()) return {};
  FilteredTotal ft(k);
  std::vector<std::size_t> out;
  for (int p = s.p0; p <= s.p1 + 1; ++p) out.push_back(ft.filtration_dim(deg, p));
  return out;
}

/// Dimension criterion: dim H^k(total) = Σ_{p+q=k} dim E_1^{p,q} for all k.
inline bool degenerates_at_E1(const DoubleComplex& k) {
  CochainComplex t = total(k);
  SpectralPage e1 = first_page(k);
  for (int deg = k.min_total_degree(); deg <= k.max_total_degree(); ++deg)
    if (cohomology_dim(t, deg) != e1.diagonal_dim(deg)) return false;
  return true;
}

/// Pagewise criterion: d_r = 0 on every page up to the limit.
inline bool all_differentials_vanish(const DoubleComplex& k) {
  FilteredTotal ft(k);
  const Support& s = k.support();
  const int width = s.empty() ? 0 : s.p1 - s.p0;
  for (int r = 1; r <= width; ++r)
    if (!page(ft, r).all_differentials_zero()) return false;
  return true;
}

}  // namespace spectra
