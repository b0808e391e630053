#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spectra/cochain.hpp"

namespace spectra {

using Bidegree = std::pair<int, int>;

inline std::string bidegree_key(int p, int q) { return std::to_string(p) + "," + std::to_string(q); }

struct Support {
  int p0 = 0, p1 = -1, q0 = 0, q1 = -1;

  bool empty() const { return p1 < p0 || q1 < q0; }
  bool contains(int p, int q) const { return p >= p0 && p <= p1 && q >= q0 && q <= q1; }
  friend bool operator==(const Support&, const Support&) = default;
};

/// Bounded double complex with d1: (p,q) -> (p+1,q) and d2: (p,q) -> (p,q+1),
/// d1^2 = d2^2 = 0 and d1 d2 + d2 d1 = 0.
class DoubleComplex {
 public:
  DoubleComplex() = default;

  /// Builds a complex with the given dims and zero differentials; set_d1/set_d2
  /// fill in the maps and validate() checks the axioms.
  DoubleComplex(Support support, std::map<Bidegree, std::size_t> dims) : support_(support) {
    if (support_.empty()) support_ = Support{};
    dims_.assign(cells(), 0);
    for (auto [pq, n] : dims) {
      if (n == 0) continue;
      if (!support_.contains(pq.first, pq.second))
        fail(ErrorKind::ValidationError, "double complex: dims outside support at (" + bidegree_key(pq.first, pq.second) + ")");
      dims_[index(pq.first, pq.second)] = n;
    }
    d1_.resize(cells());
    d2_.resize(cells());
    for (int p = support_.p0; p <= support_.p1; ++p)
      for (int q = support_.q0; q <= support_.q1; ++q) {
        d1_[index(p, q)] = RatMatrix(dim(p + 1, q), dim(p, q));
        d2_[index(p, q)] = RatMatrix(dim(p, q + 1), dim(p, q));
      }
  }

  void set_d1(int p, int q, RatMatrix m) {
    if (!support_.contains(p, q) || m.rows() != dim(p + 1, q) || m.cols() != dim(p, q))
      fail(ErrorKind::ValidationError, "double complex: d1 at (" + bidegree_key(p, q) + ") has the wrong shape");
    d1_[index(p, q)] = std::move(m);
  }

  void set_d2(int p, int q, RatMatrix m) {
    if (!support_.contains(p, q) || m.rows() != dim(p, q + 1) || m.cols() != dim(p, q))
      fail(ErrorKind::ValidationError, "double complex: d2 at (" + bidegree_key(p, q) + ") has the wrong shape");
    d2_[index(p, q)] = std::move(m);
  }

  /// Throws ValidationError naming the first violated identity.
  void validate() const {
    for (int p = support_.p0; p <= support_.p1; ++p)
      for (int q = support_.q0; q <= support_.q1; ++q) {
        if (!(d1(p + 1, q) * d1(p, q)).is_zero())
          fail(ErrorKind::ValidationError, "d1 o d1 != 0 at (" + bidegree_key(p, q) + ")");
        if (!(d2(p, q + 1) * d2(p, q)).is_zero())
          fail(ErrorKind::ValidationError, "d2 o d2 != 0 at (" + bidegree_key(p, q) + ")");
        if (!(d1(p, q + 1) * d2(p, q) + d2(p + 1, q) * d1(p, q)).is_zero())
          fail(ErrorKind::ValidationError, "anticommutation d1 d2 + d2 d1 != 0 at (" + bidegree_key(p, q) + ")");
      }
  }

  const Support& support() const { return support_; }

  std::size_t dim(int p, int q) const { return support_.contains(p, q) ? dims_[index(p, q)] : 0; }

  RatMatrix d1(int p, int q) const {
    if (support_.contains(p, q)) return d1_[index(p, q)];
    return RatMatrix(dim(p + 1, q), dim(p, q));
  }

  RatMatrix d2(int p, int q) const {
    if (support_.contains(p, q)) return d2_[index(p, q)];
    return RatMatrix(dim(p, q + 1), dim(p, q));
  }

  int min_total_degree() const { return support_.p0 + support_.q0; }
  int max_total_degree() const { return support_.p1 + support_.q1; }

  std::size_t total_dimension() const {
    std::size_t n = 0;
    for (auto d : dims_) n += d;
    return n;
  }

  friend bool operator==(const DoubleComplex& a, const DoubleComplex& b) {
    return a.support_ == b.support_ && a.dims_ == b.dims_ && a.d1_ == b.d1_ && a.d2_ == b.d2_;
  }

 private:
  std::size_t cells() const {
    if (support_.empty()) return 0;
    return static_cast<std::size_t>(support_.p1 - support_.p0 + 1) * static_cast<std::size_t>(support_.q1 - support_.q0 + 1);
  }
  std::size_t index(int p, int q) const {
    return static_cast<std::size_t>(p - support_.p0) * static_cast<std::size_t>(support_.q1 - support_.q0 + 1) +
           static_cast<std::size_t>(q - support_.q0);
  }

  Support support_;
  std::vector<std::size_t> dims_;
  std::vector<RatMatrix> d1_;
  std::vector<RatMatrix> d2_;
};

/// Summand placement inside the total complex: degree k is the direct sum of
/// K^{p,k-p} over p ascending.
struct TotalLayout {
  struct Summand {
    int p, q;
    std::size_t offset, dim;
  };

  explicit TotalLayout(const DoubleComplex& k) {
    const Support& s = k.support();
    if (s.empty()) return;
    lo = s.p0 + s.q0;
    hi = s.p1 + s.q1;
    degrees.resize(static_cast<std::size_t>(hi - lo + 1));
    for (int deg = lo; deg <= hi; ++deg) {
      auto& list = degrees[static_cast<std::size_t>(deg - lo)];
      std::size_t offset = 0;
      for (int p = std::max(s.p0, deg - s.q1); p <= std::min(s.p1, deg - s.q0); ++p) {
        list.push_back({p, deg - p, offset, k.dim(p, deg - p)});
        offset += k.dim(p, deg - p);
      }
    }
  }

  const std::vector<Summand>& at(int deg) const {
    static const std::vector<Summand> none;
    if (deg < lo || deg > hi) return none;
    return degrees[static_cast<std::size_t>(deg - lo)];
  }

  std::size_t dim(int deg) const {
    std::size_t n = 0;
    for (const auto& s : at(deg)) n += s.dim;
    return n;
  }

  /// Offset of K^{p,deg-p} inside degree deg; npos if absent.
  std::size_t offset(int deg, int p) const {
    for (const auto& s : at(deg))
      if (s.p == p) return s.offset;
    return npos;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  int lo = 0, hi = -1;
  std::vector<std::vector<Summand>> degrees;
};

inline CochainComplex total(const DoubleComplex& k) {
  TotalLayout layout(k);
  if (layout.hi < layout.lo) return CochainComplex::zero();
  std::vector<std::size_t> dims;
  std::vector<RatMatrix> diffs;
  for (int deg = layout.lo; deg <= layout.hi; ++deg) {
    dims.push_back(layout.dim(deg));
    RatMatrix d(layout.dim(deg + 1), layout.dim(deg));
    for (const auto& s : layout.at(deg)) {
      if (s.dim == 0) continue;
      if (auto off = layout.offset(deg + 1, s.p + 1); off != TotalLayout::npos) d.add_block(off, s.offset, k.d1(s.p, s.q));
      if (auto off = layout.offset(deg + 1, s.p); off != TotalLayout::npos) d.add_block(off, s.offset, k.d2(s.p, s.q));
    }
    diffs.push_back(std::move(d));
  }
  return {layout.lo, layout.hi, std::move(dims), std::move(diffs)};
}

/// K[m,n]^{p,q} = K^{p+m,q+n}; no sign.
inline DoubleComplex shift2(const DoubleComplex& k, int m, int n) {
  const Support& s = k.support();
  if (s.empty()) return k;
  Support t{s.p0 - m, s.p1 - m, s.q0 - n, s.q1 - n};
  std::map<Bidegree, std::size_t> dims;
  for (int p = t.p0; p <= t.p1; ++p)
    for (int q = t.q0; q <= t.q1; ++q) dims[{p, q}] = k.dim(p + m, q + n);
  DoubleComplex out(t, dims);
  for (int p = t.p0; p <= t.p1; ++p)
    for (int q = t.q0; q <= t.q1; ++q) {
      out.set_d1(p, q, k.d1(p + m, q + n));
      out.set_d2(p, q, k.d2(p + m, q + n));
    }
  return out;
}

/// (K^*)^{p,q} = (K^{-p,-q})^*, with d1^*, d2^* the transposes times (-1)^{p+q+1}.
inline DoubleComplex dual2(const DoubleComplex& k) {
  const Support& s = k.support();
  if (s.empty()) return k;
  Support t{-s.p1, -s.p0, -s.q1, -s.q0};
  std::map<Bidegree, std::size_t> dims;
  for (int p = t.p0; p <= t.p1; ++p)
    for (int q = t.q0; q <= t.q1; ++q) dims[{p, q}] = k.dim(-p, -q);
  DoubleComplex out(t, dims);
  for (int p = t.p0; p <= t.p1; ++p)
    for (int q = t.q0; q <= t.q1; ++q) {
      Rational sign = ((p + q + 1) % 2 == 0) ? 1 : -1;
      out.set_d1(p, q, sign * k.d1(-p - 1, -q).transpose());
      out.set_d2(p, q, sign * k.d2(-p, -q - 1).transpose());
    }
  return out;
}

/// Fixed p: the complex (K^{p,*}, d2) graded by q.
inline CochainComplex row(const DoubleComplex& k, int p) {
  const Support& s = k.support();
  if (s.empty() || p < s.p0 || p > s.p1) return CochainComplex::zero();
  std::vector<std::size_t> dims;
  std::vector<RatMatrix> diffs;
  for (int q = s.q0; q <= s.q1; ++q) {
    dims.push_back(k.dim(p, q));
    diffs.push_back(k.d2(p, q));
  }
  return {s.q0, s.q1, std::move(dims), std::move(diffs)};
}

inline Support joint_support(const Support& a, const Support& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.p0, b.p0), std::max(a.p1, b.p1), std::min(a.q0, b.q0), std::max(a.q1, b.q1)};
}

class BicomplexMap {
 public:
  BicomplexMap(DoubleComplex source, DoubleComplex target, std::map<Bidegree, RatMatrix> mats)
      : source_(std::move(source)), target_(std::move(target)), mats_(std::move(mats)) {
    for (auto& [pq, m] : mats_)
      if (m.rows() != target_.dim(pq.first, pq.second) || m.cols() != source_.dim(pq.first, pq.second))
        fail(ErrorKind::ValidationError, "bicomplex map: f at (" + bidegree_key(pq.first, pq.second) + ") has the wrong shape");
    Support s = joint_support(source_.support(), target_.support());
    for (int p = s.p0 - 1; p <= s.p1; ++p)
      for (int q = s.q0 - 1; q <= s.q1; ++q) {
        if (!(mat(p + 1, q) * source_.d1(p, q) == target_.d1(p, q) * mat(p, q)))
          fail(ErrorKind::NotChainCompatible, "bicomplex map does not commute with d1 at (" + bidegree_key(p, q) + ")");
        if (!(mat(p, q + 1) * source_.d2(p, q) == target_.d2(p, q) * mat(p, q)))
          fail(ErrorKind::NotChainCompatible, "bicomplex map does not commute with d2 at (" + bidegree_key(p, q) + ")");
      }
  }

  static BicomplexMap identity(const DoubleComplex& k) {
    std::map<Bidegree, RatMatrix> mats;
    const Support& s = k.support();
    for (int p = s.p0; p <= s.p1; ++p)
      for (int q = s.q0; q <= s.q1; ++q)
        if (k.dim(p, q) > 0) mats[{p, q}] = RatMatrix::identity(k.dim(p, q));
    return {k, k, std::move(mats)};
  }

  static BicomplexMap zero(const DoubleComplex& source, const DoubleComplex& target) { return {source, target, {}}; }

  const DoubleComplex& source() const { return source_; }
  const DoubleComplex& target() const { return target_; }
  const std::map<Bidegree, RatMatrix>& mats() const { return mats_; }

  RatMatrix mat(int p, int q) const {
    auto it = mats_.find({p, q});
    if (it != mats_.end()) return it->second;
    return RatMatrix(target_.dim(p, q), source_.dim(p, q));
  }

 private:
  DoubleComplex source_;
  DoubleComplex target_;
  std::map<Bidegree, RatMatrix> mats_;
};

inline BicomplexMap compose(const BicomplexMap& g, const BicomplexMap& f) {
  std::map<Bidegree, RatMatrix> mats;
  Support s = joint_support(f.source().support(), g.target().support());
  for (int p = s.p0; p <= s.p1; ++p)
    for (int q = s.q0; q <= s.q1; ++q) mats[{p, q}] = g.mat(p, q) * f.mat(p, q);
  return {f.source(), g.target(), std::move(mats)};
}

/// (sf)^k = sum over p+q=k of f^{p,q}, placed in the total summand order.
inline ChainMap total_map(const BicomplexMap& f) {
  TotalLayout src(f.source()), tgt(f.target());
  CochainComplex ts = total(f.source()), tt = total(f.target());
  auto [lo, hi] = joint_range(ts, tt);
  std::map<int, RatMatrix> mats;
  for (int deg = lo; deg <= hi; ++deg) {
    RatMatrix m(tt.dim(deg), ts.dim(deg));
    for (const auto& s : src.at(deg)) {
      if (s.dim == 0) continue;
      auto off = tgt.offset(deg, s.p);
      if (off == TotalLayout::npos) continue;
      m.set_block(off, s.offset, f.mat(s.p, s.q));
    }
    mats[deg] = std::move(m);
  }
  return {std::move(ts), std::move(tt), std::move(mats)};
}

struct BicomplexWitness {
  ChainMap map;
};

/// The map f -> (f restricted to K^{-p,-q})_{p+q=k}, checked to be a chain
/// isomorphism dual(total(K)) -> total(dual2(K)).
inline BicomplexWitness verify_total_dual_iso(const DoubleComplex& k) {
  CochainComplex source = dual(total(k));
  DoubleComplex kd = dual2(k);
  CochainComplex target = total(kd);
  TotalLayout layout(k), layout_dual(kd);
  auto [lo, hi] = joint_range(source, target);
  std::map<int, RatMatrix> mats;
  for (int deg = lo; deg <= hi; ++deg) {
    if (source.dim(deg) != target.dim(deg))
      fail(ErrorKind::WitnessFailure, "total-dual witness: dimension mismatch in degree " + std::to_string(deg));
    RatMatrix m(target.dim(deg), source.dim(deg));
    // Source coordinates: dual basis of K^{p,q}, p+q = -deg, in layout order.
    for (const auto& s : layout.at(-deg)) {
      auto off = layout_dual.offset(deg, -s.p);
      if (s.dim == 0) continue;
      if (off == TotalLayout::npos) fail(ErrorKind::WitnessFailure, "total-dual witness: missing summand");
      m.set_block(off, s.offset, RatMatrix::identity(s.dim));
    }
    if (rank(m) != m.rows())
      fail(ErrorKind::WitnessFailure, "total-dual witness is singular in degree " + std::to_string(deg));
    mats[deg] = std::move(m);
  }
  try {
    return {ChainMap(std::move(source), std::move(target), std::move(mats))};
  } catch (const Error& e) {
    fail(ErrorKind::WitnessFailure, std::string("total-dual witness is not a chain map: ") + e.what());
  }
}

/// Total-degree sums of bidegree dims.
inline std::size_t total_dim(const DoubleComplex& k, int deg) { return TotalLayout(k).dim(deg); }

}  // namespace spectra
