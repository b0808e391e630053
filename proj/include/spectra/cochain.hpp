#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "spectra/exactla.hpp"

namespace spectra {

/// Bounded cochain complex stored on degrees [lo, hi]; zero elsewhere.
/// d(k) maps degree k to degree k+1 and has shape dim(k+1) x dim(k).
class CochainComplex {
 public:
  CochainComplex() = default;

  /// `diffs` holds d^lo, ..., d^{hi-1}; missing trailing entries are zero maps.
  CochainComplex(int lo, int hi, std::vector<std::size_t> dims, std::vector<RatMatrix> diffs = {})
      : lo_(lo), hi_(hi), dims_(std::move(dims)), diffs_(std::move(diffs)) {
    if (hi_ < lo_) {
      hi_ = lo_ - 1;
      dims_.clear();
      diffs_.clear();
    }
    if (dims_.size() != span())
      fail(ErrorKind::ValidationError, "cochain complex: dims length does not match degree range");
    if (diffs_.size() > span()) fail(ErrorKind::ValidationError, "cochain complex: too many differentials");
    diffs_.resize(span());
    for (int k = lo_; k <= hi_; ++k) {
      RatMatrix& d = diffs_[index(k)];
      if (d.rows() == 0 && d.cols() == 0) d = RatMatrix(dim(k + 1), dim(k));
      if (d.rows() != dim(k + 1) || d.cols() != dim(k))
        fail(ErrorKind::ValidationError, "cochain complex: d^" + std::to_string(k) + " has the wrong shape");
    }
    for (int k = lo_; k + 1 <= hi_; ++k)
      if (!(diff(k + 1) * diff(k)).is_zero())
        fail(ErrorKind::ValidationError, "cochain complex: d^" + std::to_string(k + 1) + " o d^" + std::to_string(k) + " != 0");
  }

  static CochainComplex zero() { return {}; }

  static CochainComplex concentrated(int degree, std::size_t dim) { return CochainComplex(degree, degree, {dim}); }

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  bool is_empty_range() const { return hi_ < lo_; }

  std::size_t dim(int k) const { return in_range(k) ? dims_[index(k)] : 0; }

  RatMatrix diff(int k) const {
    if (in_range(k)) return diffs_[index(k)];
    return RatMatrix(dim(k + 1), dim(k));
  }

  friend bool operator==(const CochainComplex& a, const CochainComplex& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.dims_ == b.dims_ && a.diffs_ == b.diffs_;
  }

 private:
  std::size_t span() const { return hi_ < lo_ ? 0 : static_cast<std::size_t>(hi_ - lo_ + 1); }
  bool in_range(int k) const { return k >= lo_ && k <= hi_; }
  std::size_t index(int k) const { return static_cast<std::size_t>(k - lo_); }

  int lo_ = 0;
  int hi_ = -1;
  std::vector<std::size_t> dims_;
  std::vector<RatMatrix> diffs_;
};

/// Degree range covering both complexes.
inline std::pair<int, int> joint_range(const CochainComplex& a, const CochainComplex& b) {
  if (a.is_empty_range()) return {b.lo(), b.hi()};
  if (b.is_empty_range()) return {a.lo(), a.hi()};
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

class ChainMap {
 public:
  ChainMap(CochainComplex source, CochainComplex target, std::map<int, RatMatrix> mats)
      : source_(std::move(source)), target_(std::move(target)), mats_(std::move(mats)) {
    auto [lo, hi] = joint_range(source_, target_);
    for (auto& [k, m] : mats_)
      if (m.rows() != target_.dim(k) || m.cols() != source_.dim(k))
        fail(ErrorKind::ValidationError, "chain map: f^" + std::to_string(k) + " has the wrong shape");
    for (int k = lo - 1; k <= hi; ++k) {
      if (!(mat(k + 1) * source_.diff(k) == target_.diff(k) * mat(k)))
        fail(ErrorKind::NotChainCompatible, "chain map does not commute with d at degree " + std::to_string(k));
    }
  }

  static ChainMap identity(const CochainComplex& k) {
    std::map<int, RatMatrix> mats;
    for (int d = k.lo(); d <= k.hi(); ++d) mats[d] = RatMatrix::identity(k.dim(d));
    return {k, k, std::move(mats)};
  }

  static ChainMap zero(const CochainComplex& source, const CochainComplex& target) { return {source, target, {}}; }

  const CochainComplex& source() const { return source_; }
  const CochainComplex& target() const { return target_; }

  RatMatrix mat(int k) const {
    auto it = mats_.find(k);
    if (it != mats_.end()) return it->second;
    return RatMatrix(target_.dim(k), source_.dim(k));
  }

  const std::map<int, RatMatrix>& mats() const { return mats_; }

 private:
  CochainComplex source_;
  CochainComplex target_;
  std::map<int, RatMatrix> mats_;
};

/// g o f
inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
  std::map<int, RatMatrix> mats;
  auto [lo, hi] = joint_range(f.source(), g.target());
  for (int k = lo; k <= hi; ++k) mats[k] = g.mat(k) * f.mat(k);
  return {f.source(), g.target(), std::move(mats)};
}

/// H^k(K) = ker d^k / im d^{k-1}, as a subquotient of K^k.
inline Subquotient cohomology(const CochainComplex& k, int degree) {
  return subquotient(kernel_basis(k.diff(degree)), k.diff(degree - 1));
}

inline std::size_t cohomology_dim(const CochainComplex& k, int degree) {
  const std::size_t n = k.dim(degree);
  if (n == 0) return 0;
  return n - rank(k.diff(degree)) - rank(k.diff(degree - 1));
}

/// K[m]^k = K^{k+m}, d[m]^k = d^{k+m}; no sign.
inline CochainComplex shift(const CochainComplex& k, int m) {
  if (k.is_empty_range()) return k;
  std::vector<std::size_t> dims;
  std::vector<RatMatrix> diffs;
  for (int d = k.lo(); d <= k.hi(); ++d) {
    dims.push_back(k.dim(d));
    diffs.push_back(k.diff(d));
  }
  return {k.lo() - m, k.hi() - m, std::move(dims), std::move(diffs)};
}

/// (K^*)^k = (K^{-k})^*, d^{*k} = (-1)^{k+1} (d^{-k-1})^T.
inline CochainComplex dual(const CochainComplex& k) {
  if (k.is_empty_range()) return k;
  const int lo = -k.hi(), hi = -k.lo();
  std::vector<std::size_t> dims;
  std::vector<RatMatrix> diffs;
  for (int d = lo; d <= hi; ++d) {
    dims.push_back(k.dim(-d));
    Rational sign = ((d + 1) % 2 == 0) ? 1 : -1;
    diffs.push_back(sign * k.diff(-d - 1).transpose());
  }
  return {lo, hi, std::move(dims), std::move(diffs)};
}

inline CochainComplex direct_sum(std::span<const CochainComplex> parts) {
  bool any = false;
  int lo = 0, hi = -1;
  for (const auto& p : parts) {
    if (p.is_empty_range()) continue;
    lo = any ? std::min(lo, p.lo()) : p.lo();
    hi = any ? std::max(hi, p.hi()) : p.hi();
    any = true;
  }
  if (!any) return CochainComplex::zero();
  std::vector<std::size_t> dims;
  std::vector<RatMatrix> diffs;
  for (int d = lo; d <= hi; ++d) {
    std::size_t total = 0;
    std::vector<RatMatrix> blocks;
    for (const auto& p : parts) {
      total += p.dim(d);
      blocks.push_back(p.diff(d));
    }
    dims.push_back(total);
    diffs.push_back(block_diagonal(blocks));
  }
  return {lo, hi, std::move(dims), std::move(diffs)};
}

inline RatMatrix cohomology_map(const ChainMap& f, int degree) {
  return induced_map(f.mat(degree), cohomology(f.source(), degree), cohomology(f.target(), degree));
}

inline long euler_characteristic(const CochainComplex& k) {
  long chi = 0;
  for (int d = k.lo(); d <= k.hi(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(k.dim(d));
  return chi;
}

}  // namespace spectra
