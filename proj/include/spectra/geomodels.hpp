#pragma once

// Invariant-form model bicomplexes. The exterior algebra on 2n generators
// uses bit i for ω^{i+1} (holomorphic, i < n) and bit n+i for ω̄^{i+1}.
// Monomials are bitmasks; a basis of bidegree (p,q) lists the monomials with
// p holomorphic and q antiholomorphic factors in lexicographic (I, J) order.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spectra/bicomplex.hpp"
#include "spectra/report.hpp"
#include "spectra/spectral.hpp"
#include "spectra/tensorops.hpp"
#include "spectra/truncation.hpp"

namespace spectra {

using Mask = std::uint64_t;
using Form = std::map<Mask, Rational>;

struct WedgeTerm {
  std::string left;
  std::string right;
  Rational coeff;
};

/// dω^i for the holomorphic generators i = 1..n; antiholomorphic ones follow
/// by conjugation. Labels: "i" for ω^i, "bi" for ω̄^i.
struct LieModelSpec {
  int n = 0;
  std::size_t twist_rank = 1;
  std::map<int, std::vector<WedgeTerm>> d;
};

inline LieModelSpec torus_spec(int n, std::size_t twist_rank = 1) { return {n, twist_rank, {}}; }

inline LieModelSpec iwasawa_spec() {
  LieModelSpec spec{3, 1, {}};
  spec.d[3] = {{"1", "2", Rational(-1)}};
  return spec;
}

namespace detail {

inline int popcount(Mask m) { return std::popcount(m); }

inline void add_term(Form& f, Mask m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = f.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) f.erase(it);
  }
}

/// All k-subsets of [offset, offset+count) as masks, in lexicographic order of
/// their sorted index lists.
inline void combinations(int offset, int count, int k, std::vector<Mask>& out) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > count) return;
  while (true) {
    Mask m = 0;
    for (int i : idx) m |= Mask{1} << (offset + i);
    out.push_back(m);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == count - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

class ExteriorAlgebra {
 public:
  explicit ExteriorAlgebra(const LieModelSpec& spec) : n_(spec.n) {
    if (n_ < 0 || 2 * n_ > 62) fail(ErrorKind::ValidationError, "model dimension out of range");
    for (int p = 0; p <= n_; ++p)
      for (int q = 0; q <= n_; ++q) {
        std::vector<Mask> holo, anti, list;
        detail::combinations(0, n_, p, holo);
        detail::combinations(n_, n_, q, anti);
        for (Mask h : holo)
          for (Mask a : anti) list.push_back(h | a);
        for (std::size_t i = 0; i < list.size(); ++i) index_[list[i]] = i;
        basis_[{p, q}] = std::move(list);
      }
    gen_d_.assign(static_cast<std::size_t>(2 * n_), Form{});
    for (const auto& [i, terms] : spec.d) {
      if (i < 1 || i > n_) fail(ErrorKind::ValidationError, "structure constants given for unknown generator " + std::to_string(i));
      Form f;
      for (const auto& t : terms) {
        int a = parse_generator(t.left), b = parse_generator(t.right);
        Form w = wedge(monomial(Mask{1} << a), monomial(Mask{1} << b));
        for (auto& [m, c] : w) detail::add_term(f, m, c * t.coeff);
      }
      for (const auto& [m, c] : f)
        if (bidegree(m) == Bidegree{0, 2})
          fail(ErrorKind::ValidationError, "d of generator " + std::to_string(i) + " has a (0,2) component; structure is not integrable");
      gen_d_[static_cast<std::size_t>(i - 1)] = f;
      gen_d_[static_cast<std::size_t>(n_ + i - 1)] = conjugate(f);
    }
    for (int g = 0; g < 2 * n_; ++g)
      if (!d(gen_d_[static_cast<std::size_t>(g)]).empty())
        fail(ErrorKind::JacobiViolation, "d o d != 0 on generator " + generator_label(g));
  }

  int n() const { return n_; }
  Mask top() const { return n_ == 0 ? 0 : (Mask{1} << (2 * n_)) - 1; }

  Bidegree bidegree(Mask m) const {
    const Mask holo = n_ == 0 ? 0 : (Mask{1} << n_) - 1;
    return {detail::popcount(m & holo), detail::popcount(m & ~holo)};
  }

  const std::vector<Mask>& basis(int p, int q) const {
    static const std::vector<Mask> none;
    auto it = basis_.find({p, q});
    return it == basis_.end() ? none : it->second;
  }

  std::size_t index(Mask m) const { return index_.at(m); }

  int parse_generator(const std::string& label) const {
    const bool anti = !label.empty() && label[0] == 'b';
    const std::string digits = anti ? label.substr(1) : label;
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      fail(ErrorKind::ParseError, "bad generator label '" + label + "'");
    const int i = std::stoi(digits);
    if (i < 1 || i > n_) fail(ErrorKind::ValidationError, "generator label '" + label + "' out of range");
    return anti ? n_ + i - 1 : i - 1;
  }

  std::string generator_label(int g) const { return g < n_ ? std::to_string(g + 1) : "b" + std::to_string(g - n_ + 1); }

  std::string label(Mask m) const {
    if (m == 0) return "1";
    std::string out;
    for (int g = 0; g < 2 * n_; ++g)
      if (m & (Mask{1} << g)) out += (out.empty() ? "w" : "^w") + generator_label(g);
    return out;
  }

  static Form monomial(Mask m, const Rational& c = 1) {
    Form f;
    detail::add_term(f, m, c);
    return f;
  }

  /// Sign of a∧b against the sorted monomial a|b; 0 if they share a factor.
  static int wedge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int inversions = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
      const Mask bit = rest & (~rest + 1);
      inversions += detail::popcount(a & ~(bit | (bit - 1)));
    }
    return inversions % 2 == 0 ? 1 : -1;
  }

  static Form wedge(const Form& x, const Form& y) {
    Form out;
    for (const auto& [a, ca] : x)
      for (const auto& [b, cb] : y)
        if (int s = wedge_sign(a, b); s != 0) detail::add_term(out, a | b, ca * cb * s);
    return out;
  }

  /// Swaps ω^i and ω̄^i factor by factor; coefficients are real.
  Form conjugate(const Form& f) const {
    Form out;
    for (const auto& [m, c] : f) {
      Form acc = monomial(0, c);
      for (int g = 0; g < 2 * n_; ++g)
        if (m & (Mask{1} << g)) acc = wedge(acc, monomial(Mask{1} << (g < n_ ? g + n_ : g - n_)));
      for (auto& [mm, cc] : acc) detail::add_term(out, mm, cc);
    }
    return out;
  }

  /// Leibniz extension of d from the generators.
  Form d_monomial(Mask m) const {
    Form out;
    int position = 0;
    for (int g = 0; g < 2 * n_; ++g) {
      const Mask bit = Mask{1} << g;
      if (!(m & bit)) continue;
      const Mask before = m & (bit - 1), after = m & ~(bit | (bit - 1));
      Form term = wedge(wedge(monomial(before), gen_d_[static_cast<std::size_t>(g)]), monomial(after));
      const int sign = position % 2 == 0 ? 1 : -1;
      for (auto& [mm, c] : term) detail::add_term(out, mm, c * sign);
      ++position;
    }
    return out;
  }

  Form d(const Form& f) const {
    Form out;
    for (const auto& [m, c] : f)
      for (const auto& [mm, cc] : d_monomial(m)) detail::add_term(out, mm, c * cc);
    return out;
  }

  /// Bidegree (dp,dq) part of d, as a matrix from basis(p,q) to basis(p+dp,q+dq).
  RatMatrix d_part(int p, int q, int dp, int dq) const {
    const auto& src = basis(p, q);
    const auto& tgt = basis(p + dp, q + dq);
    RatMatrix m(tgt.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j)
      for (const auto& [mm, c] : d_monomial(src[j]))
        if (bidegree(mm) == Bidegree{p + dp, q + dq}) m(index(mm), j) = c;
    return m;
  }

  Rational integral(const Form& f) const {
    auto it = f.find(top());
    return it == f.end() ? Rational(0) : it->second;
  }

 private:
  int n_;
  std::map<Bidegree, std::vector<Mask>> basis_;
  std::map<Mask, std::size_t> index_;
  std::vector<Form> gen_d_;
};

/// Where a model basis vector sits in the exterior algebra: ±(copy, monomial).
struct FrameEntry {
  std::size_t copy;
  Mask mask;
  int sign;
};

using Frame = std::map<Bidegree, std::vector<FrameEntry>>;

/// How a model was built, for serialization: a Lie spec or a product.
struct ModelRecipe {
  std::optional<LieModelSpec> lie;
  std::vector<ModelRecipe> factors;
};

struct ModelDoubleComplex {
  int n = 0;
  std::size_t twist_rank = 1;
  LieModelSpec structure;  // flat structure constants of the underlying algebra
  std::shared_ptr<const ExteriorAlgebra> algebra;
  DoubleComplex base;         // twisted by the trivial rank-twist_rank system
  DoubleComplex scalar_base;  // rank 1
  Frame frame;
  Frame scalar_frame;
  std::map<Bidegree, std::vector<std::string>> basis_labels;
  ModelRecipe recipe;

  const Frame& frame_for(std::size_t rank) const {
    if (rank == twist_rank) return frame;
    if (rank == 1) return scalar_frame;
    fail(ErrorKind::PreconditionViolation, "element rank must be 1 or the model twist rank");
  }

  const DoubleComplex& base_for(std::size_t rank) const { return rank == twist_rank ? base : (rank == 1 ? scalar_base : base); }
};

namespace detail {

inline std::map<Bidegree, std::vector<std::string>> labels_from_frame(const ExteriorAlgebra& alg, const Frame& frame, std::size_t rank) {
  std::map<Bidegree, std::vector<std::string>> out;
  for (const auto& [pq, entries] : frame)
    for (const auto& e : entries) {
      std::string l = alg.label(e.mask);
      if (e.sign < 0) l = "-" + l;
      if (rank > 1) l = "c" + std::to_string(e.copy) + ":" + l;
      out[pq].push_back(l);
    }
  return out;
}

inline Frame copy_major_frame(const ExteriorAlgebra& alg, std::size_t rank) {
  Frame f;
  for (int p = 0; p <= alg.n(); ++p)
    for (int q = 0; q <= alg.n(); ++q) {
      auto& list = f[{p, q}];
      for (std::size_t c = 0; c < rank; ++c)
        for (Mask m : alg.basis(p, q)) list.push_back({c, m, 1});
    }
  return f;
}

inline DoubleComplex lie_bicomplex(const ExteriorAlgebra& alg, std::size_t rank) {
  const int n = alg.n();
  std::map<Bidegree, std::size_t> dims;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) dims[{p, q}] = rank * alg.basis(p, q).size();
  DoubleComplex k(Support{0, n, 0, n}, dims);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      std::vector<RatMatrix> d1(rank, alg.d_part(p, q, 1, 0)), d2(rank, alg.d_part(p, q, 0, 1));
      k.set_d1(p, q, block_diagonal(d1));
      k.set_d2(p, q, block_diagonal(d2));
    }
  k.validate();
  return k;
}

}  // namespace detail

inline ModelDoubleComplex lie_model(const LieModelSpec& spec) {
  if (spec.twist_rank < 1) fail(ErrorKind::ValidationError, "twist rank must be positive");
  ModelDoubleComplex m;
  m.n = spec.n;
  m.twist_rank = spec.twist_rank;
  m.structure = spec;
  m.algebra = std::make_shared<const ExteriorAlgebra>(spec);
  m.base = detail::lie_bicomplex(*m.algebra, spec.twist_rank);
  m.scalar_base = spec.twist_rank == 1 ? m.base : detail::lie_bicomplex(*m.algebra, 1);
  m.frame = detail::copy_major_frame(*m.algebra, spec.twist_rank);
  m.scalar_frame = detail::copy_major_frame(*m.algebra, 1);
  m.basis_labels = detail::labels_from_frame(*m.algebra, m.frame, spec.twist_rank);
  m.recipe.lie = spec;
  return m;
}

inline ModelDoubleComplex torus_model(int n, std::size_t twist_rank = 1) {
  if (n < 1) fail(ErrorKind::PreconditionViolation, "torus model needs n >= 1");
  return lie_model(torus_spec(n, twist_rank));
}

inline ModelDoubleComplex point_model() { return lie_model(torus_spec(0, 1)); }

/// Homogeneous element of bidegree (p,q) in the model basis; `rank` copies.
struct Element {
  int p = 0, q = 0;
  std::size_t rank = 1;
  std::vector<Rational> coords;
};

/// Per-copy forms of an element.
inline std::vector<Form> to_forms(const ModelDoubleComplex& s, const Element& e) {
  const auto& entries = s.frame_for(e.rank).at({e.p, e.q});
  if (entries.size() != e.coords.size()) fail(ErrorKind::ValidationError, "element has the wrong number of coordinates");
  std::vector<Form> out(e.rank);
  for (std::size_t i = 0; i < entries.size(); ++i) detail::add_term(out[entries[i].copy], entries[i].mask, e.coords[i] * entries[i].sign);
  return out;
}

inline Element from_forms(const ModelDoubleComplex& s, int p, int q, const std::vector<Form>& forms) {
  Element e{p, q, forms.size(), {}};
  const auto& alg = *s.algebra;
  for (const auto& f : forms)
    for (const auto& [m, c] : f)
      if (alg.bidegree(m) != Bidegree{p, q}) fail(ErrorKind::ValidationError, "form is not of bidegree (" + bidegree_key(p, q) + ")");
  if (p < 0 || q < 0 || p > s.n || q > s.n) return e;
  const auto& entries = s.frame_for(e.rank).at({p, q});
  for (const auto& entry : entries) {
    auto it = forms[entry.copy].find(entry.mask);
    e.coords.push_back(it == forms[entry.copy].end() ? Rational(0) : it->second * entry.sign);
  }
  return e;
}

inline Element scalar_element(const ModelDoubleComplex& s, int p, int q, const Form& f) { return from_forms(s, p, q, {f}); }

inline Element basis_element(const ModelDoubleComplex& s, int p, int q, std::size_t i, std::size_t rank) {
  Element e{p, q, rank, std::vector<Rational>(s.frame_for(rank).at({p, q}).size(), Rational(0))};
  e.coords.at(i) = 1;
  return e;
}

/// α∧β; copy (i,j) of the result is α_i∧β_j, indexed i·rank(β)+j.
/// Vanishes above bidegree (n,n).
inline Element wedge(const ModelDoubleComplex& s, const Element& a, const Element& b) {
  const std::size_t rank = a.rank * b.rank;
  Element out{a.p + b.p, a.q + b.q, rank, {}};
  s.frame_for(rank);
  if (out.p > s.n || out.q > s.n) return out;
  std::vector<Form> fa = to_forms(s, a), fb = to_forms(s, b), prod;
  for (const auto& x : fa)
    for (const auto& y : fb) prod.push_back(ExteriorAlgebra::wedge(x, y));
  return from_forms(s, out.p, out.q, prod);
}

inline Element apply_d1(const ModelDoubleComplex& s, const Element& e) {
  Element out{e.p + 1, e.q, e.rank, {}};
  if (out.p > s.n) return out;
  out.coords = s.base_for(e.rank).d1(e.p, e.q).apply(e.coords);
  return out;
}

inline Element apply_d2(const ModelDoubleComplex& s, const Element& e) {
  Element out{e.p, e.q + 1, e.rank, {}};
  if (out.q > s.n) return out;
  out.coords = s.base_for(e.rank).d2(e.p, e.q).apply(e.coords);
  return out;
}

inline bool is_zero(const Element& e) {
  return std::all_of(e.coords.begin(), e.coords.end(), [](const Rational& c) { return c == 0; });
}

/// Coefficient of the top monomial, per copy.
inline std::vector<Rational> integral(const ModelDoubleComplex& s, const Element& e) {
  std::vector<Rational> out;
  for (const auto& f : to_forms(s, e)) out.push_back(s.algebra->integral(f));
  return out;
}

/// The integral vanishes on d of every form of total degree 2n-1.
inline void check_stokes(const ModelDoubleComplex& s) {
  const auto& alg = *s.algebra;
  for (int p = 0; p <= s.n; ++p) {
    const int q = 2 * s.n - 1 - p;
    for (Mask m : alg.basis(p, q))
      if (alg.integral(alg.d_monomial(m)) != 0)
        fail(ErrorKind::IntegralNotClosed, "integral of d(" + alg.label(m) + ") is nonzero");
  }
}

namespace detail {

/// (copy, mask) → (index, sign) at one bidegree.
inline std::map<std::pair<std::size_t, Mask>, std::pair<std::size_t, int>> invert(const std::vector<FrameEntry>& entries) {
  std::map<std::pair<std::size_t, Mask>, std::pair<std::size_t, int>> out;
  for (std::size_t i = 0; i < entries.size(); ++i) out[{entries[i].copy, entries[i].mask}] = {i, entries[i].sign};
  return out;
}

}  // namespace detail

/// β ↦ β∧α from truncate(S,(s,t)) to truncate(S,(s+a,t+a))[a,b] for a closed
/// scalar α of bidegree (a,b).
inline BicomplexMap cup_map(const ModelDoubleComplex& s, const Element& alpha, TruncationSpec spec) {
  if (alpha.rank != 1) fail(ErrorKind::PreconditionViolation, "cup_map needs a scalar form");
  if (!is_zero(apply_d1(s, alpha)) || !is_zero(apply_d2(s, alpha)))
    fail(ErrorKind::NotClosed, "cup_map: the form is not d-closed");
  const int a = alpha.p, b = alpha.q;
  DoubleComplex source = truncate(s.base, spec);
  DoubleComplex target = shift2(truncate(s.base, {spec.s + a, spec.t + a}), a, b);
  const Form fa = to_forms(s, alpha)[0];
  std::map<Bidegree, RatMatrix> mats;
  for (int p = std::max(0, spec.s); p <= std::min(s.n, spec.t); ++p)
    for (int q = 0; q <= s.n; ++q) {
      if (p + a > s.n || q + b > s.n || source.dim(p, q) == 0) continue;
      const auto& src = s.frame.at({p, q});
      auto tgt = detail::invert(s.frame.at({p + a, q + b}));
      RatMatrix m(target.dim(p, q), source.dim(p, q));
      for (std::size_t i = 0; i < src.size(); ++i)
        for (const auto& [mask, c] : fa) {
          const int w = ExteriorAlgebra::wedge_sign(src[i].mask, mask);
          if (w == 0) continue;
          auto [row, sign] = tgt.at({src[i].copy, src[i].mask | mask});
          m(row, i) += c * w * src[i].sign * sign;
        }
      mats[{p, q}] = std::move(m);
    }
  return {std::move(source), std::move(target), std::move(mats)};
}

/// dim (ker d1 ∩ ker d2)^{p,q} − rank(d1 d2 from (p−1,q−1)).
inline std::size_t bott_chern_dim(const ModelDoubleComplex& s, int p, int q) {
  const DoubleComplex& k = s.base;
  if (k.dim(p, q) == 0) return 0;
  const std::size_t closed = kernel_basis(vstack(k.d1(p, q), k.d2(p, q))).cols();
  return closed - rank(k.d1(p - 1, q) * k.d2(p - 1, q - 1));
}

/// α ↦ Σ_c ∫ α_c ∧ (•)_c, from truncate(S,(s,t)) to the shifted dual of
/// truncate(S,(n−t,n−s)).
inline BicomplexMap duality_map(const ModelDoubleComplex& s, TruncationSpec spec) {
  check_stokes(s);
  const int n = s.n;
  DoubleComplex source = truncate(s.base, spec);
  DoubleComplex target = shift2(dual2(truncate(s.base, {n - spec.t, n - spec.s})), -n, -n);
  const Mask top = s.algebra->top();
  std::map<Bidegree, RatMatrix> mats;
  for (int p = std::max(0, spec.s); p <= std::min(n, spec.t); ++p)
    for (int q = 0; q <= n; ++q) {
      if (source.dim(p, q) == 0 || target.dim(p, q) == 0) continue;
      const auto& alpha = s.frame.at({p, q});
      const auto& beta = s.frame.at({n - p, n - q});
      RatMatrix m(beta.size(), alpha.size());
      for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::size_t j = 0; j < beta.size(); ++j) {
          if (alpha[i].copy != beta[j].copy || (alpha[i].mask | beta[j].mask) != top) continue;
          const int w = ExteriorAlgebra::wedge_sign(alpha[i].mask, beta[j].mask);
          m(j, i) = w * alpha[i].sign * beta[j].sign;
        }
      mats[{p, q}] = std::move(m);
    }
  return {std::move(source), std::move(target), std::move(mats)};
}

namespace detail {

/// Structure constants of X×Y on generators (X holo, Y holo, X anti, Y anti).
inline LieModelSpec combined_spec(const LieModelSpec& x, const LieModelSpec& y) {
  LieModelSpec out{x.n + y.n, x.twist_rank * y.twist_rank, {}};
  auto relabel = [](const std::string& label, int offset) {
    const bool anti = !label.empty() && label[0] == 'b';
    const int i = std::stoi(anti ? label.substr(1) : label) + offset;
    return (anti ? "b" : "") + std::to_string(i);
  };
  for (const auto& [i, terms] : x.d)
    for (const auto& t : terms) out.d[i].push_back({relabel(t.left, 0), relabel(t.right, 0), t.coeff});
  for (const auto& [i, terms] : y.d)
    for (const auto& t : terms) out.d[i + x.n].push_back({relabel(t.left, x.n), relabel(t.right, x.n), t.coeff});
  return out;
}

inline Mask embed(Mask m, int n_self, int n_total, int offset) {
  Mask out = 0;
  for (int g = 0; g < 2 * n_self; ++g)
    if (m & (Mask{1} << g)) {
      const int target = g < n_self ? offset + g : n_total + offset + (g - n_self);
      out |= Mask{1} << target;
    }
  return out;
}

/// Frame of ss(X⊗Y): summand x⊗y ↦ pr_1^*x ∧ pr_2^*y, copy cX·rank(Y)+cY.
inline Frame product_frame(const ModelDoubleComplex& x, const ModelDoubleComplex& y, const DoubleComplex& kx, const Frame& fx,
                           const DoubleComplex& ky, const Frame& fy, std::size_t rank_y) {
  const int n = x.n + y.n;
  QuadComplex quad = quad_tensor(kx, ky);
  CollapseLayout layout(quad);
  Frame out;
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) {
      std::vector<FrameEntry> entries(layout.dim(k, l));
      for (const auto& summand : layout.at(k, l)) {
        if (summand.dim == 0) continue;
        const auto [p, q, r, s] = summand.degree;
        const auto& ex = fx.at({p, r});
        const auto& ey = fy.at({q, s});
        for (std::size_t i = 0; i < ex.size(); ++i)
          for (std::size_t j = 0; j < ey.size(); ++j) {
            const Mask a = embed(ex[i].mask, x.n, n, 0), b = embed(ey[j].mask, y.n, n, x.n);
            entries[summand.offset + i * ey.size() + j] = {ex[i].copy * rank_y + ey[j].copy, a | b,
                                                          ex[i].sign * ey[j].sign * ExteriorAlgebra::wedge_sign(a, b)};
          }
      }
      out[{k, l}] = std::move(entries);
    }
  return out;
}

/// The frame as a map of bicomplexes into the flat model; must be an isomorphism.
inline void verify_frame(const DoubleComplex& k, const Frame& frame, const ModelDoubleComplex& flat, std::size_t rank) {
  const Frame& target_frame = flat.frame_for(rank);
  const DoubleComplex& target = flat.base_for(rank);
  std::map<Bidegree, RatMatrix> mats;
  for (const auto& [pq, entries] : frame) {
    auto inv = invert(target_frame.at(pq));
    RatMatrix m(target.dim(pq.first, pq.second), entries.size());
    if (m.rows() != m.cols()) fail(ErrorKind::WitnessFailure, "product frame: dimension mismatch at (" + bidegree_key(pq.first, pq.second) + ")");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto [row, sign] = inv.at({entries[i].copy, entries[i].mask});
      m(row, i) = entries[i].sign * sign;
    }
    if (spectra::rank(m) != m.rows()) fail(ErrorKind::WitnessFailure, "product frame is not bijective");
    mats[pq] = std::move(m);
  }
  try {
    BicomplexMap check(k, target, std::move(mats));
  } catch (const Error& e) {
    fail(ErrorKind::WitnessFailure, std::string("product frame is not a bicomplex map: ") + e.what());
  }
}

}  // namespace detail

/// ss(X⊗Y) with the wedge and integral of X×Y.
inline ModelDoubleComplex product_model(const ModelDoubleComplex& x, const ModelDoubleComplex& y) {
  ModelDoubleComplex m;
  m.n = x.n + y.n;
  m.twist_rank = x.twist_rank * y.twist_rank;
  m.structure = detail::combined_spec(x.structure, y.structure);
  ModelDoubleComplex flat = lie_model(m.structure);
  m.algebra = flat.algebra;
  m.base = ss_collapse(quad_tensor(x.base, y.base));
  m.scalar_base = ss_collapse(quad_tensor(x.scalar_base, y.scalar_base));
  m.frame = detail::product_frame(x, y, x.base, x.frame, y.base, y.frame, y.twist_rank);
  m.scalar_frame = detail::product_frame(x, y, x.scalar_base, x.scalar_frame, y.scalar_base, y.scalar_frame, 1);
  detail::verify_frame(m.base, m.frame, flat, m.twist_rank);
  detail::verify_frame(m.scalar_base, m.scalar_frame, flat, 1);
  m.basis_labels = detail::labels_from_frame(*m.algebra, m.frame, m.twist_rank);
  m.recipe.factors = {x.recipe, y.recipe};
  return m;
}

inline std::size_t model_hypercohomology(const ModelDoubleComplex& s, TruncationSpec spec, int k) {
  return hypercohomology(s.base, spec, k);
}

/// Σ over a+b=c, u+w=s, v+w=t of ℍ^a(X,[u,v]) · ℍ^b(Y,[w,w]).
inline std::size_t kunneth_predict(const ModelDoubleComplex& x, const ModelDoubleComplex& y, int c, TruncationSpec spec) {
  if (c < 0) return 0;
  std::size_t total = 0;
  for (int w = 0; w <= y.n; ++w)
    for (int a = 0; a <= c; ++a) {
      const std::size_t hy = model_hypercohomology(y, {w, w}, c - a);
      if (hy == 0) continue;
      total += model_hypercohomology(x, {spec.s - w, spec.t - w}, a) * hy;
    }
  return total;
}

/// Σ_i ℍ^{k−u_i−v_i}(X,[s−u_i,t−u_i]).
inline std::size_t leray_hirsch_predict(const ModelDoubleComplex& x, const std::vector<Bidegree>& degrees, int k, TruncationSpec spec) {
  std::size_t total = 0;
  for (auto [u, v] : degrees) total += model_hypercohomology(x, {spec.s - u, spec.t - u}, k - u - v);
  return total;
}

inline std::size_t projective_bundle_predict(const ModelDoubleComplex& x, int r, int k, TruncationSpec spec) {
  if (r < 1) fail(ErrorKind::PreconditionViolation, "projective bundle rank must be at least 1");
  std::size_t total = 0;
  for (int i = 0; i < r; ++i) total += model_hypercohomology(x, {spec.s - i, spec.t - i}, k - 2 * i);
  return total;
}

/// Center and ambient dimensions fit a codimension-r blowup.
inline bool blowup_dimensions_consistent(const ModelDoubleComplex& x, const ModelDoubleComplex& y, int r) { return y.n + r == x.n; }

inline std::size_t blowup_predict(const ModelDoubleComplex& x, const ModelDoubleComplex& y, int r, int k, TruncationSpec spec) {
  if (r < 2) fail(ErrorKind::PreconditionViolation, "blowup codimension must be at least 2");
  std::size_t total = model_hypercohomology(x, spec, k);
  for (int i = 1; i < r; ++i) total += model_hypercohomology(y, {spec.s - i, spec.t - i}, k - 2 * i);
  return total;
}

/// Σ_{p+q=k, s≤p≤t} h^{p,q}.
inline std::size_t hodge_sum(const ModelDoubleComplex& x, TruncationSpec spec, int k) {
  std::size_t total = 0;
  for (int p = std::max(0, spec.s); p <= std::min(x.n, spec.t); ++p) total += cohomology_dim(row(x.base, p), k - p);
  return total;
}

struct DegenerationReport {
  std::vector<bool> windows;  // E_1-degeneration of each window
  bool all_windows = true;
  bool aggregate = true;      // degeneration predicted for the total space
  Report report;

  bool biconditional() const { return aggregate == all_windows; }
};

namespace detail {

inline DegenerationReport degeneration_report(std::string name, const std::vector<std::pair<const ModelDoubleComplex*, std::pair<TruncationSpec, int>>>& parts) {
  DegenerationReport out;
  out.report.name = std::move(name);
  int max_k = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& [model, window] = parts[i];
    const bool degenerate = degenerates_at_E1(truncate(model->base, window.first));
    out.windows.push_back(degenerate);
    out.all_windows = out.all_windows && degenerate;
    out.report.add("window degenerates", std::to_string(i), degenerate ? 1 : 0, 1, true);
    max_k = std::max(max_k, 2 * model->n + 2 * window.second);
  }
  for (int k = 0; k <= max_k; ++k) {
    long b = 0, h = 0;
    for (const auto& [model, window] : parts) {
      b += static_cast<long>(model_hypercohomology(*model, window.first, k - 2 * window.second));
      h += static_cast<long>(hodge_sum(*model, window.first, k - 2 * window.second));
    }
    out.report.add("aggregate b^k vs sum h", std::to_string(k), b, h, b <= h);
    if (b != h) out.aggregate = false;
  }
  out.report.add("aggregate iff all windows", "all", out.aggregate ? 1 : 0, out.all_windows ? 1 : 0);
  return out;
}

}  // namespace detail

/// Windows (s−i,t−i), i = 0..r−1, against the projective bundle aggregate.
inline DegenerationReport degeneration_equivalence(const ModelDoubleComplex& x, int r, TruncationSpec spec) {
  if (r < 1) fail(ErrorKind::PreconditionViolation, "projective bundle rank must be at least 1");
  if (spec.s > spec.t) fail(ErrorKind::PreconditionViolation, "degeneration equivalence needs s <= t");
  std::vector<std::pair<const ModelDoubleComplex*, std::pair<TruncationSpec, int>>> parts;
  for (int i = 0; i < r; ++i) parts.push_back({&x, {{spec.s - i, spec.t - i}, i}});
  return detail::degeneration_report("projective_degeneration", parts);
}

/// X window (s,t) and Y windows (s−i,t−i), i = 1..r−1, against the blowup aggregate.
inline DegenerationReport blowup_degeneration_equivalence(const ModelDoubleComplex& x, const ModelDoubleComplex& y, int r, TruncationSpec spec) {
  if (r < 2) fail(ErrorKind::PreconditionViolation, "blowup codimension must be at least 2");
  std::vector<std::pair<const ModelDoubleComplex*, std::pair<TruncationSpec, int>>> parts{{&x, {spec, 0}}};
  for (int i = 1; i < r; ++i) parts.push_back({&y, {{spec.s - i, spec.t - i}, i}});
  return detail::degeneration_report("blowup_degeneration", parts);
}

/// Σ_{i<r} dim F^{p−i} H^{k−2i}(X), clamped to [0, n+1].
inline std::size_t hodge_filtration_projective_predict(const ModelDoubleComplex& x, int r, int k, int p) {
  if (r < 1) fail(ErrorKind::PreconditionViolation, "projective bundle rank must be at least 1");
  std::size_t total = 0;
  for (int i = 0; i < r; ++i) {
    if (k - 2 * i < 0) continue;
    std::vector<std::size_t> f = hodge_filtration_dims(x.base, k - 2 * i);
    const int idx = std::clamp(p - i, 0, x.n + 1);
    total += f[static_cast<std::size_t>(idx)];
  }
  return total;
}

}  // namespace spectra
