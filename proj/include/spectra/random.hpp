#pragma once

// Seeded generators for property suites.
//
// Every bounded complex over a field splits into indecomposables: dots and
// arrows for cochain complexes; dots, squares and zigzags for double
// complexes. Generators sum random indecomposables and then conjugate by
// random invertible matrices, so every isomorphism type within the size
// bounds can occur while the axioms hold by construction.

#include <cstdint>
#include <random>
#include <vector>

#include "spectra/bicomplex.hpp"

namespace spectra {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  int uniform(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

  bool coin() { return (engine_() & 1u) != 0; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Product of random elementary matrices and sign/scale changes; always invertible.
inline RatMatrix random_invertible(Rng& rng, std::size_t n) {
  RatMatrix m = RatMatrix::identity(n);
  if (n == 0) return m;
  static const int scales[] = {1, -1, 2, -2};
  for (std::size_t i = 0; i < n; ++i) m(i, i) = scales[rng.uniform(0, 3)];
  for (std::size_t step = 0; step < 2 * n; ++step) {
    auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 1));
    auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 1));
    if (i == j) continue;
    int c = rng.uniform(-2, 2);
    if (c == 0) continue;
    for (std::size_t col = 0; col < n; ++col) m(i, col) += c * m(j, col);
  }
  return m;
}

inline RatMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int bound = 3) {
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  return m;
}

struct RandomComplexOptions {
  int max_dim = 4;
  int max_span = 6;
  int min_lo = -3;
  int max_lo = 3;
};

inline CochainComplex random_cochain_complex(Rng& rng, const RandomComplexOptions& opt = {}) {
  const int span = rng.uniform(1, opt.max_span);
  const int lo = rng.uniform(opt.min_lo, opt.max_lo);
  const int hi = lo + span - 1;
  std::vector<std::size_t> dims(static_cast<std::size_t>(span), 0);
  // arrows[i]: number of arrows from degree lo+i to lo+i+1
  std::vector<std::size_t> arrows(static_cast<std::size_t>(span), 0), dots(static_cast<std::size_t>(span), 0);
  const int pieces = rng.uniform(0, 3 * span);
  for (int n = 0; n < pieces; ++n) {
    auto i = static_cast<std::size_t>(rng.uniform(0, span - 1));
    bool arrow = rng.coin() && i + 1 < dims.size();
    if (arrow) {
      if (dims[i] + 1 > static_cast<std::size_t>(opt.max_dim) || dims[i + 1] + 1 > static_cast<std::size_t>(opt.max_dim)) continue;
      ++arrows[i];
      ++dims[i];
      ++dims[i + 1];
    } else {
      if (dims[i] + 1 > static_cast<std::size_t>(opt.max_dim)) continue;
      ++dots[i];
      ++dims[i];
    }
  }
  // Basis of degree i: [targets of arrows from i-1][dots][sources of arrows to i+1].
  std::vector<RatMatrix> diffs;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    RatMatrix d(i + 1 < dims.size() ? dims[i + 1] : 0, dims[i]);
    if (i + 1 < dims.size()) {
      std::size_t src0 = (i > 0 ? arrows[i - 1] : 0) + dots[i];
      for (std::size_t a = 0; a < arrows[i]; ++a) d(a, src0 + a) = 1;
    }
    diffs.push_back(std::move(d));
  }
  std::vector<RatMatrix> g, ginv;
  for (auto n : dims) {
    g.push_back(random_invertible(rng, n));
    ginv.push_back(*inverse(g.back()));
  }
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) diffs[i] = g[i + 1] * diffs[i] * ginv[i];
  return {lo, hi, dims, diffs};
}

struct RandomBicomplexOptions {
  int max_width = 4;
  int max_height = 4;
  int max_dim = 3;
  int min_origin = -2;
  int max_origin = 2;
};

namespace detail {

struct Piece {
  std::vector<Bidegree> vertices;
  // (from vertex, to vertex, is_d1, coefficient)
  struct Edge {
    std::size_t from, to;
    bool d1;
    int coeff;
  };
  std::vector<Edge> edges;
};

inline Piece random_piece(Rng& rng, int p, int q) {
  Piece piece;
  switch (rng.uniform(0, 4)) {
    case 0:  // dot
      piece.vertices = {{p, q}};
      break;
    case 1:  // square
      piece.vertices = {{p, q}, {p + 1, q}, {p, q + 1}, {p + 1, q + 1}};
      piece.edges = {{0, 1, true, 1}, {0, 2, false, 1}, {1, 3, false, 1}, {2, 3, true, -1}};
      break;
    default: {  // zigzag: ... t_{i-1} <-d2- s_i -d1-> t_i <-d2- s_{i+1} ...
      const int start = rng.uniform(0, 1);
      const int length = rng.uniform(2, 5);
      auto position = [&](int j) -> Bidegree {
        int i = j / 2;
        if (j % 2 == 0) return {p + i, q - i};
        return {p + i + 1, q - i};
      };
      for (int j = start; j < start + length; ++j) piece.vertices.push_back(position(j));
      for (int j = start; j + 1 < start + length; ++j) {
        auto a = static_cast<std::size_t>(j - start);
        if (j % 2 == 0)
          piece.edges.push_back({a, a + 1, true, 1});
        else
          piece.edges.push_back({a + 1, a, false, 1});
      }
      break;
    }
  }
  return piece;
}

}  // namespace detail

inline DoubleComplex random_double_complex(Rng& rng, const RandomBicomplexOptions& opt = {}) {
  const int width = rng.uniform(1, opt.max_width), height = rng.uniform(1, opt.max_height);
  const int p0 = rng.uniform(opt.min_origin, opt.max_origin), q0 = rng.uniform(opt.min_origin, opt.max_origin);
  Support support{p0, p0 + width - 1, q0, q0 + height - 1};

  std::map<Bidegree, std::size_t> dims;
  struct Placed {
    detail::Piece piece;
    std::vector<std::size_t> slots;  // basis index of each vertex in its bidegree
  };
  std::vector<Placed> placed;
  const int attempts = rng.uniform(0, 3 * width * height);
  for (int n = 0; n < attempts; ++n) {
    auto piece = detail::random_piece(rng, rng.uniform(support.p0, support.p1), rng.uniform(support.q0, support.q1));
    bool fits = true;
    std::map<Bidegree, std::size_t> need;
    for (auto v : piece.vertices) {
      if (!support.contains(v.first, v.second)) fits = false;
      ++need[v];
    }
    for (auto& [v, c] : need)
      if (dims[v] + c > static_cast<std::size_t>(opt.max_dim)) fits = false;
    if (!fits) continue;
    Placed pl{piece, {}};
    for (auto v : piece.vertices) pl.slots.push_back(dims[v]++);
    placed.push_back(std::move(pl));
  }

  DoubleComplex k(support, dims);
  std::map<Bidegree, RatMatrix> d1, d2;
  for (int p = support.p0; p <= support.p1; ++p)
    for (int q = support.q0; q <= support.q1; ++q) {
      d1[{p, q}] = k.d1(p, q);
      d2[{p, q}] = k.d2(p, q);
    }
  for (const auto& pl : placed)
    for (const auto& e : pl.piece.edges) {
      auto from = pl.piece.vertices[e.from];
      auto& m = e.d1 ? d1[from] : d2[from];
      m(pl.slots[e.to], pl.slots[e.from]) = e.coeff;
    }
  std::map<Bidegree, RatMatrix> g, ginv;
  for (int p = support.p0 - 1; p <= support.p1 + 1; ++p)
    for (int q = support.q0 - 1; q <= support.q1 + 1; ++q) {
      g[{p, q}] = random_invertible(rng, k.dim(p, q));
      ginv[{p, q}] = *inverse(g[{p, q}]);
    }
  for (int p = support.p0; p <= support.p1; ++p)
    for (int q = support.q0; q <= support.q1; ++q) {
      k.set_d1(p, q, g[{p + 1, q}] * d1[{p, q}] * ginv[{p, q}]);
      k.set_d2(p, q, g[{p, q + 1}] * d2[{p, q}] * ginv[{p, q}]);
    }
  k.validate();
  return k;
}

/// f: L ⊕ M -> L, c times the projection, for random L, M and c in {1,2,3}.
inline ChainMap random_chain_map(Rng& rng, const RandomComplexOptions& opt = {}) {
  CochainComplex l = random_cochain_complex(rng, opt);
  CochainComplex extra = random_cochain_complex(rng, opt);
  CochainComplex parts[] = {l, extra};
  CochainComplex k = direct_sum(parts);
  std::map<int, RatMatrix> mats;
  Rational c = rng.uniform(1, 3);
  for (int d = k.lo(); d <= k.hi(); ++d) {
    RatMatrix m(l.dim(d), k.dim(d));
    for (std::size_t i = 0; i < l.dim(d); ++i) m(i, i) = c;
    mats[d] = std::move(m);
  }
  return {k, l, std::move(mats)};
}

}  // namespace spectra
