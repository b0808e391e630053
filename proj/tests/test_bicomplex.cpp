#include <gtest/gtest.h>

#include "spectra/bicomplex.hpp"
#include "spectra/random.hpp"

using namespace spectra;

namespace {

// One square: a at (0,0), b at (1,0), c at (0,1), e at (1,1).
DoubleComplex square() {
  DoubleComplex k(Support{0, 1, 0, 1}, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 1}});
  k.set_d1(0, 0, RatMatrix{{1}});
  k.set_d2(0, 0, RatMatrix{{1}});
  k.set_d2(1, 0, RatMatrix{{1}});
  k.set_d1(0, 1, RatMatrix{{-1}});
  k.validate();
  return k;
}

}  // namespace

TEST(DoubleComplexTest, RejectsCommutingSquare) {
  DoubleComplex k(Support{0, 1, 0, 1}, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 1}});
  k.set_d1(0, 0, RatMatrix{{1}});
  k.set_d2(0, 0, RatMatrix{{1}});
  k.set_d2(1, 0, RatMatrix{{1}});
  k.set_d1(0, 1, RatMatrix{{1}});
  try {
    k.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
    EXPECT_NE(std::string(e.what()).find("anticommutation"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("0,0"), std::string::npos);
  }
}

TEST(DoubleComplexTest, RejectsBadShapes) {
  DoubleComplex k(Support{0, 1, 0, 0}, {{{0, 0}, 1}, {{1, 0}, 2}});
  EXPECT_THROW(k.set_d1(0, 0, RatMatrix{{1}}), Error);
  EXPECT_THROW(DoubleComplex(Support{0, 0, 0, 0}, {{{3, 3}, 1}}), Error);
}

TEST(Total, SquareIsAcyclic) {
  CochainComplex t = total(square());
  EXPECT_EQ(t.lo(), 0);
  EXPECT_EQ(t.hi(), 2);
  EXPECT_EQ(t.dim(1), 2u);
  for (int d = -1; d <= 3; ++d) EXPECT_EQ(cohomology_dim(t, d), 0u);
  // Summands in degree 1 are ordered by p: (0,1) first, then (1,0).
  EXPECT_EQ(t.diff(0), (RatMatrix{{1}, {1}}));
  EXPECT_EQ(t.diff(1), (RatMatrix{{-1, 1}}));
}

TEST(Total, DimsAreBidegreeSums) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    DoubleComplex k = random_double_complex(rng);
    CochainComplex t = total(k);
    std::size_t sum = 0;
    for (int d = t.lo(); d <= t.hi(); ++d) sum += t.dim(d);
    EXPECT_EQ(sum, k.total_dimension());
    for (int d = k.min_total_degree() - 1; d <= k.max_total_degree() + 1; ++d) {
      std::size_t expected = 0;
      for (int p = k.support().p0; p <= k.support().p1; ++p) expected += k.dim(p, d - p);
      EXPECT_EQ(t.dim(d), expected);
    }
  }
}

TEST(Shift2, Examples) {
  DoubleComplex k = square();
  EXPECT_EQ(shift2(k, 0, 0), k);
  DoubleComplex s = shift2(k, 1, -2);
  EXPECT_EQ(s.support(), (Support{-1, 0, 2, 3}));
  EXPECT_EQ(s.d1(-1, 3), RatMatrix{{-1}});
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    DoubleComplex r = random_double_complex(rng);
    int m = rng.uniform(-3, 3), n = rng.uniform(-3, 3);
    EXPECT_EQ(shift2(shift2(r, m, n), -m, -n), r);
    CochainComplex t = total(shift2(r, m, n));
    for (int d = -12; d <= 12; ++d) EXPECT_EQ(cohomology_dim(t, d), cohomology_dim(total(r), d + m + n));
  }
}

TEST(Dual2, AnticommutesAndReversesBidegrees) {
  DoubleComplex d = dual2(square());
  EXPECT_NO_THROW(d.validate());
  EXPECT_EQ(d.support(), (Support{-1, 0, -1, 0}));
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    DoubleComplex k = random_double_complex(rng);
    DoubleComplex kd = dual2(k);
    EXPECT_NO_THROW(kd.validate());
    for (int p = -5; p <= 5; ++p)
      for (int q = -5; q <= 5; ++q) EXPECT_EQ(kd.dim(p, q), k.dim(-p, -q));
  }
}

TEST(Dual2, TotalDualWitness) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    DoubleComplex k = random_double_complex(rng);
    BicomplexWitness w = verify_total_dual_iso(k);
    CochainComplex lhs = dual(total(k)), rhs = total(dual2(k));
    for (int d = lhs.lo(); d <= lhs.hi(); ++d) {
      EXPECT_EQ(w.map.mat(d).rows(), rhs.dim(d));
      EXPECT_EQ(rank(w.map.mat(d)), lhs.dim(d));
      EXPECT_EQ(cohomology_dim(lhs, d), cohomology_dim(rhs, d));
    }
  }
}

TEST(Row, IsTheVerticalComplex) {
  DoubleComplex k = square();
  CochainComplex r = row(k, 0);
  EXPECT_EQ(r.lo(), 0);
  EXPECT_EQ(r.diff(0), RatMatrix{{1}});
  EXPECT_TRUE(row(k, 7).is_empty_range());
}

TEST(BicomplexMapTest, IdentityAndRejection) {
  DoubleComplex k = square();
  ChainMap t = total_map(BicomplexMap::identity(k));
  for (int d = 0; d <= 2; ++d) EXPECT_EQ(t.mat(d), RatMatrix::identity(total(k).dim(d)));
  std::map<Bidegree, RatMatrix> only_corner{{{0, 0}, RatMatrix{{1}}}};
  try {
    BicomplexMap(k, k, only_corner);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotChainCompatible);
  }
}

TEST(BicomplexMapTest, TotalMapIsFunctorial) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    DoubleComplex k = random_double_complex(rng);
    std::map<Bidegree, RatMatrix> twice, thrice;
    const Support& s = k.support();
    for (int p = s.p0; p <= s.p1; ++p)
      for (int q = s.q0; q <= s.q1; ++q) {
        twice[{p, q}] = RatMatrix::scalar(k.dim(p, q), 2);
        thrice[{p, q}] = RatMatrix::scalar(k.dim(p, q), 3);
      }
    BicomplexMap f(k, k, twice), g(k, k, thrice);
    ChainMap composed = total_map(compose(g, f));
    ChainMap separate = compose(total_map(g), total_map(f));
    for (int d = k.min_total_degree(); d <= k.max_total_degree(); ++d) EXPECT_EQ(composed.mat(d), separate.mat(d));
  }
}
