#include <gtest/gtest.h>

#include "spectra/exactla.hpp"
#include "spectra/random.hpp"

using namespace spectra;

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(format_rational(parse_rational("6/4")), "3/2");
  EXPECT_EQ(format_rational(parse_rational("-4/2")), "-2");
  EXPECT_EQ(format_rational(parse_rational("0")), "0");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(RatMatrix::identity(2)), 2u);
  EXPECT_EQ(rank(RatMatrix::zero(3, 4)), 0u);
  EXPECT_EQ(rank(RatMatrix{{1, 2}, {2, 4}}), 1u);
  EXPECT_EQ(rank(RatMatrix(0, 5)), 0u);
  EXPECT_EQ(rank(RatMatrix(5, 0)), 0u);
}

TEST(KernelBasis, Examples) {
  EXPECT_EQ(kernel_basis(RatMatrix::identity(2)).cols(), 0u);

  RatMatrix z = kernel_basis(RatMatrix::zero(2, 3));
  EXPECT_EQ(z.cols(), 3u);
  EXPECT_EQ(rank(z), 3u);

  // x + 2y = 0 => (x, y) = y(-2, 1)
  RatMatrix k = kernel_basis(RatMatrix{{1, 2}, {2, 4}});
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(k(0, 0), -2 * k(1, 0));
  EXPECT_NE(k(1, 0), 0);

  EXPECT_EQ(kernel_basis(RatMatrix(0, 3)).cols(), 3u);
  EXPECT_EQ(kernel_basis(RatMatrix(3, 0)).cols(), 0u);
}

TEST(ImageBasis, Examples) {
  EXPECT_EQ(image_basis(RatMatrix::identity(2)).cols(), 2u);
  EXPECT_EQ(image_basis(RatMatrix::zero(2, 2)).cols(), 0u);
  RatMatrix im = image_basis(RatMatrix{{1, 2}, {2, 4}});
  ASSERT_EQ(im.cols(), 1u);
  EXPECT_EQ(im(1, 0), 2 * im(0, 0));
  EXPECT_NE(im(0, 0), 0);
}

TEST(SubquotientOp, Examples) {
  RatMatrix first(2, 1);
  first(0, 0) = 1;
  EXPECT_EQ(subquotient(RatMatrix::identity(2), first).dim(), 1u);
  EXPECT_EQ(subquotient(RatMatrix::identity(2), RatMatrix::identity(2)).dim(), 0u);

  RatMatrix cycles = kernel_basis(RatMatrix{{1, 1}});
  EXPECT_EQ(subquotient(cycles, RatMatrix(2, 0)).dim(), 1u);
}

TEST(SubquotientOp, ContainmentViolation) {
  RatMatrix line(2, 1);
  line(0, 0) = 1;
  RatMatrix other(2, 1);
  other(1, 0) = 1;
  try {
    subquotient(line, other);
    FAIL() << "expected ContainmentViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ContainmentViolation);
  }
}

TEST(InducedMap, Examples) {
  RatMatrix first(2, 1);
  first(0, 0) = 1;
  Subquotient sq = subquotient(RatMatrix::identity(2), first);
  EXPECT_EQ(induced_map(RatMatrix::identity(2), sq, sq), RatMatrix::identity(1));
  EXPECT_TRUE(induced_map(RatMatrix::zero(2, 2), sq, sq).is_zero());
  EXPECT_EQ(induced_map(RatMatrix::scalar(2, 2), sq, sq), RatMatrix::scalar(1, 2));
}

TEST(InducedMap, RejectsMapsThatBreakSpans) {
  RatMatrix first(2, 1);
  first(0, 0) = 1;
  Subquotient line = subquotient(first, RatMatrix(2, 0));
  RatMatrix swap{{0, 1}, {1, 0}};
  try {
    induced_map(swap, line, line);
    FAIL() << "expected NotChainCompatible";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotChainCompatible);
  }
}

TEST(InducedMap, IndependentOfRepresentatives) {
  // Same subquotient Q^2 / <e1>, presented with different cycle spanning sets.
  RatMatrix first(2, 1);
  first(0, 0) = 1;
  Subquotient a = subquotient(RatMatrix::identity(2), first);
  Subquotient b = subquotient(RatMatrix{{1, 1}, {0, 1}}, first);
  RatMatrix f{{3, 5}, {0, 7}};
  // On Q^2/<e1> the class of e2 maps to 7 * class of e2; scalar in any basis.
  EXPECT_EQ(induced_map(f, a, a), RatMatrix::scalar(1, 7));
  EXPECT_EQ(induced_map(f, b, b), RatMatrix::scalar(1, 7));
}

TEST(Properties, RankNullityAndKernelOnRandomMatrices) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto rows = static_cast<std::size_t>(rng.uniform(0, 6));
    auto cols = static_cast<std::size_t>(rng.uniform(0, 6));
    // Low-rank products make degenerate cases common.
    auto inner = static_cast<std::size_t>(rng.uniform(0, 4));
    RatMatrix m = random_matrix(rng, rows, inner) * random_matrix(rng, inner, cols);
    RatMatrix k = kernel_basis(m);
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(rank(m), image_basis(m).cols());
    EXPECT_EQ(rank(m), cols - k.cols());
    EXPECT_EQ(rank(k), k.cols());
    EXPECT_EQ(rank(m), rank(m.transpose()));
  }
}

TEST(Properties, InducedMapsCompose) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    // Subquotient Z/B with f, g preserving both: block upper triangular maps
    // preserving the flag B ⊆ Z ⊆ Q^n with B = <e1..b>, Z = <e1..z>.
    const auto n = static_cast<std::size_t>(rng.uniform(1, 5));
    const auto z = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n)));
    const auto b = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(z)));
    auto flag_map = [&] {
      RatMatrix m = random_matrix(rng, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          std::size_t level_i = i < b ? 0 : (i < z ? 1 : 2);
          std::size_t level_j = j < b ? 0 : (j < z ? 1 : 2);
          if (level_i > level_j) m(i, j) = 0;
        }
      return m;
    };
    RatMatrix zc(n, z), bc(n, b);
    for (std::size_t i = 0; i < z; ++i) zc(i, i) = 1;
    for (std::size_t i = 0; i < b; ++i) bc(i, i) = 1;
    Subquotient sq = subquotient(zc, bc);
    RatMatrix f = flag_map(), g = flag_map();
    EXPECT_EQ(induced_map(g * f, sq, sq), induced_map(g, sq, sq) * induced_map(f, sq, sq));
  }
}

TEST(Solve, InverseAndKron) {
  RatMatrix m{{2, 1}, {1, 1}};
  auto inv = inverse(m);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(m * *inv, RatMatrix::identity(2));
  EXPECT_FALSE(inverse(RatMatrix{{1, 2}, {2, 4}}).has_value());

  RatMatrix k = kron(RatMatrix{{1, 2}}, RatMatrix{{0, 1}, {1, 0}});
  EXPECT_EQ(k, (RatMatrix{{0, 1, 0, 2}, {1, 0, 2, 0}}));
}
