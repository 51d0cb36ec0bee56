#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "rsl/error.hpp"
#include "rsl/extension.hpp"
#include "rsl/field.hpp"
#include "rsl/matrix.hpp"

namespace rsl {
namespace {

using FM = Matrix<FieldSpec>;

FM random_matrix(const FieldSpec& f, std::size_t r, std::size_t c, std::mt19937_64& rng,
                 int zero_bias = 0) {
  FM m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = (zero_bias > 0 && rng() % zero_bias != 0) ? 0 : rng() % f.order();
  return m;
}

std::size_t nonzero_rows(const FM& m) {
  std::size_t n = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (auto v : m.row(r))
      if (v != 0) {
        ++n;
        break;
      }
  }
  return n;
}

TEST(MatrixTest, RankExamples) {
  const auto f16 = FieldSpec::make(2, 4);
  const auto f2 = FieldSpec::make(2, 1);
  EXPECT_EQ(rank(FM::identity(f16, 3)), 3U);
  EXPECT_EQ(rank(FM(f16, 4, 6)), 0U);
  EXPECT_EQ(rank(FM::from_rows(f2, 2, {{1, 1}, {1, 1}})), 1U);
  EXPECT_EQ(rank(FM(f16, 0, 5)), 0U);
}

TEST(MatrixTest, SolveIdentityAndRankDeficient) {
  const auto f = FieldSpec::make(2, 4);
  std::mt19937_64 rng(1);
  const auto b = random_matrix(f, 4, 2, rng);
  EXPECT_EQ(solve(FM::identity(f, 4), b), b);

  // Rank-2 system with b constructed inside the column space.
  const auto left = random_matrix(f, 5, 2, rng);
  const auto right = random_matrix(f, 2, 4, rng);
  const FM a = left * right;
  const FM x0 = random_matrix(f, 4, 1, rng);
  const FM rhs = a * x0;
  const FM x = solve(a, rhs);
  EXPECT_EQ(a * x, rhs);
}

TEST(MatrixTest, SolveInconsistent) {
  const auto f = FieldSpec::make(2, 4);
  const FM a = FM::from_rows(f, 2, {{1, 1}, {1, 1}});
  const FM b = FM::from_rows(f, 1, {{1}, {2}});
  try {
    solve(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Inconsistent);
  }
}

TEST(MatrixTest, InvertVandermonde) {
  const auto f = FieldSpec::make(2, 4);
  const std::vector<std::uint64_t> pts{3, 7};
  const FM v = vandermonde(f, std::span<const std::uint64_t>(pts), 2);
  EXPECT_EQ(v * invert(v), FM::identity(f, 2));
  EXPECT_EQ(invert(v) * v, FM::identity(f, 2));
  try {
    invert(FM::from_rows(f, 2, {{1, 1}, {1, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Singular);
  }
}

TEST(MatrixTest, VandermondeRank) {
  const auto f = FieldSpec::make(2, 4);
  const std::vector<std::uint64_t> one{1};
  EXPECT_EQ(vandermonde(f, std::span<const std::uint64_t>(one), 3),
            FM::from_rows(f, 3, {{1, 1, 1}}));
  std::vector<std::uint64_t> pts;
  for (std::uint64_t x = 1; x < 16; ++x) pts.push_back(x);
  EXPECT_EQ(rank(vandermonde(f, std::span<const std::uint64_t>(pts), 15)), 15U);
  const std::vector<std::uint64_t> dup{2, 5, 2, 9};
  EXPECT_EQ(rank(vandermonde(f, std::span<const std::uint64_t>(dup), 4)), 3U);
}

TEST(MatrixTest, RankProperties) {
  std::mt19937_64 rng(42);
  for (auto f : {FieldSpec::make(2, 1), FieldSpec::make(2, 4), FieldSpec::make(3, 2)}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t ra = rng() % 6, rb = rng() % 6, c = 1 + rng() % 7;
      const auto a = random_matrix(f, ra, c, rng, 3);
      const auto b = random_matrix(f, rb, c, rng, 3);
      const auto ref = rref(a);
      EXPECT_EQ(rank(a), rank(ref));
      EXPECT_EQ(rank(a), nonzero_rows(ref));
      EXPECT_EQ(rref(ref), ref);
      EXPECT_LE(rank(a), std::min(ra, c));
      const auto both = rank(a.stacked(b));
      EXPECT_GE(both, std::max(rank(a), rank(b)));
      EXPECT_LE(both, rank(a) + rank(b));
    }
  }
}

TEST(MatrixTest, WorksOverExtensionField) {
  const auto f = FieldSpec::make(2, 4);
  const auto ext = ExtensionSpec::make(f, 3);
  Matrix<ExtensionSpec> m(ext, 3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = ext.frobenius(ext.monomial(i), j);
  const auto inv = invert(m);
  EXPECT_EQ(m * inv, Matrix<ExtensionSpec>::identity(ext, 3));
}

TEST(MatrixTest, FieldMismatch) {
  const FM a = FM::identity(FieldSpec::make(2, 4), 2);
  const FM b = FM::identity(FieldSpec::make(2, 3), 2);
  try {
    (void)(a * b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FieldMismatch);
  }
}

}  // namespace
}  // namespace rsl
