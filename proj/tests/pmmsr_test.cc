#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "rsl/error.hpp"
#include "rsl/pmmsr.hpp"
#include "rsl/subsets.hpp"

namespace rsl {
namespace {

std::vector<Elem> random_message(const PmMsrCode& code, std::mt19937_64& rng) {
  std::vector<Elem> msg(code.params().B);
  for (auto& x : msg) x = rng() % code.field().order();
  return msg;
}

PmMsrCode reference_code(int n = 5, int m = 1) {
  return PmMsrCode::construct(CodeParams::product_matrix(n, 3, m), FieldSpec::make(2, 4));
}

template <class Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(PmMsrTest, ParameterDerivation) {
  const auto c1 = reference_code(5, 1);
  EXPECT_EQ(c1.params().d, 4);
  EXPECT_EQ(c1.params().alpha, 2);
  EXPECT_EQ(c1.params().beta, 1);
  EXPECT_EQ(c1.params().B, 6);
  const auto c2 = reference_code(5, 2);
  EXPECT_EQ(c2.params().alpha, 4);
  EXPECT_EQ(c2.params().beta, 2);
  EXPECT_EQ(c2.params().B, 12);
}

TEST(PmMsrTest, ConstructionErrors) {
  expect_error(ErrorCode::FieldTooSmall, [] {
    PmMsrCode::construct(CodeParams::product_matrix(17, 3), FieldSpec::make(2, 4));
  });
  // Cubing on GF(16)* has only 5 distinct values, so 7 nodes with
  // alpha0 = 3 cannot have distinct lambdas.
  expect_error(ErrorCode::DegenerateLambda, [] {
    PmMsrCode::construct(CodeParams::product_matrix(7, 4), FieldSpec::make(2, 4));
  });
  const auto f = FieldSpec::make(2, 4);
  const auto g = f.primitive_element();
  std::vector<Elem> pts{f.pow(g, 1), f.pow(g, 6), f.pow(g, 2), f.pow(g, 3), f.pow(g, 4),
                        f.pow(g, 7), f.pow(g, 8)};
  expect_error(ErrorCode::DegenerateLambda, [&] {
    PmMsrCode::construct(CodeParams::product_matrix(7, 4), f, pts);
  });
  expect_error(ErrorCode::BadParams, [&] {
    PmMsrCode::construct(CodeParams::product_matrix(5, 3), f, std::vector<Elem>{1, 1, 2, 3, 4});
  });
  EXPECT_NO_THROW(PmMsrCode::construct(CodeParams::product_matrix(7, 4), FieldSpec::make(2, 5)));
}

TEST(PmMsrTest, PointsHaveDistinctLambdas) {
  const auto code = reference_code(6);
  std::set<Elem> lambdas;
  for (int i = 1; i <= 6; ++i) lambdas.insert(code.lambda(i));
  EXPECT_EQ(lambdas.size(), 6U);
}

TEST(PmMsrTest, EncodeZeroAndUnitMessage) {
  const auto code = reference_code();
  const std::vector<Elem> zero(6, 0);
  for (const auto& s : code.encode(zero)) EXPECT_EQ(s, (std::vector<Elem>{0, 0}));

  std::vector<Elem> unit(6, 0);
  unit[code.message_index(0, 0, 0, 0)] = 1;
  EXPECT_EQ(code.message_index(0, 0, 0, 0), 0U);
  const auto shares = code.encode(unit);
  for (const auto& s : shares) EXPECT_EQ(s, (std::vector<Elem>{1, 0}));
  for (int i = 1; i <= 5; ++i)
    for (int f = 1; f <= 5; ++f)
      if (i != f) EXPECT_EQ(code.repair_symbol(i, f, shares[i - 1]), (std::vector<Elem>{1}));
}

TEST(PmMsrTest, EncodeAgreesWithSymbolicRows) {
  std::mt19937_64 rng(3);
  for (int m : {1, 2, 3}) {
    const auto code = reference_code(6, m);
    const auto& f = code.field();
    for (int trial = 0; trial < 5; ++trial) {
      const auto msg = random_message(code, rng);
      const auto shares = code.encode(msg);
      for (int i = 1; i <= 6; ++i) {
        for (int slot = 0; slot < code.params().alpha; ++slot) {
          const auto row = code.stored_row(i, slot);
          Elem acc = 0;
          for (int b = 0; b < code.params().B; ++b) acc = f.add(acc, f.mul(row[b], msg[b]));
          EXPECT_EQ(acc, shares[i - 1][slot]);
        }
        for (int t = 1; t <= 6; ++t) {
          if (t == i) continue;
          const auto sym = code.repair_symbol(i, t, shares[i - 1]);
          for (int slot = 0; slot < code.params().beta; ++slot) {
            const auto row = code.repair_row(i, t, slot);
            Elem acc = 0;
            for (int b = 0; b < code.params().B; ++b) acc = f.add(acc, f.mul(row[b], msg[b]));
            EXPECT_EQ(acc, sym[slot]);
          }
        }
      }
    }
  }
}

TEST(PmMsrTest, ExactRepairFromEveryHelperSet) {
  std::mt19937_64 rng(11);
  for (int n : {5, 6}) {
    for (int m : {1, 2}) {
      const auto code = reference_code(n, m);
      const auto msg = random_message(code, rng);
      const auto shares = code.encode(msg);
      for (int f = 1; f <= n; ++f) {
        for (const auto& helpers : combinations(set_minus(iota_set(1, n), {f}), 4)) {
          std::vector<std::vector<Elem>> symbols;
          for (int h : helpers) symbols.push_back(code.repair_symbol(h, f, shares[h - 1]));
          EXPECT_EQ(code.repair(f, helpers, symbols), shares[f - 1]);
        }
      }
    }
  }
}

TEST(PmMsrTest, ReconstructFromEveryKSubset) {
  std::mt19937_64 rng(5);
  for (int m : {1, 2}) {
    const auto code = reference_code(5, m);
    const auto msg = random_message(code, rng);
    const auto shares = code.encode(msg);
    int subsets = 0;
    for (const auto& nodes : combinations(iota_set(1, 5), 3)) {
      std::vector<std::vector<Elem>> picked;
      for (int v : nodes) picked.push_back(shares[v - 1]);
      EXPECT_EQ(code.reconstruct(nodes, picked), msg);
      ++subsets;
    }
    EXPECT_EQ(subsets, 10);
  }
  const auto code = reference_code();
  const std::vector<std::vector<Elem>> zeros(3, std::vector<Elem>(2, 0));
  EXPECT_EQ(code.reconstruct(std::vector<NodeId>{1, 2, 3}, zeros), std::vector<Elem>(6, 0));
}

TEST(PmMsrTest, LargerFieldRoundTrip) {
  std::mt19937_64 rng(8);
  const auto code =
      PmMsrCode::construct(CodeParams::product_matrix(8, 4), FieldSpec::make(2, 8));
  const auto msg = random_message(code, rng);
  const auto shares = code.encode(msg);
  const std::vector<NodeId> nodes{2, 5, 7, 8};
  std::vector<std::vector<Elem>> picked;
  for (int v : nodes) picked.push_back(shares[v - 1]);
  EXPECT_EQ(code.reconstruct(nodes, picked), msg);
}

TEST(PmMsrTest, ObservationRowCountsAndRanks) {
  const auto code = reference_code();
  auto rank_of = [&](const std::vector<Observation>& obs) {
    FMatrix m(code.field(), 0, code.params().B);
    for (const auto& o : obs) m.append_row(o.row);
    return rank(m);
  };
  for (int i = 1; i <= 5; ++i) {
    const auto stored = code.observation_rows(select::Stored{{i}});
    EXPECT_EQ(stored.size(), 2U);
    EXPECT_EQ(rank_of(stored), 2U);
  }
  const auto to1 = code.observation_rows(select::RepairTo{{1}});
  ASSERT_EQ(to1.size(), 4U);
  EXPECT_EQ(rank_of(to1), 4U);
  for (std::size_t j = 0; j < to1.size(); ++j) {
    const auto& tag = std::get<RepairTag>(to1[j].tag);
    EXPECT_EQ(tag.helper, static_cast<int>(j) + 2);
    EXPECT_EQ(tag.failed, 1);
  }
  EXPECT_TRUE(code.observation_rows(select::Stored{{}}).empty());
  for (int j = 1; j <= 3; ++j)
    for (const auto& nodes : combinations(iota_set(1, 5), j))
      EXPECT_EQ(rank_of(code.observation_rows(select::Stored{nodes})), 2U * j);
}

TEST(PmMsrTest, TruncationKeepsPoints) {
  const auto code = reference_code(6);
  const auto sub = code.truncated(5);
  EXPECT_EQ(sub.params().n, 5);
  EXPECT_EQ(sub.points(), std::vector<Elem>(code.points().begin(), code.points().begin() + 5));
  EXPECT_EQ(sub.stored_row(3, 1), code.stored_row(3, 1));
}

TEST(PmMsrTest, ErrorPaths) {
  const auto code = reference_code();
  const std::vector<Elem> share{1, 2};
  expect_error(ErrorCode::SelfRepair, [&] { code.repair_symbol(2, 2, share); });
  const std::vector<std::vector<Elem>> three(3, std::vector<Elem>{1});
  expect_error(ErrorCode::WrongHelperCount,
               [&] { code.repair(1, std::vector<NodeId>{2, 3, 4}, three); });
  const std::vector<std::vector<Elem>> four(4, std::vector<Elem>{1});
  expect_error(ErrorCode::SelfRepair,
               [&] { code.repair(1, std::vector<NodeId>{1, 3, 4, 5}, four); });
  expect_error(ErrorCode::WrongNodeCount, [&] {
    code.reconstruct(std::vector<NodeId>{1, 2}, std::vector<std::vector<Elem>>(2, share));
  });
  expect_error(ErrorCode::BadSelector, [&] { code.observation_rows(select::Stored{{6}}); });
  expect_error(ErrorCode::LengthMismatch, [&] { code.encode(std::vector<Elem>(5, 0)); });
}

}  // namespace
}  // namespace rsl
