#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "rsl/error.hpp"
#include "rsl/secrecy.hpp"
#include "rsl/subsets.hpp"

namespace rsl {
namespace {

PmMsrCode make_code(int n = 5, int k = 3, int m = 1, int w = 4) {
  return PmMsrCode::construct(CodeParams::product_matrix(n, k, m), FieldSpec::make(2, w));
}

std::vector<LElem> random_symbols(const ExtensionSpec& ext, std::size_t count,
                                  std::mt19937_64& rng) {
  std::vector<LElem> out;
  for (std::size_t i = 0; i < count; ++i) {
    LElem e(static_cast<std::size_t>(ext.degree()));
    for (auto& c : e) c = rng() % ext.base().order();
    out.push_back(std::move(e));
  }
  return out;
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

TEST(SecrecyTest, EavesdroppedRows) {
  const auto code = make_code();
  EXPECT_EQ(eavesdropped_rows(code, {{}, {}}).size(), 0U);
  EXPECT_EQ(eavesdropped_rows(code, {{2}, {1}}).size(), 6U);
  const auto two = eavesdropped_rows(code, {{2, 3}, {}});
  EXPECT_EQ(two.size(), 4U);
  EXPECT_EQ(joint_entropy(two), 4U);
}

TEST(SecrecyTest, LeakageAndAchievedSize) {
  const auto code = make_code();
  EXPECT_EQ(leakage(code, {{}, {1}}), 4U);
  EXPECT_EQ(leakage(code, {{2}, {1}}), 5U);
  EXPECT_EQ(leakage(code, {{}, {}}), 0U);
  EXPECT_EQ(achieved_secure_size(code, {{}, {1}}), 2U);
  EXPECT_EQ(achieved_secure_size(code, {{3}, {5}}), 1U);
  EXPECT_EQ(achieved_secure_size(code, {{1, 4}, {}}), 2U);
}

TEST(SecrecyTest, InvalidModels) {
  const auto code = make_code();
  EXPECT_EQ(code_of([&] { leakage(code, {{1}, {1}}); }), ErrorCode::BadModel);
  EXPECT_EQ(code_of([&] { leakage(code, {{6}, {}}); }), ErrorCode::BadModel);
  EXPECT_EQ(code_of([&] { leakage(code, {{0}, {}}); }), ErrorCode::BadModel);
  EXPECT_EQ(code_of([&] { leakage(code, {{1, 2}, {3}}); }), ErrorCode::BadModel);
  EXPECT_EQ(code_of([&] { leakage(code, {{2, 2}, {}}); }), ErrorCode::BadModel);
}

TEST(SecrecyTest, SchemeRandomnessSizes) {
  const auto code = make_code();
  const auto a = SecureScheme::make(code, 0, 1);
  EXPECT_EQ(a.randomness_size(), 4);
  EXPECT_EQ(a.secret_size(), 2);
  const auto b = SecureScheme::make(code, 1, 1);
  EXPECT_EQ(b.randomness_size(), 5);
  EXPECT_EQ(b.secret_size(), 1);
  const auto c = SecureScheme::make(code, 2, 0);
  EXPECT_EQ(c.randomness_size(), 4);
  EXPECT_EQ(c.secret_size(), 2);
  EXPECT_EQ(a.extension().degree(), 6);
  EXPECT_EQ(code_of([&] { SecureScheme::make(code, 0, 2); }), ErrorCode::CapacityZero);
  EXPECT_EQ(code_of([&] { SecureScheme::make(code, 2, 1); }), ErrorCode::BadModel);
}

TEST(SecrecyTest, WrapUnwrap) {
  std::mt19937_64 rng(5);
  const auto code = make_code();
  const auto scheme = SecureScheme::make(code, 0, 1);
  const auto& ext = scheme.extension();
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_symbols(ext, 2, rng);
    const auto r = random_symbols(ext, 4, rng);
    const auto c = scheme.wrap(d, r);
    ASSERT_EQ(c.size(), 6U);
    EXPECT_EQ(scheme.unwrap(c), d);
  }
  const std::vector<LElem> zd(2, ext.zero()), zr(4, ext.zero());
  for (const auto& s : scheme.wrap(zd, zr)) EXPECT_TRUE(ext.is_zero(s));
  EXPECT_EQ(code_of([&] { scheme.wrap(zr, zr); }), ErrorCode::LengthMismatch);

  // No randomness: wrap is a fixed invertible map of D.
  const auto plain = SecureScheme::with_randomness(code, 0);
  const auto d = random_symbols(plain.extension(), 6, rng);
  EXPECT_EQ(plain.wrap(d, {}), plain.wrap(d, {}));
  EXPECT_EQ(plain.unwrap(plain.wrap(d, {})), d);
}

TEST(SecrecyTest, EndToEndThroughEveryKSubset) {
  std::mt19937_64 rng(9);
  for (int m : {1, 2}) {
    const auto code = make_code(5, 3, m);
    const auto scheme = SecureScheme::make(code, 1, 1);
    const auto& ext = scheme.extension();
    const auto d = random_symbols(ext, static_cast<std::size_t>(scheme.secret_size()), rng);
    const auto r = random_symbols(ext, static_cast<std::size_t>(scheme.randomness_size()), rng);
    const auto shares = code.encode_columns(to_layers(ext, scheme.wrap(d, r)));
    for (const auto& subset : combinations(iota_set(1, 5), 3)) {
      std::vector<FMatrix> picked;
      for (int i : subset) picked.push_back(shares[static_cast<std::size_t>(i - 1)]);
      const auto msg = code.reconstruct_columns(subset, picked);
      EXPECT_EQ(scheme.unwrap(from_layers(ext, msg)), d);
    }
  }
}

TEST(SecrecyTest, PerfectSecrecy) {
  const auto code = make_code();
  for (auto [l1, l2] : {std::pair{0, 1}, {1, 1}, {2, 0}, {1, 0}}) {
    const auto scheme = SecureScheme::make(code, l1, l2);
    for (const auto& model : enumerate_models(code, l1, l2)) {
      const auto rep = verify_perfect(scheme, code, model);
      EXPECT_TRUE(rep.perfect) << model.describe();
      EXPECT_EQ(rep.observed_rank, leakage(code, model));
    }
  }
  const auto none = SecureScheme::with_randomness(code, 0);
  for (const auto& model : enumerate_models(code, 1, 1)) {
    ASSERT_GT(leakage(code, model), 0U);
    EXPECT_FALSE(verify_perfect(none, code, model).perfect);
  }
  // Too little randomness for (1,1) leaks.
  const auto short_r = SecureScheme::with_randomness(code, 4);
  EXPECT_FALSE(verify_perfect(short_r, code, {{2}, {1}}).perfect);
}

TEST(SecrecyTest, SymmetryAndBudgetIdentity) {
  for (int m : {1, 2, 3}) {
    const auto code = make_code(6, 3, m);
    const auto B = static_cast<std::size_t>(code.params().B);
    for (int l1 = 0; l1 <= 2; ++l1)
      for (int l2 = 0; l1 + l2 <= 2; ++l2) {
        const auto models = enumerate_models(code, l1, l2);
        const auto first = leakage(code, models.front());
        for (const auto& model : models) {
          const auto h = leakage(code, model);
          EXPECT_EQ(h, first);
          EXPECT_EQ(achieved_secure_size(code, model) + h, B);
        }
      }
  }
}

TEST(SecrecyTest, ClosedFormAndUniversalBound) {
  for (int k : {3, 4}) {
    for (int m : {1, 2}) {
      // Over GF(16) x^3 takes only 6 values, too few for 7 nodes.
      const auto code = make_code(2 * k - 1, k, m, k == 3 ? 4 : 5);
      const auto& p = code.params();
      const int r = p.d - p.k + 1;
      for (int l1 = 0; l1 < k; ++l1)
        for (int l2 = 0; l1 + l2 < k; ++l2) {
          const auto models = enumerate_models(code, l1, l2);
          const auto& model = models.front();
          const auto got = static_cast<int>(achieved_secure_size(code, model));
          if (l2 <= 1 || (l2 - 1) * p.beta < r)
            EXPECT_EQ(got, (k - l1 - l2) * (p.alpha - l2 * p.beta)) << l1 << "," << l2;
          for (int g : set_minus(iota_set(1, p.n), set_union(model.E, model.F))) {
            const auto hg = static_cast<int>(joint_entropy(
                ObsSet::of(code, select::RepairFromTo{{g}, model.F})));
            EXPECT_LE(got, (k - l1 - l2) * (p.alpha - hg));
          }
        }
    }
  }
}

TEST(SecrecyTest, TruncationEquivalence) {
  const auto code = make_code(6, 3, 1);
  const auto small = code.truncated(5);
  for (int l1 = 0; l1 <= 2; ++l1)
    for (int l2 = 0; l1 + l2 <= 2; ++l2)
      for (const auto& model : enumerate_models(5, l1, l2)) {
        EXPECT_EQ(achieved_secure_size(code, model), achieved_secure_size(small, model))
            << model.describe();
      }
}

TEST(SecrecyTest, AttackReportJson) {
  const auto code = make_code();
  const auto scheme = SecureScheme::make(code, 1, 1);
  const auto rep = attack(code, scheme, {{2}, {1}});
  EXPECT_EQ(rep.leakage, 5U);
  EXPECT_EQ(rep.secure_size, 1U);
  EXPECT_TRUE(rep.perfect);
  EXPECT_TRUE(rep.match);
  EXPECT_EQ(rep.to_json(),
            R"({"model":{"E":[2],"F":[1]},"leakage":5,"secure_size":1,"perfect":true,)"
            R"("formula_value":"1","formula_kind":"Exact","match":true})");
}

}  // namespace
}  // namespace rsl
