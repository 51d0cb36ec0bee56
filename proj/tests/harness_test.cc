#include <chrono>
#include <set>

#include "gtest/gtest.h"
#include "rsl/error.hpp"
#include "rsl/harness.hpp"

namespace rsl {
namespace {

PmMsrCode make_code(int n, int m) {
  return PmMsrCode::construct(CodeParams::product_matrix(n, 3, m), FieldSpec::make(2, 4));
}

void expect_all_pass(const std::vector<PropertyResult>& results) {
  ASSERT_EQ(results.size(), property_ids().size());
  for (const auto& r : results) {
    EXPECT_TRUE(r.pass) << r.to_json();
    EXPECT_FALSE(r.witness.has_value()) << r.id;
    EXPECT_EQ(r.mode, "exhaustive") << r.id;
  }
}

TEST(HarnessTest, ReferenceInstancePasses) {
  const auto results = check_all(make_code(5, 1));
  expect_all_pass(results);
  for (const auto& r : results) EXPECT_GT(r.checked, 0U) << r.id;
}

TEST(HarnessTest, ExtendedInstancePasses) {
  const auto results = check_all(make_code(6, 1));
  expect_all_pass(results);
  for (const auto& r : results)
    if (r.id == "lemma.truncation") EXPECT_EQ(r.checked, 51U);  // 1 + 5 + 5 + 10 + 20 + 10 models
}

TEST(HarnessTest, ConcatenatedInstancePasses) {
  const auto results = check_all(make_code(5, 2));
  expect_all_pass(results);
  for (const auto& r : results) {
    // l2 = 2 is Category 2 when beta = 2, so only the l2 <= 1 models are exact.
    if (r.id == "cor.capacity_exact") EXPECT_EQ(r.skipped, 10U);
    if (r.id == "thm.scalar_repair_rank") EXPECT_EQ(r.skipped, 10U);
  }
}

TEST(HarnessTest, ReportIsByteStable) {
  const auto code = make_code(5, 1);
  const auto a = report_jsonl(check_all(code));
  const auto b = report_jsonl(check_all(code));
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), static_cast<long>(property_ids().size()));
  const std::string expected =
      R"j({"id":"msr.node_entropy","instance":"(n=5,k=3,d=4,alpha=2,beta=1,B=6,m=1) over GF(2^4)",)j"
      R"j("pass":true,"mode":"exhaustive","checked":5,"skipped":0,"seed":null,"witness":null})j";
  EXPECT_EQ(a.substr(0, a.find('\n')), expected);
}

TEST(HarnessTest, SamplingIsRecordedAndDeterministic) {
  const auto code = make_code(6, 1);
  Budget budget;
  budget.max_cases = 7;
  budget.seed = 42;
  const auto a = check_property("lemma.repair_determinism", code, budget);
  const auto b = check_property("lemma.repair_determinism", code, budget);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.mode, "sampled");
  EXPECT_EQ(a.seed, 42U);
  EXPECT_EQ(a.checked, 7U);
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(HarnessTest, PropertiesAreIndividuallyInvocable) {
  const auto code = make_code(5, 1);
  std::set<std::string> ids(property_ids().begin(), property_ids().end());
  EXPECT_EQ(ids.size(), 14U);
  for (const auto& id : property_ids()) EXPECT_EQ(check_property(id, code).id, id);
  EXPECT_THROW(check_property("lemma.nonexistent", code), Error);
}

}  // namespace
}  // namespace rsl
