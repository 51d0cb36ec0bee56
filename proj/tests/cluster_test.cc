#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "rsl/cluster.hpp"
#include "rsl/error.hpp"
#include "rsl/subsets.hpp"

namespace rsl::cluster {
namespace {

namespace fs = std::filesystem;

class ClusterTest : public ::testing::Test {
 protected:
  fs::path fresh(const std::string& name) {
    const auto dir = root_ / name;
    fs::remove_all(dir);
    return dir;
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_ = fs::temp_directory_path() /
                   ("rsl_cluster_test_" + std::to_string(::getpid()) + "_" +
                    ::testing::UnitTest::GetInstance()->current_test_info()->name());
};

EncodeRequest symbols_request(std::vector<std::uint64_t> symbols, int n = 5) {
  EncodeRequest req;
  req.n = n;
  req.payload.mode = PayloadMode::Symbols;
  req.payload.symbols = std::move(symbols);
  return req;
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

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST_F(ClusterTest, PlainRoundTripOverEverySubset) {
  const auto c = Cluster::create(fresh("plain"), symbols_request({1, 2, 3, 4, 5, 15}));
  for (const auto& s : combinations(iota_set(1, 5), 3)) {
    const auto out = c.reconstruct(s);
    EXPECT_EQ(out.symbols, (std::vector<std::uint64_t>{1, 2, 3, 4, 5, 15}));
  }
  const auto reopened = Cluster::open(c.dir());
  EXPECT_EQ(reopened.reconstruct().symbols.size(), 6U);
  EXPECT_EQ(code_of([&] { c.reconstruct(NodeSet{1, 2}); }), ErrorCode::WrongNodeCount);
  EXPECT_EQ(code_of([&] { c.reconstruct(NodeSet{1, 2, 9}); }), ErrorCode::UnknownNode);
}

TEST_F(ClusterTest, PayloadLimits) {
  EXPECT_EQ(code_of([&] { Cluster::create(fresh("big"), symbols_request({1, 2, 3, 4, 5, 6, 7})); }),
            ErrorCode::PayloadTooLarge);
  const auto empty = Cluster::create(fresh("empty"), symbols_request({}));
  EXPECT_TRUE(empty.reconstruct().symbols.empty());
  for (int i = 1; i <= 5; ++i) {
    const auto share = empty.read_share(i);
    for (auto v : share.data()) EXPECT_EQ(v, 0U);
  }

  // GF(16) has 24 plain bits, too few for the length prefix.
  EncodeRequest bytes;
  bytes.payload.bytes = {};
  EXPECT_EQ(code_of([&] { Cluster::create(fresh("nobytes"), bytes); }), ErrorCode::PayloadTooLarge);

  bytes.w = 8;
  const auto c = Cluster::create(fresh("bytes"), bytes);
  EXPECT_EQ(c.capacity_symbols(), 2U);
  EXPECT_TRUE(c.reconstruct().bytes.empty());
  bytes.payload.bytes = {0xAB, 0xCD};
  EXPECT_EQ(Cluster::create(fresh("bytes2"), bytes).reconstruct().bytes, bytes.payload.bytes);
  bytes.payload.bytes.push_back(0xEF);
  EXPECT_EQ(code_of([&] { Cluster::create(fresh("bytes3"), bytes); }), ErrorCode::PayloadTooLarge);
}

TEST_F(ClusterTest, SecureRoundTripIsSeedReproducible) {
  auto req = symbols_request({0x123456, 0xABCDEF});
  req.secure = {0, 1};
  req.seed = 77;
  const auto a = Cluster::create(fresh("a"), req);
  const auto b = Cluster::create(fresh("b"), req);
  ASSERT_TRUE(a.scheme().has_value());
  EXPECT_EQ(a.scheme()->secret_size(), 2);
  EXPECT_EQ(a.scheme()->randomness_size(), 4);
  for (int i = 1; i <= 5; ++i) {
    EXPECT_TRUE(fs::exists(a.dir() / ("share_" + std::to_string(i) + ".bin")));
    EXPECT_EQ(file_bytes(a.dir() / ("share_" + std::to_string(i) + ".bin")),
              file_bytes(b.dir() / ("share_" + std::to_string(i) + ".bin")));
  }
  for (const auto& s : combinations(iota_set(1, 5), 3))
    EXPECT_EQ(Cluster::open(a.dir()).reconstruct(s).symbols, req.payload.symbols);

  req.seed = 78;
  const auto c = Cluster::create(fresh("c"), req);
  EXPECT_NE(file_bytes(a.dir() / "share_1.bin"), file_bytes(c.dir() / "share_1.bin"));
  EXPECT_EQ(c.reconstruct().symbols, req.payload.symbols);

  EncodeRequest bytes;
  bytes.secure = {1, 1};
  bytes.seed = 3;
  bytes.payload.bytes = {};
  // One secret L-symbol is 24 bits, less than the length prefix.
  EXPECT_EQ(code_of([&] { Cluster::create(fresh("sb"), bytes); }), ErrorCode::PayloadTooLarge);
  bytes.secure = {0, 1};
  bytes.payload.bytes = {0x42, 0x99};
  EXPECT_EQ(Cluster::create(fresh("sb2"), bytes).reconstruct().bytes, bytes.payload.bytes);
}

TEST_F(ClusterTest, RepairIsStableAcrossHelperSets) {
  auto c = Cluster::create(fresh("stable"), symbols_request({9, 8, 7, 6, 5, 4}, 6));
  const auto before = c.read_share(1);
  const auto e1 = c.fail_repair(1, NodeSet{2, 3, 4, 5});
  const auto e2 = c.fail_repair(1, NodeSet{3, 4, 5, 6});
  EXPECT_EQ(e1.epoch, 1);
  EXPECT_EQ(e2.epoch, 2);
  EXPECT_EQ(c.read_share(1), before);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(e1.symbols[i], e2.symbols[i - 1]);
  const auto e3 = c.fail_repair(1);
  EXPECT_EQ(e3.helpers, (NodeSet{2, 3, 4, 5}));
  EXPECT_EQ(c.repair_events().size(), 3U);

  EXPECT_EQ(code_of([&] { c.fail_repair(1, NodeSet{2, 3, 4}); }), ErrorCode::WrongHelperCount);
  EXPECT_EQ(code_of([&] { c.fail_repair(7); }), ErrorCode::UnknownNode);
  EXPECT_TRUE(c.replay().match);
  EXPECT_TRUE(c.share_consistency().pass);
}

TEST_F(ClusterTest, AttackAccumulatesNoNewRank) {
  auto c = Cluster::create(fresh("attack"), symbols_request({1, 1, 2, 3, 5, 8}, 6));
  c.fail_repair(1, NodeSet{2, 3, 4, 5});
  c.fail_repair(1, NodeSet{3, 4, 5, 6});
  c.fail_repair(1, NodeSet{2, 4, 5, 6});
  const auto r = c.attack({{}, {1}});
  EXPECT_EQ(r.leakage, 4U);
  EXPECT_EQ(r.growth, 0U);
  EXPECT_EQ(r.repairs_observed, 3U);
  EXPECT_EQ(r.rows, 12U);
  EXPECT_TRUE(r.covered);
  EXPECT_FALSE(r.perfect);
  EXPECT_EQ(r.leakage, leakage(c.code(), {{}, {1}}));
  const auto window = c.attack({{2}, {1}}, std::pair{2, 2});
  EXPECT_EQ(window.repairs_observed, 1U);
  EXPECT_EQ(window.leakage, leakage(c.code(), {{2}, {1}}));
  EXPECT_EQ(c.attack({{}, {3}}).leakage, 0U);
  EXPECT_FALSE(c.attack({{}, {3}}).covered);
  EXPECT_EQ(code_of([&] { c.attack({{1}, {1}}); }), ErrorCode::BadModel);
}

TEST_F(ClusterTest, SecureClusterAttackIsPerfect) {
  auto req = symbols_request({0x5, 0x7}, 5);
  req.secure = {0, 1};
  req.seed = 1;
  auto c = Cluster::create(fresh("secure"), req);
  for (int f = 1; f <= 5; ++f) c.fail_repair(f);
  for (int f = 1; f <= 5; ++f) {
    const auto r = c.attack({{}, {f}});
    EXPECT_TRUE(r.perfect);
    EXPECT_EQ(r.leakage, 4U);
  }
  EXPECT_EQ(c.reconstruct(NodeSet{3, 4, 5}).symbols, req.payload.symbols);
}

TEST_F(ClusterTest, CorruptionIsDetected) {
  auto c = Cluster::create(fresh("corrupt"), symbols_request({3, 1, 4, 1, 5, 9}));
  c.fail_repair(2);
  ASSERT_TRUE(c.share_consistency().pass);
  {
    std::fstream f(c.dir() / "share_3.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(1);
    f.put(static_cast<char>(0x0F ^ 0x01));
  }
  const auto res = c.share_consistency();
  EXPECT_FALSE(res.pass);
  EXPECT_TRUE(res.witness.has_value());
  EXPECT_FALSE(c.replay().match);
  EXPECT_EQ(code_of([&] { c.fail_repair(3); }), ErrorCode::Inconsistent);

  {
    std::ofstream f(c.dir() / "share_4.bin", std::ios::binary | std::ios::trunc);
    f << "x";
  }
  EXPECT_FALSE(c.share_consistency().pass);
}

}  // namespace
}  // namespace rsl::cluster
