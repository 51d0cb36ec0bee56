#ifndef RSL_CLUSTER_HPP_
#define RSL_CLUSTER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsl/harness.hpp"
#include "rsl/pmmsr.hpp"
#include "rsl/secrecy.hpp"

// A storage cluster simulated as a directory:
//   meta.json       code, field, points, secure scheme and payload framing
//   share_<i>.bin   alpha x t field elements of node i, row-major, each
//                   stored little-endian in the field's byte width
//   events.jsonl    encode event (epoch 0) then one line per repair
//   .lock           advisory lock; writers take it exclusively
namespace rsl::cluster {

inline constexpr int kLayoutVersion = 1;

enum class PayloadMode { Bytes, Symbols };

// Bytes are framed with a 4-byte big-endian length and packed into field
// symbols of floor(log2 |F|) bits, most significant bit first. Symbols are
// taken as is: F elements in plain mode, L elements packed as
// sum_j c_j |F|^j in secure mode.
struct Payload {
  PayloadMode mode = PayloadMode::Bytes;
  std::vector<std::uint8_t> bytes;
  std::vector<std::uint64_t> symbols;

  bool operator==(const Payload&) const = default;
};

struct EncodeRequest {
  int n = 5;
  int k = 3;
  int m = 1;
  std::uint64_t p = 2;
  int w = 4;
  std::optional<std::pair<int, int>> secure;
  // Seed for the randomness R; drawn from std::random_device when absent.
  std::optional<std::uint64_t> seed;
  Payload payload;
};

struct RepairEvent {
  int epoch = 0;
  NodeId failed = 0;
  NodeSet helpers;
  // symbols[h] is the beta x t block helper helpers[h] sent, row-major.
  std::vector<std::vector<Elem>> symbols;
};

struct AttackResult {
  EavesdropperModel model;
  std::pair<int, int> epochs;
  std::size_t rows = 0;
  std::size_t leakage = 0;
  std::size_t secure_size = 0;
  bool perfect = false;
  // rank(all rows) - rank(W_E with only the first observed repair of each f).
  std::size_t growth = 0;
  std::size_t repairs_observed = 0;
  // Every f in F was repaired at least once in the window.
  bool covered = false;

  std::string to_json() const;
};

struct ReplayResult {
  bool match = false;
  int events = 0;
  std::optional<std::string> witness;
};

class Cluster {
 public:
  // Encodes the payload into a fresh cluster directory. Throws
  // PayloadTooLarge, CapacityZero, IoError.
  static Cluster create(const std::filesystem::path& dir, const EncodeRequest& req);
  static Cluster open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  const PmMsrCode& code() const { return code_; }
  const std::optional<SecureScheme>& scheme() const { return scheme_; }
  // Number of field coefficients per stored symbol (1 in plain mode).
  int layers() const;
  // Payload capacity in symbols of the payload alphabet.
  std::size_t capacity_symbols() const;

  FMatrix read_share(NodeId node) const;
  void write_share(NodeId node, const FMatrix& share) const;
  std::vector<RepairEvent> repair_events() const;

  // Regenerates node f from `helpers` (default: the first d other nodes),
  // checks the result equals the old share bit for bit and logs the
  // repair symbols. Throws UnknownNode, WrongHelperCount, Inconsistent.
  RepairEvent fail_repair(NodeId failed, std::optional<NodeSet> helpers = {});
  // Default nodes: 1..k. Throws UnknownNode, WrongNodeCount.
  Payload reconstruct(std::optional<NodeSet> nodes = {}) const;
  // Observation rows of W_E plus every logged repair into F whose epoch is
  // inside the (inclusive) window. Throws BadModel.
  AttackResult attack(const EavesdropperModel& model,
                      std::optional<std::pair<int, int>> epochs = {}) const;
  // Replays the log from the encoded shares and compares with the files.
  ReplayResult replay() const;
  // Every k-subset decodes the same message, every node repairs to its
  // stored share and the log replays to the files.
  PropertyResult share_consistency(const Budget& budget = {}) const;

 private:
  Cluster(std::filesystem::path dir, PmMsrCode code, std::optional<SecureScheme> scheme,
          PayloadMode mode, std::size_t length);

  FMatrix decode_message(const NodeSet& nodes, const std::vector<FMatrix>& shares) const;
  void append_event(const std::string& line) const;

  std::filesystem::path dir_;
  PmMsrCode code_;
  std::optional<SecureScheme> scheme_;
  PayloadMode mode_;
  std::size_t length_;
};

}  // namespace rsl::cluster

#endif  // RSL_CLUSTER_HPP_
