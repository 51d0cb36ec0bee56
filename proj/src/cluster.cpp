#include "rsl/cluster.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rsl/entropy.hpp"
#include "rsl/error.hpp"
#include "rsl/subsets.hpp"

namespace rsl::cluster {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Advisory lock on <dir>/.lock, held for the lifetime of the object.
class DirLock {
 public:
  DirLock(const fs::path& dir, bool exclusive) {
    const auto path = dir / ".lock";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::IoError, "cannot lock " + path.string());
    }
  }
  ~DirLock() { ::close(fd_); }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Write to a temporary name, then rename over the target.
void write_file(const fs::path& path, const std::string& data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

fs::path share_path(const fs::path& dir, NodeId node) {
  return dir / ("share_" + std::to_string(node) + ".bin");
}

int symbol_bits(std::uint64_t order) { return std::bit_width(order) - 1; }

std::vector<std::uint64_t> pack_bits(const std::vector<std::uint8_t>& bytes, int bits) {
  std::vector<std::uint64_t> out;
  std::uint64_t acc = 0;
  int have = 0;
  for (std::uint8_t byte : bytes)
    for (int b = 7; b >= 0; --b) {
      acc = (acc << 1) | ((byte >> b) & 1U);
      if (++have == bits) {
        out.push_back(acc);
        acc = 0;
        have = 0;
      }
    }
  if (have > 0) out.push_back(acc << (bits - have));
  return out;
}

std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint64_t>& symbols, int bits,
                                      std::size_t count) {
  std::vector<std::uint8_t> out;
  std::uint8_t acc = 0;
  int have = 0;
  for (std::uint64_t s : symbols)
    for (int b = bits - 1; b >= 0 && out.size() < count; --b) {
      acc = static_cast<std::uint8_t>((acc << 1) | ((s >> b) & 1U));
      if (++have == 8) {
        out.push_back(acc);
        acc = 0;
        have = 0;
      }
    }
  return out;
}

std::string set_str(const NodeSet& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

std::uint64_t parse_hex(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 16);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Inconsistent, "bad hex value " + s);
  }
}

json matrix_json(const FMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(hex(m(r, c)));
  return out;
}

FMatrix matrix_from_json(const FieldSpec& f, const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows * cols)
    throw Error(ErrorCode::Inconsistent, "logged block has the wrong size");
  FMatrix out(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = parse_hex(j[r * cols + c].get<std::string>());
      if (!f.contains(v)) throw Error(ErrorCode::Inconsistent, "logged value outside the field");
      out(r, c) = v;
    }
  return out;
}

// Uniform value in [0, bound) by rejection on the smallest covering mask.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t mask = std::bit_ceil(bound) - 1;
  for (;;) {
    const std::uint64_t v = rng() & mask;
    if (v < bound) return v;
  }
}

// |F|^t, or nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> checked_power(std::uint64_t q, int t) {
  std::uint64_t out = 1;
  for (int i = 0; i < t; ++i) {
    if (out > UINT64_MAX / q) return std::nullopt;
    out *= q;
  }
  return out;
}

LElem unpack_l(const ExtensionSpec& ext, std::uint64_t v) {
  const auto q = ext.base_order();
  LElem out(static_cast<std::size_t>(ext.degree()));
  for (auto& c : out) {
    c = v % q;
    v /= q;
  }
  if (v != 0) throw Error(ErrorCode::BadParams, "symbol does not fit in the extension field");
  return out;
}

std::uint64_t pack_l(const ExtensionSpec& ext, const LElem& e) {
  const auto q = ext.base_order();
  std::uint64_t out = 0;
  for (auto it = e.rbegin(); it != e.rend(); ++it) out = out * q + *it;
  return out;
}

const char* mode_name(PayloadMode m) { return m == PayloadMode::Bytes ? "bytes" : "symbols"; }

json events_json(const fs::path& dir) {
  json out = json::array();
  std::istringstream in(read_file(dir / "events.jsonl"));
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace

std::string AttackResult::to_json() const {
  json j;
  j["model"] = {{"E", model.E}, {"F", model.F}};
  j["epochs"] = {epochs.first, epochs.second};
  j["rows"] = rows;
  j["leakage"] = leakage;
  j["secure_size"] = secure_size;
  j["perfect"] = perfect;
  j["growth"] = growth;
  j["repairs_observed"] = repairs_observed;
  j["covered"] = covered;
  return j.dump();
}

Cluster::Cluster(fs::path dir, PmMsrCode code, std::optional<SecureScheme> scheme,
                 PayloadMode mode, std::size_t length)
    : dir_(std::move(dir)), code_(std::move(code)), scheme_(std::move(scheme)), mode_(mode),
      length_(length) {}

int Cluster::layers() const { return scheme_ ? scheme_->extension().degree() : 1; }

std::size_t Cluster::capacity_symbols() const {
  const auto& p = code_.params();
  const std::size_t slots = scheme_ ? static_cast<std::size_t>(scheme_->secret_size())
                                    : static_cast<std::size_t>(p.B);
  if (mode_ == PayloadMode::Symbols) return slots;
  const std::size_t bits = slots * static_cast<std::size_t>(layers()) *
                           static_cast<std::size_t>(symbol_bits(code_.field().order()));
  return bits / 8 >= 4 ? bits / 8 - 4 : 0;
}

Cluster Cluster::create(const fs::path& dir, const EncodeRequest& req) {
  auto code = PmMsrCode::construct(CodeParams::product_matrix(req.n, req.k, req.m),
                                   FieldSpec::make(req.p, req.w));
  const auto& f = code.field();
  const auto& p = code.params();
  std::optional<SecureScheme> scheme;
  if (req.secure) scheme = SecureScheme::make(code, req.secure->first, req.secure->second);
  const int t = scheme ? scheme->extension().degree() : 1;
  const std::size_t slots = scheme ? static_cast<std::size_t>(scheme->secret_size())
                                   : static_cast<std::size_t>(p.B);

  // The data part as F symbols, t per stored symbol.
  std::vector<Elem> data;
  std::size_t length = 0;
  if (req.payload.mode == PayloadMode::Bytes) {
    length = req.payload.bytes.size();
    if (length > UINT32_MAX) throw Error(ErrorCode::PayloadTooLarge, "payload over 4 GiB");
    std::vector<std::uint8_t> framed = {
        static_cast<std::uint8_t>(length >> 24), static_cast<std::uint8_t>(length >> 16),
        static_cast<std::uint8_t>(length >> 8), static_cast<std::uint8_t>(length)};
    framed.insert(framed.end(), req.payload.bytes.begin(), req.payload.bytes.end());
    data = pack_bits(framed, symbol_bits(f.order()));
    if (data.size() > slots * static_cast<std::size_t>(t))
      throw Error(ErrorCode::PayloadTooLarge,
                  std::to_string(length) + " bytes plus framing need " +
                      std::to_string(data.size()) + " field symbols, only " +
                      std::to_string(slots * static_cast<std::size_t>(t)) + " available");
  } else {
    length = req.payload.symbols.size();
    if (scheme && !checked_power(f.order(), t))
      throw Error(ErrorCode::BadParams, "extension symbols do not fit in 64 bits; use bytes");
    if (length > slots)
      throw Error(ErrorCode::PayloadTooLarge, std::to_string(length) + " symbols, only " +
                                                  std::to_string(slots) + " available");
    for (auto s : req.payload.symbols) {
      if (scheme) {
        for (auto c : unpack_l(scheme->extension(), s)) data.push_back(c);
      } else {
        if (!f.contains(s)) throw Error(ErrorCode::BadParams, "symbol " + hex(s) + " not in F");
        data.push_back(s);
      }
    }
  }
  data.resize(slots * static_cast<std::size_t>(t), f.zero());

  std::uint64_t seed = 0;
  FMatrix message(f, static_cast<std::size_t>(p.B), static_cast<std::size_t>(t));
  if (scheme) {
    const auto& ext = scheme->extension();
    seed = req.seed ? *req.seed : (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();
    std::mt19937_64 rng(seed);
    std::vector<LElem> secret, randomness;
    for (std::size_t i = 0; i < slots; ++i)
      secret.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(i * t),
                          data.begin() + static_cast<std::ptrdiff_t>((i + 1) * t));
    for (int i = 0; i < scheme->randomness_size(); ++i) {
      LElem r(static_cast<std::size_t>(t));
      for (auto& c : r) c = uniform_below(rng, f.order());
      randomness.push_back(std::move(r));
    }
    message = to_layers(ext, scheme->wrap(secret, randomness));
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) message(i, 0) = data[i];
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  DirLock lock(dir, true);
  if (fs::exists(dir / "meta.json"))
    throw Error(ErrorCode::IoError, dir.string() + " already holds a cluster");

  json meta;
  meta["layout_version"] = kLayoutVersion;
  meta["params"] = {{"n", p.n}, {"k", p.k}, {"d", p.d}, {"m", p.m},
                    {"alpha", p.alpha}, {"beta", p.beta}, {"B", p.B}};
  meta["field"] = json::parse(f.to_json());
  json points = json::array();
  for (auto x : code.points()) points.push_back(hex(x));
  meta["points"] = points;
  if (scheme) {
    meta["secure"] = {{"l1", scheme->l1()},
                      {"l2", scheme->l2()},
                      {"ell", scheme->randomness_size()},
                      {"secret_size", scheme->secret_size()},
                      {"extension", {{"t", t}, {"modulus", scheme->extension().modulus()}}},
                      {"seed", seed}};
  } else {
    meta["secure"] = nullptr;
  }
  meta["payload"] = {{"mode", mode_name(req.payload.mode)}, {"length", length}};

  Cluster cluster(dir, code, scheme, req.payload.mode, length);
  const auto shares = code.encode_columns(message);
  json event;
  event["epoch"] = 0;
  event["event"] = "encode";
  event["shares"] = json::array();
  for (int i = 1; i <= p.n; ++i) {
    const auto& share = shares[static_cast<std::size_t>(i - 1)];
    cluster.write_share(i, share);
    event["shares"].push_back(matrix_json(share));
  }
  write_file(dir / "events.jsonl", event.dump() + "\n");
  write_file(dir / "meta.json", meta.dump(2) + "\n");
  return cluster;
}

Cluster Cluster::open(const fs::path& dir) {
  DirLock lock(dir, false);
  json meta;
  try {
    meta = json::parse(read_file(dir / "meta.json"));
    if (meta.at("layout_version").get<int>() != kLayoutVersion)
      throw Error(ErrorCode::IoError, "unsupported layout version");
    const auto& pj = meta.at("params");
    const auto params = CodeParams::product_matrix(pj.at("n").get<int>(), pj.at("k").get<int>(),
                                                   pj.at("m").get<int>());
    auto field = FieldSpec::from_json(meta.at("field").dump());
    std::vector<Elem> points;
    for (const auto& x : meta.at("points")) points.push_back(parse_hex(x.get<std::string>()));
    auto code = PmMsrCode::construct(params, field, points);
    std::optional<SecureScheme> scheme;
    if (!meta.at("secure").is_null()) {
      const auto& sj = meta.at("secure");
      const auto& ej = sj.at("extension");
      auto ext = ExtensionSpec::make(field, ej.at("t").get<int>(),
                                     ej.at("modulus").get<std::vector<std::uint64_t>>());
      scheme = SecureScheme::restore(code, ext, sj.at("ell").get<int>(), sj.at("l1").get<int>(),
                                     sj.at("l2").get<int>());
    }
    const auto& pl = meta.at("payload");
    const auto mode =
        pl.at("mode").get<std::string>() == "bytes" ? PayloadMode::Bytes : PayloadMode::Symbols;
    return Cluster(dir, std::move(code), std::move(scheme), mode,
                   pl.at("length").get<std::size_t>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, "malformed meta.json: " + std::string(e.what()));
  }
}

FMatrix Cluster::read_share(NodeId node) const {
  const auto& p = code_.params();
  if (node < 1 || node > p.n) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(node));
  const auto& f = code_.field();
  const auto bw = static_cast<std::size_t>(f.byte_width());
  const auto rows = static_cast<std::size_t>(p.alpha);
  const auto cols = static_cast<std::size_t>(layers());
  const auto data = read_file(share_path(dir_, node));
  if (data.size() != rows * cols * bw)
    throw Error(ErrorCode::Inconsistent, "share " + std::to_string(node) + " has " +
                                             std::to_string(data.size()) + " bytes");
  FMatrix out(f, rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < bw; ++b)
      v |= std::uint64_t{static_cast<std::uint8_t>(data[i * bw + b])} << (8 * b);
    if (!f.contains(v))
      throw Error(ErrorCode::Inconsistent, "share " + std::to_string(node) + " holds " + hex(v));
    out(i / cols, i % cols) = v;
  }
  return out;
}

void Cluster::write_share(NodeId node, const FMatrix& share) const {
  const auto bw = static_cast<std::size_t>(code_.field().byte_width());
  std::string data;
  for (std::size_t r = 0; r < share.rows(); ++r)
    for (std::size_t c = 0; c < share.cols(); ++c)
      for (std::size_t b = 0; b < bw; ++b)
        data.push_back(static_cast<char>((share(r, c) >> (8 * b)) & 0xFF));
  write_file(share_path(dir_, node), data);
}

std::vector<RepairEvent> Cluster::repair_events() const {
  std::vector<RepairEvent> out;
  const auto beta = static_cast<std::size_t>(code_.params().beta);
  const auto cols = static_cast<std::size_t>(layers());
  try {
    for (const auto& e : events_json(dir_)) {
      if (e.at("event").get<std::string>() != "repair") continue;
      RepairEvent ev;
      ev.epoch = e.at("epoch").get<int>();
      ev.failed = e.at("failed").get<int>();
      ev.helpers = e.at("helpers").get<NodeSet>();
      for (const auto& block : e.at("symbols")) {
        const auto m = matrix_from_json(code_.field(), block, beta, cols);
        ev.symbols.emplace_back(m.data().begin(), m.data().end());
      }
      out.push_back(std::move(ev));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoError, "malformed events.jsonl: " + std::string(e.what()));
  }
  return out;
}

void Cluster::append_event(const std::string& line) const {
  std::ofstream out(dir_ / "events.jsonl", std::ios::app);
  if (!out) throw Error(ErrorCode::IoError, "cannot append to events.jsonl");
  out << line << '\n';
  if (!out) throw Error(ErrorCode::IoError, "cannot append to events.jsonl");
}

RepairEvent Cluster::fail_repair(NodeId failed, std::optional<NodeSet> helpers) {
  const auto& p = code_.params();
  if (failed < 1 || failed > p.n)
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(failed));
  NodeSet chosen;
  if (helpers) {
    chosen = *helpers;
    if (static_cast<int>(chosen.size()) != p.d)
      throw Error(ErrorCode::WrongHelperCount, "need " + std::to_string(p.d) + " helpers, got " +
                                                   std::to_string(chosen.size()));
    for (int h : chosen)
      if (h < 1 || h > p.n) throw Error(ErrorCode::UnknownNode, "helper " + std::to_string(h));
  } else {
    const auto others = set_minus(iota_set(1, p.n), {failed});
    chosen.assign(others.begin(), others.begin() + p.d);
  }

  DirLock lock(dir_, true);
  const auto before = read_share(failed);
  std::vector<FMatrix> symbols;
  for (int h : chosen) symbols.push_back(code_.repair_symbol_columns(h, failed, read_share(h)));
  std::error_code ec;
  fs::remove(share_path(dir_, failed), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot delete share " + std::to_string(failed));
  const auto repaired = code_.repair_columns(failed, chosen, symbols);
  if (!(repaired == before)) {
    write_share(failed, before);
    throw Error(ErrorCode::Inconsistent,
                "repair of node " + std::to_string(failed) + " does not match its old share");
  }
  write_share(failed, repaired);

  RepairEvent ev;
  ev.epoch = static_cast<int>(events_json(dir_).size());
  ev.failed = failed;
  ev.helpers = chosen;
  json j;
  j["epoch"] = ev.epoch;
  j["event"] = "repair";
  j["failed"] = failed;
  j["helpers"] = chosen;
  j["symbols"] = json::array();
  for (const auto& s : symbols) {
    j["symbols"].push_back(matrix_json(s));
    ev.symbols.emplace_back(s.data().begin(), s.data().end());
  }
  append_event(j.dump());
  return ev;
}

FMatrix Cluster::decode_message(const NodeSet& nodes, const std::vector<FMatrix>& shares) const {
  return code_.reconstruct_columns(nodes, shares);
}

Payload Cluster::reconstruct(std::optional<NodeSet> nodes) const {
  const auto& p = code_.params();
  const auto chosen = nodes ? *nodes : iota_set(1, p.k);
  if (static_cast<int>(chosen.size()) != p.k)
    throw Error(ErrorCode::WrongNodeCount,
                "need " + std::to_string(p.k) + " nodes, got " + std::to_string(chosen.size()));
  DirLock lock(dir_, false);
  std::vector<FMatrix> shares;
  for (int i : chosen) shares.push_back(read_share(i));
  const auto message = decode_message(chosen, shares);

  std::vector<Elem> data;
  std::vector<LElem> secret;
  if (scheme_) {
    secret = scheme_->unwrap(from_layers(scheme_->extension(), message));
    for (const auto& s : secret) data.insert(data.end(), s.begin(), s.end());
  } else {
    for (std::size_t i = 0; i < message.rows(); ++i) data.push_back(message(i, 0));
  }

  Payload out;
  out.mode = mode_;
  if (mode_ == PayloadMode::Symbols) {
    for (std::size_t i = 0; i < length_; ++i)
      out.symbols.push_back(scheme_ ? pack_l(scheme_->extension(), secret[i]) : data[i]);
    return out;
  }
  const int bits = symbol_bits(code_.field().order());
  const auto framed = unpack_bits(data, bits, data.size() * static_cast<std::size_t>(bits) / 8);
  if (framed.size() < 4) throw Error(ErrorCode::Inconsistent, "no room for the length prefix");
  const std::size_t length = (std::size_t{framed[0]} << 24) | (std::size_t{framed[1]} << 16) |
                             (std::size_t{framed[2]} << 8) | framed[3];
  if (length != length_ || length > framed.size() - 4)
    throw Error(ErrorCode::Inconsistent, "decoded length prefix " + std::to_string(length) +
                                             " disagrees with metadata");
  out.bytes.assign(framed.begin() + 4, framed.begin() + 4 + static_cast<std::ptrdiff_t>(length));
  return out;
}

AttackResult Cluster::attack(const EavesdropperModel& model,
                             std::optional<std::pair<int, int>> epochs) const {
  validate_model(code_, model);
  const auto& p = code_.params();
  const auto events = repair_events();
  AttackResult res;
  res.model = model;
  res.epochs = epochs ? *epochs
                      : (events.empty() ? std::pair{0, 0} : std::pair{1, events.back().epoch});

  const auto length = static_cast<std::size_t>(p.B);
  ObsSet all = ObsSet::of(code_, select::Stored{model.E});
  ObsSet baseline = all;
  std::map<NodeId, int> first_epoch;
  for (const auto& ev : events) {
    if (ev.epoch < res.epochs.first || ev.epoch > res.epochs.second) continue;
    if (std::find(model.F.begin(), model.F.end(), ev.failed) == model.F.end()) continue;
    ++res.repairs_observed;
    const bool first = first_epoch.try_emplace(ev.failed, ev.epoch).second;
    ObsSet rows(code_.field(), length);
    for (int h : ev.helpers)
      for (int s = 0; s < p.beta; ++s)
        rows.add({RepairTag{h, ev.failed, s, ev.epoch}, code_.repair_row(h, ev.failed, s)});
    all = all.united(rows);
    if (first) baseline = baseline.united(rows);
  }
  res.rows = all.size();
  res.leakage = joint_entropy(all);
  res.secure_size = length - res.leakage;
  res.growth = res.leakage - joint_entropy(baseline);
  res.covered = first_epoch.size() == model.F.size();
  // A plain cluster stores the message in the clear: only an empty view is safe.
  res.perfect = scheme_ ? verify_perfect(*scheme_, all).perfect : res.leakage == 0;
  return res;
}

ReplayResult Cluster::replay() const {
  ReplayResult res;
  const auto& p = code_.params();
  const auto rows = static_cast<std::size_t>(p.alpha);
  const auto cols = static_cast<std::size_t>(layers());
  const auto beta = static_cast<std::size_t>(p.beta);
  try {
    DirLock lock(dir_, false);
    const auto log = events_json(dir_);
    if (log.empty() || log[0].at("event").get<std::string>() != "encode") {
      res.witness = "log does not start with an encode event";
      return res;
    }
    std::vector<FMatrix> state;
    for (const auto& block : log[0].at("shares"))
      state.push_back(matrix_from_json(code_.field(), block, rows, cols));
    if (static_cast<int>(state.size()) != p.n) {
      res.witness = "encode event has the wrong number of shares";
      return res;
    }
    for (std::size_t e = 1; e < log.size(); ++e) {
      const auto& ev = log[e];
      ++res.events;
      const int failed = ev.at("failed").get<int>();
      const auto helpers = ev.at("helpers").get<NodeSet>();
      std::vector<FMatrix> symbols;
      for (std::size_t h = 0; h < helpers.size(); ++h) {
        auto s = code_.repair_symbol_columns(helpers[h], failed,
                                             state[static_cast<std::size_t>(helpers[h] - 1)]);
        if (!(s == matrix_from_json(code_.field(), ev.at("symbols").at(h), beta, cols))) {
          res.witness = "epoch " + std::to_string(ev.at("epoch").get<int>()) + ": helper " +
                        std::to_string(helpers[h]) + " symbols differ from the log";
          return res;
        }
        symbols.push_back(std::move(s));
      }
      state[static_cast<std::size_t>(failed - 1)] = code_.repair_columns(failed, helpers, symbols);
    }
    for (int i = 1; i <= p.n; ++i)
      if (!(read_share(i) == state[static_cast<std::size_t>(i - 1)])) {
        res.witness = "share " + std::to_string(i) + " differs from the replayed state";
        return res;
      }
  } catch (const Error& e) {
    res.witness = e.what();
    return res;
  } catch (const json::exception& e) {
    res.witness = std::string("malformed events.jsonl: ") + e.what();
    return res;
  }
  res.match = true;
  return res;
}

PropertyResult Cluster::share_consistency(const Budget& budget) const {
  const auto& p = code_.params();
  PropertyResult res;
  res.id = "cluster.share_consistency";
  res.instance = p.describe() + " at " + dir_.string();
  auto fail = [&](std::string witness) {
    res.pass = false;
    res.witness = std::move(witness);
    return res;
  };

  std::vector<FMatrix> shares;
  try {
    for (int i = 1; i <= p.n; ++i) shares.push_back(read_share(i));
  } catch (const Error& e) {
    return fail(e.what());
  }

  auto subsets = combinations(iota_set(1, p.n), p.k);
  if (subsets.size() > budget.max_cases) {
    std::vector<NodeSet> sample;
    std::mt19937_64 rng(budget.seed);
    std::sample(subsets.begin(), subsets.end(), std::back_inserter(sample), budget.max_cases, rng);
    subsets = std::move(sample);
    res.mode = "sampled";
    res.seed = budget.seed;
  }
  std::optional<FMatrix> reference;
  for (const auto& s : subsets) {
    ++res.checked;
    std::vector<FMatrix> picked;
    for (int i : s) picked.push_back(shares[static_cast<std::size_t>(i - 1)]);
    const auto msg = decode_message(s, picked);
    if (!reference)
      reference = msg;
    else if (!(msg == *reference))
      return fail("nodes " + set_str(s) + " decode a different message");
  }

  for (int f = 1; f <= p.n; ++f) {
    ++res.checked;
    const auto others = set_minus(iota_set(1, p.n), {f});
    const NodeSet helpers(others.begin(), others.begin() + p.d);
    std::vector<FMatrix> symbols;
    for (int h : helpers)
      symbols.push_back(
          code_.repair_symbol_columns(h, f, shares[static_cast<std::size_t>(h - 1)]));
    if (!(code_.repair_columns(f, helpers, symbols) == shares[static_cast<std::size_t>(f - 1)]))
      return fail("node " + std::to_string(f) + " does not repair to its stored share");
  }

  ++res.checked;
  const auto rep = replay();
  if (!rep.match) return fail("replay: " + rep.witness.value_or("mismatch"));
  return res;
}

}  // namespace rsl::cluster
