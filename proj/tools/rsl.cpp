// rsl: command-line front end for the simulated storage cluster.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsl/capacity.hpp"
#include "rsl/cluster.hpp"
#include "rsl/error.hpp"
#include "rsl/harness.hpp"

namespace {

using rsl::Error;
using rsl::ErrorCode;
using json = nlohmann::ordered_json;

// "1,3,5" or "0..2" or a mix such as "1,4..6".
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::BadParams, "not an integer list: " + text);
    }
  }
  return out;
}

std::vector<std::uint64_t> parse_symbols(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used, 0));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::BadParams, "not a symbol: " + item);
    }
  }
  return out;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct CodeFlags {
  int n = 5;
  int k = 3;
  std::optional<int> d;
  int m = 1;
  std::vector<int> field = {2, 4};

  void add(CLI::App* app) {
    app->add_option("--n", n, "number of nodes")->capture_default_str();
    app->add_option("--k", k, "nodes needed to reconstruct")->capture_default_str();
    app->add_option("--d", d, "helpers per repair (must be 2k-2)");
    app->add_option("--m", m, "concatenated copies (beta)")->capture_default_str();
    app->add_option("--field", field, "field GF(p^w) as p,w")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();
  }

  void check() const {
    if (d && *d != 2 * k - 2)
      throw Error(ErrorCode::BadParams, "product-matrix codes need d = 2k-2 = " +
                                            std::to_string(2 * k - 2));
  }

  rsl::PmMsrCode code() const {
    check();
    return rsl::PmMsrCode::construct(rsl::CodeParams::product_matrix(n, k, m),
                                     rsl::FieldSpec::make(static_cast<std::uint64_t>(field[0]),
                                                          field[1]));
  }
};

int run_encode(const std::string& dir, const CodeFlags& code, const std::vector<int>& secure,
               std::optional<std::uint64_t> seed, const std::string& input,
               const std::optional<std::string>& symbols, bool as_json) {
  code.check();
  rsl::cluster::EncodeRequest req;
  req.n = code.n;
  req.k = code.k;
  req.m = code.m;
  req.p = static_cast<std::uint64_t>(code.field[0]);
  req.w = code.field[1];
  if (!secure.empty()) req.secure = std::pair{secure[0], secure[1]};
  req.seed = seed;
  if (symbols) {
    req.payload.mode = rsl::cluster::PayloadMode::Symbols;
    req.payload.symbols = parse_symbols(*symbols);
  } else {
    req.payload.mode = rsl::cluster::PayloadMode::Bytes;
    if (!input.empty()) req.payload.bytes = read_input(input);
  }
  const auto c = rsl::cluster::Cluster::create(dir, req);
  const auto& p = c.code().params();
  if (as_json) {
    json j;
    j["cluster"] = dir;
    j["params"] = {{"n", p.n}, {"k", p.k}, {"d", p.d}, {"alpha", p.alpha},
                   {"beta", p.beta}, {"B", p.B}, {"m", p.m}};
    if (c.scheme())
      j["secure"] = {{"l1", c.scheme()->l1()},
                     {"l2", c.scheme()->l2()},
                     {"ell", c.scheme()->randomness_size()},
                     {"secret_size", c.scheme()->secret_size()}};
    else
      j["secure"] = nullptr;
    j["capacity"] = c.capacity_symbols();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "encoded " << p.describe() << " into " << dir;
    if (c.scheme())
      std::cout << " (secret size " << c.scheme()->secret_size() << ", randomness "
                << c.scheme()->randomness_size() << ")";
    std::cout << "\n";
  }
  return 0;
}

int run_fail_repair(const std::string& dir, int node, const std::optional<std::string>& helpers,
                    bool as_json) {
  auto c = rsl::cluster::Cluster::open(dir);
  std::optional<rsl::NodeSet> chosen;
  if (helpers) chosen = parse_int_list(*helpers);
  const auto ev = c.fail_repair(node, chosen);
  if (as_json) {
    json j;
    j["epoch"] = ev.epoch;
    j["failed"] = ev.failed;
    j["helpers"] = ev.helpers;
    j["symbols"] = json::array();
    for (const auto& block : ev.symbols) {
      json row = json::array();
      for (auto v : block) row.push_back(hex(v));
      j["symbols"].push_back(row);
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "epoch " << ev.epoch << ": repaired node " << ev.failed << " from";
    for (int h : ev.helpers) std::cout << ' ' << h;
    std::cout << "\n";
  }
  return 0;
}

int run_reconstruct(const std::string& dir, const std::optional<std::string>& nodes,
                    const std::string& output, bool as_json) {
  const auto c = rsl::cluster::Cluster::open(dir);
  std::optional<rsl::NodeSet> chosen;
  if (nodes) chosen = parse_int_list(*nodes);
  const auto payload = c.reconstruct(chosen);
  if (payload.mode == rsl::cluster::PayloadMode::Symbols) {
    if (as_json) {
      json j = json::array();
      for (auto v : payload.symbols) j.push_back(hex(v));
      std::cout << json{{"symbols", j}}.dump() << "\n";
    } else {
      for (std::size_t i = 0; i < payload.symbols.size(); ++i)
        std::cout << (i ? " " : "") << hex(payload.symbols[i]);
      std::cout << "\n";
    }
    return 0;
  }
  if (output.empty() || output == "-") {
    std::cout.write(reinterpret_cast<const char*>(payload.bytes.data()),
                    static_cast<std::streamsize>(payload.bytes.size()));
  } else {
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(payload.bytes.data()),
              static_cast<std::streamsize>(payload.bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + output);
  }
  return 0;
}

int run_attack(const std::string& dir, const std::string& e, const std::string& f,
               const std::optional<std::string>& epochs) {
  const auto c = rsl::cluster::Cluster::open(dir);
  std::optional<std::pair<int, int>> window;
  if (epochs) {
    const auto v = parse_int_list(*epochs);
    if (v.empty()) throw Error(ErrorCode::BadParams, "--epochs needs lo,hi or lo..hi");
    window = std::pair{v.front(), v.back()};
  }
  std::cout << c.attack({parse_int_list(e), parse_int_list(f)}, window).to_json() << "\n";
  return 0;
}

struct TableFlags {
  std::vector<std::string> queries;
  std::optional<std::string> k, d, beta, l1, l2, n;
};

std::vector<rsl::CapacityQuery> table_queries(const TableFlags& t) {
  std::vector<rsl::CapacityQuery> out;
  for (const auto& q : t.queries) {
    const auto v = parse_int_list(q);
    if (v.size() != 5 && v.size() != 6)
      throw Error(ErrorCode::BadQuery, "--query needs k,d,beta,l1,l2[,n]: " + q);
    out.push_back(rsl::CapacityQuery::msr(v[0], v[1], v[2], v[3], v[4], v.size() == 6 ? v[5] : 0));
  }
  if (!t.k && !t.d && !t.beta && !t.l1 && !t.l2) return out;
  if (!t.k || !t.d) throw Error(ErrorCode::BadQuery, "a sweep needs at least --k and --d");
  // Pairs with l1 + l2 >= k are outside the model and skipped in sweeps.
  for (int k : parse_int_list(*t.k))
    for (int d : parse_int_list(*t.d))
      for (int beta : parse_int_list(t.beta.value_or("1")))
        for (int l1 : parse_int_list(t.l1.value_or("0.." + std::to_string(k - 1))))
          for (int l2 : parse_int_list(t.l2.value_or("0.." + std::to_string(k - 1)))) {
            if (l1 + l2 >= k) continue;
            for (int n : parse_int_list(t.n.value_or(std::to_string(d + 1))))
              out.push_back(rsl::CapacityQuery::msr(k, d, beta, l1, l2, n));
          }
  return out;
}

int run_capacity_table(const TableFlags& t, bool as_json) {
  const auto queries = table_queries(t);
  if (!as_json) {
    std::cout << rsl::capacity_csv(queries);
    return 0;
  }
  for (const auto& q : queries) {
    json j;
    j["k"] = q.k;
    j["d"] = q.d;
    j["n"] = q.n;
    j["alpha"] = q.alpha;
    j["beta"] = q.beta;
    j["l1"] = q.l1;
    j["l2"] = q.l2;
    json rows = json::array();
    for (const auto& b : rsl::bounds_table(q))
      rows.push_back({{"name", b.name}, {"value", rsl::to_string(b.value)},
                      {"kind", rsl::to_string(b.kind)}});
    j["bounds"] = rows;
    const auto pi = rsl::pi(q);
    j["category"] = pi.category == rsl::Category::Cat1 ? "Cat1" : "Cat2";
    j["t"] = pi.t ? json(*pi.t) : json(nullptr);
    j["e"] = pi.e ? json(*pi.e) : json(nullptr);
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int run_verify(const std::optional<std::string>& dir, const CodeFlags& flags,
               const std::vector<std::string>& properties, const rsl::Budget& budget) {
  std::optional<rsl::cluster::Cluster> c;
  if (dir) c = rsl::cluster::Cluster::open(*dir);
  const auto code = c ? c->code() : flags.code();
  std::vector<rsl::PropertyResult> results;
  if (properties.empty()) {
    results = rsl::check_all(code, budget);
  } else {
    for (const auto& id : properties)
      if (id != "cluster.share_consistency") results.push_back(rsl::check_property(id, code, budget));
  }
  const bool want_cluster =
      properties.empty() ||
      std::find(properties.begin(), properties.end(), "cluster.share_consistency") != properties.end();
  if (c && want_cluster) results.push_back(c->share_consistency(budget));
  std::cout << rsl::report_jsonl(results);
  return rsl::all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure regenerating-code storage toolkit"};
  app.require_subcommand(1);

  std::string cluster_dir;
  bool as_json = false;

  CodeFlags enc_code;
  std::vector<int> secure;
  std::optional<std::uint64_t> seed;
  std::string input;
  std::optional<std::string> symbols;
  auto* enc = app.add_subcommand("encode", "encode a payload into a new cluster directory");
  enc->add_option("--cluster", cluster_dir, "cluster directory")->required();
  enc_code.add(enc);
  enc->add_option("--secure", secure, "eavesdropper budget l1,l2")->delimiter(',')->expected(2);
  enc->add_option("--seed", seed, "seed for the secrecy randomness");
  auto* in_opt = enc->add_option("--input", input, "payload file ('-' for stdin)");
  enc->add_option("--symbols", symbols, "payload as comma-separated symbols")->excludes(in_opt);
  enc->add_flag("--json", as_json, "JSON summary");

  int node = 0;
  std::optional<std::string> helpers;
  auto* rep = app.add_subcommand("fail-repair", "fail a node and regenerate it from helpers");
  rep->add_option("--cluster", cluster_dir, "cluster directory")->required();
  rep->add_option("--node", node, "node to fail")->required();
  rep->add_option("--helpers", helpers, "helper nodes, e.g. 2,3,4,5");
  rep->add_flag("--json", as_json, "JSON event");

  std::optional<std::string> nodes;
  std::string output;
  auto* rec = app.add_subcommand("reconstruct", "decode the payload from k nodes");
  rec->add_option("--cluster", cluster_dir, "cluster directory")->required();
  rec->add_option("--nodes", nodes, "nodes to read, e.g. 1,2,3");
  rec->add_option("--output", output, "write byte payloads here instead of stdout");
  rec->add_flag("--json", as_json, "JSON output for symbol payloads");

  std::string e_set, f_set;
  std::optional<std::string> epochs;
  auto* att = app.add_subcommand("attack", "measure what an eavesdropper learned");
  att->add_option("--cluster", cluster_dir, "cluster directory")->required();
  att->add_option("--E", e_set, "storage-compromised nodes");
  att->add_option("--F", f_set, "repair-compromised nodes");
  att->add_option("--epochs", epochs, "inclusive epoch window lo,hi");
  att->add_flag("--json", as_json, "accepted for symmetry; output is always JSON");

  TableFlags table;
  bool as_csv = false;
  auto* cap = app.add_subcommand("capacity-table", "closed-form secrecy capacity and bounds");
  cap->add_option("--query", table.queries, "k,d,beta,l1,l2[,n]; repeatable");
  cap->add_option("--k", table.k, "sweep values, e.g. 2..6");
  cap->add_option("--d", table.d, "sweep values");
  cap->add_option("--beta", table.beta, "sweep values (default 1)");
  cap->add_option("--l1", table.l1, "sweep values (default 0..k-1)");
  cap->add_option("--l2", table.l2, "sweep values (default 0..k-1)");
  cap->add_option("--n", table.n, "sweep values (default d+1)");
  auto* csv_flag = cap->add_flag("--csv", as_csv, "CSV output (default)");
  cap->add_flag("--json", as_json, "JSON lines output")->excludes(csv_flag);

  CodeFlags ver_code;
  std::optional<std::string> ver_dir;
  std::vector<std::string> properties;
  rsl::Budget budget;
  auto* ver = app.add_subcommand("verify", "run the property harness");
  ver->add_option("--cluster", ver_dir, "check this cluster's code and shares");
  ver_code.add(ver);
  ver->add_option("--property", properties, "property id; repeatable (default: all)");
  ver->add_option("--max-cases", budget.max_cases, "cases per property before sampling")
      ->capture_default_str();
  ver->add_option("--seed", budget.seed, "sampling seed")->capture_default_str();
  ver->add_flag("--json", as_json, "accepted for symmetry; output is JSON lines");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) return run_encode(cluster_dir, enc_code, secure, seed, input, symbols, as_json);
    if (*rep) return run_fail_repair(cluster_dir, node, helpers, as_json);
    if (*rec) return run_reconstruct(cluster_dir, nodes, output, as_json);
    if (*att) return run_attack(cluster_dir, e_set, f_set, epochs);
    if (*cap) return run_capacity_table(table, as_json);
    if (*ver) return run_verify(ver_dir, ver_code, properties, budget);
  } catch (const Error& err) {
    std::cerr << "rsl: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "rsl: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
