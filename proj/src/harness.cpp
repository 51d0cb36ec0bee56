#include "rsl/harness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rsl/capacity.hpp"
#include "rsl/entropy.hpp"
#include "rsl/error.hpp"
#include "rsl/secrecy.hpp"
#include "rsl/subsets.hpp"

namespace rsl {

namespace {

std::string set_str(const NodeSet& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ']';
  return os.str();
}

std::string instance_of(const PmMsrCode& code) {
  const auto& f = code.field();
  return code.params().describe() + " over GF(" + std::to_string(f.characteristic()) + "^" +
         std::to_string(f.degree()) + ")";
}

// Applies the budget to a list of cases, recording how they were chosen.
template <typename T>
std::vector<T> pick(std::vector<T> cases, const Budget& budget, PropertyResult& res) {
  if (cases.size() <= budget.max_cases) return cases;
  std::vector<T> out;
  std::mt19937_64 rng(budget.seed);
  std::sample(cases.begin(), cases.end(), std::back_inserter(out), budget.max_cases, rng);
  res.mode = "sampled";
  res.seed = budget.seed;
  return out;
}

// Runs `check` over the cases, stopping at the first witness.
template <typename T>
void run(PropertyResult& res, const std::vector<T>& cases,
         const std::function<std::optional<std::string>(const T&)>& check) {
  for (const auto& c : cases) {
    ++res.checked;
    if (auto w = check(c)) {
      res.pass = false;
      res.witness = std::move(*w);
      return;
    }
  }
}

std::optional<std::string> mismatch(const std::string& what, std::size_t observed,
                                    std::size_t expected) {
  if (observed == expected) return std::nullopt;
  return what + " observed=" + std::to_string(observed) +
         " expected=" + std::to_string(expected);
}

ObsSet stored(const PmMsrCode& c, NodeSet s) { return ObsSet::of(c, select::Stored{std::move(s)}); }
ObsSet repair_into(const PmMsrCode& c, NodeSet f) {
  return ObsSet::of(c, select::RepairTo{std::move(f)});
}
ObsSet repair_from(const PmMsrCode& c, NodeSet helpers, NodeSet f) {
  return ObsSet::of(c, select::RepairFromTo{std::move(helpers), std::move(f)});
}

struct Pair {
  int l1;
  int l2;
};

std::vector<Pair> budget_pairs(int k) {
  std::vector<Pair> out;
  for (int l1 = 0; l1 < k; ++l1)
    for (int l2 = 0; l1 + l2 < k; ++l2) out.push_back({l1, l2});
  return out;
}

std::vector<EavesdropperModel> all_models(int limit, int k) {
  std::vector<EavesdropperModel> out;
  for (auto [l1, l2] : budget_pairs(k))
    for (auto& m : enumerate_models(limit, l1, l2)) out.push_back(std::move(m));
  return out;
}

bool is_cat1(const CodeParams& p, int l2) { return (l2 - 1) * p.beta < p.d - p.k + 1; }

using Check = std::function<void(const PmMsrCode&, const Budget&, PropertyResult&)>;

void node_entropy(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  run<int>(res, pick(iota_set(1, p.n), b, res), [&](const int& i) {
    return mismatch("node=" + std::to_string(i), joint_entropy(stored(code, {i})),
                    static_cast<std::size_t>(p.alpha));
  });
}

void link_entropy(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  std::vector<std::pair<int, int>> cases;
  for (int i = 1; i <= p.n; ++i)
    for (int j = 1; j <= p.n; ++j)
      if (i != j) cases.emplace_back(i, j);
  run<std::pair<int, int>>(res, pick(cases, b, res), [&](const auto& c) {
    return mismatch("helper=" + std::to_string(c.first) + " failed=" + std::to_string(c.second),
                    joint_entropy(repair_from(code, {c.first}, {c.second})),
                    static_cast<std::size_t>(p.beta));
  });
}

void reconstruction(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  run<NodeSet>(res, pick(combinations(iota_set(1, p.n), p.k), b, res), [&](const NodeSet& s) {
    return mismatch("nodes=" + set_str(s), joint_entropy(stored(code, s)),
                    static_cast<std::size_t>(p.k * p.alpha));
  });
}

void repair_independence(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  run<int>(res, pick(iota_set(1, p.n), b, res), [&](const int& i) {
    return mismatch("failed=" + std::to_string(i), joint_entropy(repair_into(code, {i})),
                    static_cast<std::size_t>(p.d * p.beta));
  });
}

void repair_determinism(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  std::vector<std::pair<int, NodeSet>> cases;
  for (int i = 1; i <= p.n; ++i) {
    // |A'| = k-1 and B' is the remaining d-k+1 helpers.
    for (auto& a : combinations(set_minus(iota_set(1, p.n), {i}), p.k - 1))
      cases.emplace_back(i, std::move(a));
  }
  run<std::pair<int, NodeSet>>(res, pick(cases, b, res), [&](const auto& c) {
    const auto& [i, a] = c;
    const auto rest = set_minus(set_minus(iota_set(1, p.n), {i}), a);
    const auto h = conditional_entropy(repair_from(code, rest, {i}),
                                       stored(code, {i}).united(repair_from(code, a, {i})));
    return mismatch("failed=" + std::to_string(i) + " A=" + set_str(a), h, 0);
  });
}

void secure_size(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  struct Split {
    NodeSet e, f, g;
  };
  std::vector<Split> cases;
  for (const auto& u : combinations(iota_set(1, p.n), p.k)) {
    int total = 1;
    for (int i = 0; i < p.k; ++i) total *= 3;
    for (int code3 = 0; code3 < total; ++code3) {
      Split s;
      int c = code3;
      for (int node : u) {
        (c % 3 == 0 ? s.e : c % 3 == 1 ? s.f : s.g).push_back(node);
        c /= 3;
      }
      if (!s.f.empty() && !s.g.empty()) cases.push_back(std::move(s));
    }
  }
  run<Split>(res, pick(cases, b, res), [&](const Split& s) {
    const auto lhs =
        conditional_entropy(repair_into(code, s.f), stored(code, set_union(s.e, s.f)));
    const auto rhs = joint_entropy(repair_from(code, s.g, s.f));
    return mismatch("E=" + set_str(s.e) + " F=" + set_str(s.f) + " G=" + set_str(s.g), lhs, rhs);
  });
}

void helper_symmetry(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  std::vector<NodeSet> cases;
  for (int size = 1; size < p.k; ++size)
    for (auto& f : combinations(iota_set(1, p.n), size)) cases.push_back(std::move(f));
  run<NodeSet>(res, pick(cases, b, res), [&](const NodeSet& f) -> std::optional<std::string> {
    const auto others = set_minus(iota_set(1, p.n), f);
    const auto first = joint_entropy(repair_from(code, {others.front()}, f));
    for (int g : others) {
      const auto h = joint_entropy(repair_from(code, {g}, f));
      if (h != first)
        return "F=" + set_str(f) + " i1=" + std::to_string(others.front()) +
               " i2=" + std::to_string(g) + " observed=" + std::to_string(h) +
               " expected=" + std::to_string(first);
    }
    return std::nullopt;
  });
}

void express(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  std::vector<NodeSet> cases;
  std::function<void(NodeSet&)> grow = [&](NodeSet& cur) {
    if (!cur.empty()) cases.push_back(cur);
    if (static_cast<int>(cur.size()) == b.express_max) return;
    for (int j = 1; j <= p.n; ++j) {
      if (std::find(cur.begin(), cur.end(), j) != cur.end()) continue;
      cur.push_back(j);
      grow(cur);
      cur.pop_back();
    }
  };
  NodeSet start;
  grow(start);
  run<NodeSet>(res, pick(cases, b, res), [&](const NodeSet& j) {
    NodeSet sorted = j;
    std::sort(sorted.begin(), sorted.end());
    const auto lhs = joint_entropy(repair_into(code, sorted));
    // Node j_l only receives from nodes outside {j_1, ..., j_l}.
    ObsSet reduced(code.field(), static_cast<std::size_t>(p.B));
    NodeSet seen;
    for (int node : j) {
      seen = set_union(seen, {node});
      reduced = reduced.united(repair_from(code, set_minus(iota_set(1, p.n), seen), {node}));
    }
    std::ostringstream os;
    os << "J=(";
    for (std::size_t i = 0; i < j.size(); ++i) os << (i ? "," : "") << j[i];
    os << ')';
    return mismatch(os.str(), joint_entropy(reduced), lhs);
  });
}

void scalar_repair_rank(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  std::vector<std::pair<NodeSet, int>> cases;
  for (int size = 1; size < p.k; ++size) {
    if (!is_cat1(p, size)) {
      res.skipped += binomial(p.n, size);
      continue;
    }
    for (auto& f : combinations(iota_set(1, p.n), size))
      for (int g : set_minus(iota_set(1, p.n), f)) cases.emplace_back(f, g);
  }
  run<std::pair<NodeSet, int>>(res, pick(cases, b, res), [&](const auto& c) {
    return mismatch("F=" + set_str(c.first) + " g=" + std::to_string(c.second),
                    joint_entropy(repair_from(code, {c.second}, c.first)),
                    c.first.size() * static_cast<std::size_t>(p.beta));
  });
}

void simple_bound(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  std::vector<std::pair<EavesdropperModel, int>> cases;
  for (auto& m : all_models(p.n, p.k))
    for (int g : set_minus(iota_set(1, p.n), set_union(m.E, m.F))) cases.emplace_back(m, g);
  run<std::pair<EavesdropperModel, int>>(
      res, pick(cases, b, res), [&](const auto& c) -> std::optional<std::string> {
        const auto& [m, g] = c;
        const auto got = static_cast<long>(achieved_secure_size(code, m));
        const auto hg = static_cast<long>(joint_entropy(repair_from(code, {g}, m.F)));
        const long bound = static_cast<long>(p.k - m.l1() - m.l2()) * (p.alpha - hg);
        if (got <= bound) return std::nullopt;
        return m.describe() + " g=" + std::to_string(g) + " observed=" + std::to_string(got) +
               " bound=" + std::to_string(bound);
      });
}

void capacity_exact(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  std::vector<EavesdropperModel> cases;
  for (auto& m : all_models(p.n, p.k)) {
    if (is_cat1(p, m.l2()))
      cases.push_back(std::move(m));
    else
      ++res.skipped;
  }
  run<EavesdropperModel>(res, pick(cases, b, res), [&](const EavesdropperModel& m) {
    const auto expected = (p.k - m.l1() - m.l2()) * (p.alpha - m.l2() * p.beta);
    return mismatch(m.describe(), achieved_secure_size(code, m),
                    static_cast<std::size_t>(expected));
  });
}

void stability(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  const auto& f = code.field();
  std::mt19937_64 rng(b.seed);
  std::vector<Elem> message(static_cast<std::size_t>(p.B));
  for (auto& x : message) x = rng() % f.order();
  const auto shares = code.encode(message);

  std::vector<std::pair<int, NodeSet>> cases;
  for (int node = 1; node <= p.n; ++node)
    for (auto& h : combinations(set_minus(iota_set(1, p.n), {node}), p.d))
      cases.emplace_back(node, std::move(h));
  std::map<std::pair<int, int>, std::vector<Elem>> first_seen;
  run<std::pair<int, NodeSet>>(
      res, pick(cases, b, res), [&](const auto& c) -> std::optional<std::string> {
        const auto& [node, helpers] = c;
        std::vector<std::vector<Elem>> symbols;
        for (int h : helpers) {
          auto s = code.repair_symbol(h, node, shares[static_cast<std::size_t>(h - 1)]);
          auto [it, fresh] = first_seen.try_emplace({h, node}, s);
          if (!fresh && it->second != s)
            return "helper=" + std::to_string(h) + " failed=" + std::to_string(node) +
                   " helpers=" + set_str(helpers) + " symbol changed";
          symbols.push_back(std::move(s));
        }
        if (code.repair(node, helpers, symbols) != shares[static_cast<std::size_t>(node - 1)])
          return "failed=" + std::to_string(node) + " helpers=" + set_str(helpers) +
                 " repaired share differs";
        // Coefficient rows must not depend on the epoch label.
        for (int h : helpers)
          for (int s = 0; s < p.beta; ++s)
            if (code.repair_row(h, node, s) !=
                code.observation_rows(select::RepairFromTo{{h}, {node}}, 7)[static_cast<std::size_t>(s)].row)
              return "helper=" + std::to_string(h) + " failed=" + std::to_string(node) +
                     " row differs across epochs";
        return std::nullopt;
      });
}

void truncation(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  const auto small = code.truncated(p.d + 1);
  run<EavesdropperModel>(res, pick(all_models(p.d + 1, p.k), b, res),
                         [&](const EavesdropperModel& m) {
                           return mismatch(m.describe(), leakage(code, m), leakage(small, m));
                         });
}

void perfect_secrecy(const PmMsrCode& code, const Budget& b, PropertyResult& res) {
  const auto& p = code.params();
  std::vector<std::pair<SecureScheme, EavesdropperModel>> cases;
  for (auto [l1, l2] : budget_pairs(p.k)) {
    std::optional<SecureScheme> scheme;
    try {
      scheme = SecureScheme::make(code, l1, l2);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CapacityZero) {
        res.pass = false;
        res.witness = "(l1=" + std::to_string(l1) + ",l2=" + std::to_string(l2) + ") " + e.what();
        return;
      }
      res.skipped += enumerate_models(code, l1, l2).size();
      continue;
    }
    for (auto& m : enumerate_models(code, l1, l2)) cases.emplace_back(*scheme, std::move(m));
  }
  run<std::pair<SecureScheme, EavesdropperModel>>(
      res, pick(cases, b, res), [&](const auto& c) -> std::optional<std::string> {
        const auto rep = verify_perfect(c.first, code, c.second);
        if (rep.perfect) return std::nullopt;
        return c.second.describe() + " ell=" + std::to_string(c.first.randomness_size()) +
               " observed_rank=" + std::to_string(rep.observed_rank) +
               " randomness_rank=" + std::to_string(rep.randomness_rank);
      });
}

struct Entry {
  std::string id;
  bool needs_truncation;
  Check check;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"msr.node_entropy", false, node_entropy},
      {"msr.link_entropy", false, link_entropy},
      {"msr.reconstruction", false, reconstruction},
      {"lemma.repair_independence", true, repair_independence},
      {"lemma.repair_determinism", true, repair_determinism},
      {"lemma.secure_size", true, secure_size},
      {"lemma.helper_symmetry", true, helper_symmetry},
      {"lemma.express", true, express},
      {"thm.scalar_repair_rank", true, scalar_repair_rank},
      {"thm.simple_bound", true, simple_bound},
      {"cor.capacity_exact", true, capacity_exact},
      {"def.stability", false, stability},
      {"lemma.truncation", false, truncation},
      {"scheme.perfect_secrecy", false, perfect_secrecy},
  };
  return entries;
}

}  // namespace

std::string PropertyResult::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["instance"] = instance;
  j["pass"] = pass;
  j["mode"] = mode;
  j["checked"] = checked;
  j["skipped"] = skipped;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["witness"] = witness ? nlohmann::ordered_json(*witness) : nlohmann::ordered_json(nullptr);
  return j.dump();
}

const std::vector<std::string>& property_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.id);
    return out;
  }();
  return ids;
}

PropertyResult check_property(const std::string& id, const PmMsrCode& code,
                              const Budget& budget) {
  const auto& entries = registry();
  auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.id == id; });
  if (it == entries.end()) throw Error(ErrorCode::BadParams, "unknown property " + id);
  const auto& p = code.params();
  const bool truncate = it->needs_truncation && p.n > p.d + 1;
  const PmMsrCode target = truncate ? code.truncated(p.d + 1) : code;
  PropertyResult res;
  res.id = id;
  res.instance = instance_of(code) + (truncate ? " nodes 1.." + std::to_string(p.d + 1) : "");
  it->check(target, budget, res);
  return res;
}

std::vector<PropertyResult> check_all(const PmMsrCode& code, const Budget& budget) {
  std::vector<PropertyResult> out;
  for (const auto& id : property_ids()) out.push_back(check_property(id, code, budget));
  return out;
}

std::string report_jsonl(const std::vector<PropertyResult>& results) {
  std::string out;
  for (const auto& r : results) out += r.to_json() + "\n";
  return out;
}

bool all_pass(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

}  // namespace rsl
