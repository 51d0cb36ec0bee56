#ifndef RSL_HARNESS_HPP_
#define RSL_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsl/pmmsr.hpp"

namespace rsl {

// Enumeration limits. A property whose case count exceeds max_cases checks
// a deterministic sample of max_cases cases drawn with `seed`.
struct Budget {
  std::uint64_t max_cases = 20000;
  std::uint64_t seed = 1;
  // Largest |J| for the ordered-tuple repair expansion check.
  int express_max = 3;
};

struct PropertyResult {
  std::string id;
  std::string instance;
  bool pass = true;
  // "exhaustive" or "sampled".
  std::string mode = "exhaustive";
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
  std::optional<std::uint64_t> seed;
  // Set on failure: the offending tuple with observed vs expected values.
  std::optional<std::string> witness;

  std::string to_json() const;
};

// Registered property ids in report order.
const std::vector<std::string>& property_ids();

// Throws BadParams for an unknown id. Properties stated only for n = d+1
// run on the truncation to nodes 1..d+1.
PropertyResult check_property(const std::string& id, const PmMsrCode& code,
                              const Budget& budget = {});
std::vector<PropertyResult> check_all(const PmMsrCode& code, const Budget& budget = {});

// One JSON object per line.
std::string report_jsonl(const std::vector<PropertyResult>& results);
bool all_pass(const std::vector<PropertyResult>& results);

}  // namespace rsl

#endif  // RSL_HARNESS_HPP_
