#ifndef RSL_SECRECY_HPP_
#define RSL_SECRECY_HPP_

#include <span>
#include <string>
#include <vector>

#include "rsl/capacity.hpp"
#include "rsl/entropy.hpp"
#include "rsl/extension.hpp"
#include "rsl/pmmsr.hpp"

namespace rsl {

using LElem = ExtensionSpec::value_type;
using LMatrix = Matrix<ExtensionSpec>;

// Passive adversary: reads the stored content of E and all repair traffic
// into the nodes of F.
struct EavesdropperModel {
  NodeSet E;
  NodeSet F;

  int l1() const { return static_cast<int>(E.size()); }
  int l2() const { return static_cast<int>(F.size()); }
  std::string describe() const;
};

// Throws BadModel unless E, F are disjoint, duplicate-free, in range and
// l1 + l2 <= k-1.
void validate_model(const PmMsrCode& code, const EavesdropperModel& model);

// Every model with |E| = l1, |F| = l2 over all nodes of the code.
std::vector<EavesdropperModel> enumerate_models(const PmMsrCode& code, int l1, int l2);
// Same, restricted to nodes 1..limit.
std::vector<EavesdropperModel> enumerate_models(int limit, int l1, int l2);

// W_E together with S^F (repair data from every other node into each f).
ObsSet eavesdropped_rows(const PmMsrCode& code, const EavesdropperModel& model);
std::size_t leakage(const PmMsrCode& code, const EavesdropperModel& model);
std::size_t achieved_secure_size(const PmMsrCode& code, const EavesdropperModel& model);

// Gabidulin-style pre-coding over L = F[y]/(h), deg h = B. The message
// u = (R || D) (randomness in the low coefficients) is mapped to the MSR
// input c_j = sum_i u_i g_j^(|F|^i), g_j = y^(j-1), i.e. c = Moore * u.
class SecureScheme {
 public:
  // Randomness size is the worst-case leakage over all (l1, l2) models.
  // Throws AsymmetricLeakage if the enumerated leakages disagree and
  // CapacityZero when nothing can be stored.
  static SecureScheme make(const PmMsrCode& code, int l1, int l2);
  // Explicit randomness size (0 <= ell <= B), no enumeration.
  static SecureScheme with_randomness(const PmMsrCode& code, int ell);
  // Rebuild from persisted metadata.
  static SecureScheme restore(const PmMsrCode& code, ExtensionSpec ext, int ell, int l1, int l2);

  const ExtensionSpec& extension() const { return ext_; }
  int message_size() const { return static_cast<int>(points_.size()); }
  int randomness_size() const { return ell_; }
  int secret_size() const { return message_size() - ell_; }
  int l1() const { return l1_; }
  int l2() const { return l2_; }
  const std::vector<LElem>& points() const { return points_; }
  const LMatrix& moore() const { return moore_; }

  std::vector<LElem> wrap(std::span<const LElem> secret,
                          std::span<const LElem> randomness) const;
  // Secret part of the coefficient vector of a codeword.
  std::vector<LElem> unwrap(std::span<const LElem> codeword) const;

 private:
  SecureScheme(ExtensionSpec ext, int ell, int l1, int l2);

  ExtensionSpec ext_;
  int ell_;
  int l1_;
  int l2_;
  std::vector<LElem> points_;
  LMatrix moore_;
  LMatrix moore_inv_;
};

// L-symbols as an n x t matrix over F (row = symbol, column = coefficient
// of y^j). The MSR code is F-linear, so it acts on each column separately.
FMatrix to_layers(const ExtensionSpec& ext, std::span<const LElem> symbols);
std::vector<LElem> from_layers(const ExtensionSpec& ext, const FMatrix& layers);

struct PerfectReport {
  bool perfect = false;
  std::size_t observed_rank = 0;    // rank over L of [A_R | A_D]
  std::size_t randomness_rank = 0;  // rank over L of A_R
};

// I(D; view) = rank[A_R | A_D] - rank(A_R) where A * Moore = [A_R | A_D].
PerfectReport verify_perfect(const SecureScheme& scheme, const ObsSet& view);
PerfectReport verify_perfect(const SecureScheme& scheme, const PmMsrCode& code,
                             const EavesdropperModel& model);

struct AttackReport {
  EavesdropperModel model;
  std::size_t leakage = 0;
  std::size_t secure_size = 0;
  bool perfect = false;
  CapacityValue formula;
  bool match = false;

  // {"model":{"E":[..],"F":[..]},"leakage":..,"secure_size":..,
  //  "perfect":..,"formula_value":"p/q","formula_kind":..,"match":..}
  std::string to_json() const;
};

// Full attack evaluation against the closed-form capacity for (l1, l2):
// match means equality for exact values and <= for upper bounds.
AttackReport attack(const PmMsrCode& code, const SecureScheme& scheme,
                    const EavesdropperModel& model);

}  // namespace rsl

#endif  // RSL_SECRECY_HPP_
