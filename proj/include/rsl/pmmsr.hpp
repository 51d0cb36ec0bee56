#ifndef RSL_PMMSR_HPP_
#define RSL_PMMSR_HPP_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rsl/field.hpp"
#include "rsl/matrix.hpp"

namespace rsl {

using Elem = FieldSpec::value_type;
using FMatrix = Matrix<FieldSpec>;
// Node ids are 1-based throughout the public interface.
using NodeId = int;
using NodeSet = std::vector<NodeId>;

// Parameters of an m-fold concatenation of product-matrix MSR codes with
// d = 2k-2. Each base copy has alpha0 = k-1 and beta0 = 1.
struct CodeParams {
  int n = 0;
  int k = 0;
  int d = 0;
  int alpha = 0;
  int beta = 0;
  int B = 0;
  int m = 1;

  static CodeParams product_matrix(int n, int k, int m = 1);

  int base_alpha() const { return k - 1; }
  int base_message() const { return k * (k - 1); }
  std::string describe() const;
};

struct StoredTag {
  NodeId node = 0;
  int slot = 0;
  bool operator==(const StoredTag&) const = default;
};

struct RepairTag {
  NodeId helper = 0;
  NodeId failed = 0;
  int slot = 0;
  int epoch = 0;
  bool operator==(const RepairTag&) const = default;
};

// One visible symbol, written as a linear functional of the B message
// symbols.
struct Observation {
  std::variant<StoredTag, RepairTag> tag;
  std::vector<Elem> row;
};

namespace select {
// W_A: every stored slot of every node in `nodes`.
struct Stored {
  NodeSet nodes;
};
// S^F: repair traffic into each f in `failed` from every other node.
struct RepairTo {
  NodeSet failed;
};
// S_A^B: repair traffic from `helpers` into `failed`, skipping i == j.
struct RepairFromTo {
  NodeSet helpers;
  NodeSet failed;
};
}  // namespace select

using Selector = std::variant<select::Stored, select::RepairTo, select::RepairFromTo>;

class PmMsrCode {
 public:
  // Points default to x_i = g^i for the primitive element g, falling back
  // to a greedy scan over powers of g when some x_i^alpha0 collide.
  static PmMsrCode construct(const CodeParams& params, FieldSpec field,
                             std::optional<std::vector<Elem>> points = {});

  const CodeParams& params() const { return params_; }
  const FieldSpec& field() const { return field_; }
  const std::vector<Elem>& points() const { return points_; }
  // n x d matrix with rows psi_i = (1, x_i, ..., x_i^(d-1)) = [phi_i | lambda_i phi_i].
  const FMatrix& psi() const { return psi_; }
  std::vector<Elem> phi(NodeId node) const;
  Elem lambda(NodeId node) const;

  // The code restricted to nodes 1..n_prefix (same points, same layout).
  PmMsrCode truncated(int n_prefix) const;

  // Position of the (row, col) entry of S1 (which = 0) or S2 (which = 1)
  // of concatenated copy `copy` inside the message vector.
  std::size_t message_index(int copy, int which, int row, int col) const;

  std::vector<std::vector<Elem>> encode(std::span<const Elem> message) const;
  std::vector<Elem> repair_symbol(NodeId helper, NodeId failed,
                                  std::span<const Elem> share) const;
  std::vector<Elem> repair(NodeId failed, std::span<const NodeId> helpers,
                           const std::vector<std::vector<Elem>>& symbols) const;
  std::vector<Elem> reconstruct(std::span<const NodeId> nodes,
                                const std::vector<std::vector<Elem>>& shares) const;

  // Column-wise forms: every column of a message (B x c) is an independent
  // message; shares are alpha x c, repair symbols beta x c. Used for
  // symbols of an extension field, which are vectors over this field.
  std::vector<FMatrix> encode_columns(const FMatrix& message) const;
  FMatrix repair_symbol_columns(NodeId helper, NodeId failed, const FMatrix& share) const;
  FMatrix repair_columns(NodeId failed, std::span<const NodeId> helpers,
                         const std::vector<FMatrix>& symbols) const;
  FMatrix reconstruct_columns(std::span<const NodeId> nodes,
                              const std::vector<FMatrix>& shares) const;

  std::vector<Elem> stored_row(NodeId node, int slot) const;
  std::vector<Elem> repair_row(NodeId helper, NodeId failed, int slot) const;
  std::vector<Observation> observation_rows(const Selector& selector, int epoch = 0) const;

 private:
  PmMsrCode(CodeParams params, FieldSpec field, std::vector<Elem> points);
  void check_node(NodeId node) const;

  CodeParams params_;
  FieldSpec field_;
  std::vector<Elem> points_;
  FMatrix psi_;
};

}  // namespace rsl

#endif  // RSL_PMMSR_HPP_
