#ifndef RSL_ENTROPY_HPP_
#define RSL_ENTROPY_HPP_

#include <cstddef>
#include <vector>

#include "rsl/pmmsr.hpp"

namespace rsl {

// A collection of linear observations of one B-symbol message. For a
// uniform message the joint entropy of the collection, in units of one
// field symbol, is the rank of the stacked coefficient rows.
class ObsSet {
 public:
  ObsSet(FieldSpec field, std::size_t length);
  ObsSet(FieldSpec field, std::size_t length, std::vector<Observation> rows);

  static ObsSet of(const PmMsrCode& code, const Selector& selector, int epoch = 0);

  const FieldSpec& field() const { return field_; }
  std::size_t length() const { return length_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const std::vector<Observation>& rows() const { return rows_; }

  void add(Observation obs);
  // Throws MixedFields or LengthMismatch when the sets are incompatible.
  ObsSet united(const ObsSet& other) const;
  FMatrix matrix() const;

 private:
  FieldSpec field_;
  std::size_t length_;
  std::vector<Observation> rows_;
};

std::size_t joint_entropy(const ObsSet& a);
// H(a | given) = H(a, given) - H(given).
std::size_t conditional_entropy(const ObsSet& a, const ObsSet& given);
// I(a; b) = H(a) - H(a | b).
std::size_t mutual_information(const ObsSet& a, const ObsSet& b);
// I(a; b | given) = H(a | given) - H(a | b, given).
std::size_t mutual_information(const ObsSet& a, const ObsSet& b, const ObsSet& given);

}  // namespace rsl

#endif  // RSL_ENTROPY_HPP_
