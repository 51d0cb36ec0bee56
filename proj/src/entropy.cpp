#include "rsl/entropy.hpp"

#include "rsl/error.hpp"

namespace rsl {

ObsSet::ObsSet(FieldSpec field, std::size_t length)
    : field_(std::move(field)), length_(length) {}

ObsSet::ObsSet(FieldSpec field, std::size_t length, std::vector<Observation> rows)
    : field_(std::move(field)), length_(length) {
  for (auto& r : rows) add(std::move(r));
}

ObsSet ObsSet::of(const PmMsrCode& code, const Selector& selector, int epoch) {
  return ObsSet(code.field(), static_cast<std::size_t>(code.params().B),
                code.observation_rows(selector, epoch));
}

void ObsSet::add(Observation obs) {
  if (obs.row.size() != length_)
    throw Error(ErrorCode::LengthMismatch, "observation row length differs from message length");
  rows_.push_back(std::move(obs));
}

ObsSet ObsSet::united(const ObsSet& other) const {
  if (field_ != other.field_) throw Error(ErrorCode::MixedFields, "observation sets over different fields");
  if (length_ != other.length_) throw Error(ErrorCode::LengthMismatch, "message lengths differ");
  ObsSet out = *this;
  out.rows_.insert(out.rows_.end(), other.rows_.begin(), other.rows_.end());
  return out;
}

FMatrix ObsSet::matrix() const {
  FMatrix m(field_, 0, length_);
  for (const auto& r : rows_) m.append_row(r.row);
  return m;
}

std::size_t joint_entropy(const ObsSet& a) {
  if (a.empty()) return 0;
  return rank(a.matrix());
}

std::size_t conditional_entropy(const ObsSet& a, const ObsSet& given) {
  return joint_entropy(a.united(given)) - joint_entropy(given);
}

std::size_t mutual_information(const ObsSet& a, const ObsSet& b) {
  return joint_entropy(a) - conditional_entropy(a, b);
}

std::size_t mutual_information(const ObsSet& a, const ObsSet& b, const ObsSet& given) {
  return conditional_entropy(a, given) - conditional_entropy(a, b.united(given));
}

}  // namespace rsl
