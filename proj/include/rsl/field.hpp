#ifndef RSL_FIELD_HPP_
#define RSL_FIELD_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rsl {

// Finite field GF(p^w) realised as GF(p)[x]/(modulus).
//
// Elements are plain integers holding the canonical packed encoding
// sum_i c_i p^i of the coefficient vector (c_0 is the constant term). For
// p = 2 this is the usual bit-vector encoding, so x^4+x+1 arithmetic on
// 0x2 * 0x2 gives 0x4. FieldSpec is a cheap immutable handle; copies share
// the precomputed tables.
class FieldSpec {
 public:
  using value_type = std::uint64_t;

  // Builds GF(p^w). With no modulus, the lexicographically smallest monic
  // irreducible polynomial of degree w is used (lower coefficients compared
  // as the packed integer), so equal (p, w) always yield equal specs.
  static FieldSpec make(std::uint64_t p, int w,
                        std::optional<std::vector<std::uint64_t>> modulus = {});

  // GF(p) with modulus x.
  static FieldSpec prime(std::uint64_t p);

  std::uint64_t characteristic() const;
  int degree() const;
  // Ascending-degree coefficients, length degree()+1, last entry 1.
  const std::vector<std::uint64_t>& modulus() const;
  std::uint64_t order() const;
  // Bytes needed for the fixed-width little-endian encoding of an element.
  int byte_width() const;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  bool contains(value_type a) const { return a < order(); }

  value_type add(value_type a, value_type b) const;
  value_type sub(value_type a, value_type b) const;
  value_type neg(value_type a) const;
  value_type mul(value_type a, value_type b) const;
  value_type inv(value_type a) const;
  value_type pow(value_type a, std::uint64_t e) const;

  // Generator of the multiplicative group (smallest packed value).
  value_type primitive_element() const;

  std::vector<std::uint64_t> coeffs(value_type a) const;
  value_type from_coeffs(std::span<const std::uint64_t> c) const;
  std::string to_hex(value_type a) const;

  bool operator==(const FieldSpec& other) const;
  bool operator!=(const FieldSpec& other) const { return !(*this == other); }

  // {"p":2,"w":4,"modulus":[1,1,0,0,1]}, coefficients ascending.
  std::string to_json() const;
  static FieldSpec from_json(const std::string& text);

 private:
  struct Impl;
  explicit FieldSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

bool is_prime(std::uint64_t n);

// Value wrapper tying an element to its field; mixing fields throws
// FieldMismatch. Bulk code (matrices, codecs) works on raw value_type.
class FieldElement {
 public:
  FieldElement(FieldSpec spec, FieldSpec::value_type value);

  const FieldSpec& spec() const { return spec_; }
  FieldSpec::value_type value() const { return value_; }
  std::vector<std::uint64_t> coeffs() const { return spec_.coeffs(value_); }
  std::string to_hex() const { return spec_.to_hex(value_); }

  FieldElement inv() const;
  FieldElement pow(std::uint64_t e) const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  bool operator==(const FieldElement& other) const;

 private:
  FieldSpec spec_;
  FieldSpec::value_type value_;
};

}  // namespace rsl

#endif  // RSL_FIELD_HPP_
