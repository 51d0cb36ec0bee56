#ifndef RSL_EXTENSION_HPP_
#define RSL_EXTENSION_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rsl/field.hpp"

namespace rsl {

// L = F[y]/(h(y)) for a monic irreducible h of degree t over F = base().
// An element is its coefficient vector (c_0 .. c_{t-1}) over F, c_0 the
// constant term.
class ExtensionSpec {
 public:
  using value_type = std::vector<FieldSpec::value_type>;

  // Without a modulus the lexicographically smallest monic irreducible of
  // degree t over F is searched (lower coefficients read base-|F|).
  static ExtensionSpec make(FieldSpec base, int t,
                            std::optional<value_type> modulus = {});

  const FieldSpec& base() const;
  int degree() const;
  // Ascending coefficients over F, length t+1, last entry 1.
  const value_type& modulus() const;
  // |F|, the order of the Frobenius base.
  std::uint64_t base_order() const { return base().order(); }

  value_type zero() const;
  value_type one() const;
  bool is_zero(const value_type& a) const;
  bool contains(const value_type& a) const;

  value_type add(const value_type& a, const value_type& b) const;
  value_type sub(const value_type& a, const value_type& b) const;
  value_type neg(const value_type& a) const;
  value_type mul(const value_type& a, const value_type& b) const;
  value_type inv(const value_type& a) const;
  value_type pow(value_type a, std::uint64_t e) const;

  // F -> L as constants.
  value_type embed(FieldSpec::value_type c) const;
  // y^e.
  value_type monomial(int e) const;
  // a^(|F|^i); i may be any nonnegative count, it is reduced modulo t.
  value_type frobenius(const value_type& a, std::uint64_t i) const;

  bool operator==(const ExtensionSpec& other) const;
  bool operator!=(const ExtensionSpec& other) const { return !(*this == other); }

 private:
  struct Impl;
  explicit ExtensionSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace rsl

#endif  // RSL_EXTENSION_HPP_
