#include "rsl/extension.hpp"

#include "rsl/error.hpp"
#include "rsl/poly.hpp"

namespace rsl {

struct ExtensionSpec::Impl {
  FieldSpec base;
  int t;
  value_type modulus;
};

ExtensionSpec ExtensionSpec::make(FieldSpec base, int t,
                                  std::optional<value_type> modulus) {
  if (t < 1) throw Error(ErrorCode::BadParams, "extension degree must be >= 1");
  const std::uint64_t q = base.order();
  if (modulus) {
    const auto& h = *modulus;
    if (h.size() != static_cast<std::size_t>(t) + 1 || h.back() != 1)
      throw Error(ErrorCode::BadParams, "modulus must be monic of degree t");
    for (auto c : h)
      if (!base.contains(c)) throw Error(ErrorCode::BadParams, "coefficient outside F");
    if (!poly::is_irreducible(base, h))
      throw Error(ErrorCode::Reducible, "extension modulus is reducible over F");
  } else {
    // Counter over the t lower coefficients, least significant first.
    value_type cand(t + 1, 0);
    cand[t] = 1;
    for (;;) {
      if (poly::is_irreducible(base, cand)) {
        modulus = cand;
        break;
      }
      int i = 0;
      while (i < t && ++cand[i] == q) cand[i++] = 0;
      if (i == t) throw Error(ErrorCode::Reducible, "no irreducible polynomial found");
    }
  }
  auto impl = std::make_shared<Impl>(Impl{std::move(base), t, std::move(*modulus)});
  return ExtensionSpec(std::move(impl));
}

const FieldSpec& ExtensionSpec::base() const { return impl_->base; }
int ExtensionSpec::degree() const { return impl_->t; }
const ExtensionSpec::value_type& ExtensionSpec::modulus() const { return impl_->modulus; }

ExtensionSpec::value_type ExtensionSpec::zero() const { return value_type(impl_->t, 0); }

ExtensionSpec::value_type ExtensionSpec::one() const {
  value_type r(impl_->t, 0);
  r[0] = 1;
  return r;
}

bool ExtensionSpec::is_zero(const value_type& a) const {
  for (auto c : a)
    if (c != 0) return false;
  return true;
}

bool ExtensionSpec::contains(const value_type& a) const {
  if (a.size() != static_cast<std::size_t>(impl_->t)) return false;
  for (auto c : a)
    if (!impl_->base.contains(c)) return false;
  return true;
}

ExtensionSpec::value_type ExtensionSpec::add(const value_type& a, const value_type& b) const {
  value_type r(impl_->t);
  for (int i = 0; i < impl_->t; ++i) r[i] = impl_->base.add(a[i], b[i]);
  return r;
}

ExtensionSpec::value_type ExtensionSpec::sub(const value_type& a, const value_type& b) const {
  value_type r(impl_->t);
  for (int i = 0; i < impl_->t; ++i) r[i] = impl_->base.sub(a[i], b[i]);
  return r;
}

ExtensionSpec::value_type ExtensionSpec::neg(const value_type& a) const {
  value_type r(impl_->t);
  for (int i = 0; i < impl_->t; ++i) r[i] = impl_->base.neg(a[i]);
  return r;
}

ExtensionSpec::value_type ExtensionSpec::mul(const value_type& a, const value_type& b) const {
  const auto& f = impl_->base;
  const int t = impl_->t;
  std::vector<FieldSpec::value_type> prod(2 * t - 1, 0);
  for (int i = 0; i < t; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < t; ++j) {
      if (b[j] == 0) continue;
      prod[i + j] = f.add(prod[i + j], f.mul(a[i], b[j]));
    }
  }
  const auto& h = impl_->modulus;
  for (int deg = 2 * t - 2; deg >= t; --deg) {
    const auto c = prod[deg];
    if (c == 0) continue;
    for (int i = 0; i <= t; ++i)
      prod[deg - t + i] = f.sub(prod[deg - t + i], f.mul(c, h[i]));
  }
  prod.resize(t);
  return prod;
}

ExtensionSpec::value_type ExtensionSpec::inv(const value_type& a) const {
  if (is_zero(a)) throw Error(ErrorCode::DivideByZero, "inverse of zero");
  // Extended Euclid on (a, h) over F; track s with s*a = r (mod h).
  const auto& f = impl_->base;
  using P = poly::Poly<FieldSpec>;
  P r0 = impl_->modulus, r1 = a;
  poly::trim(f, r1);
  P s0, s1{f.one()};
  while (!r1.empty()) {
    P q;
    P r = r0;
    const int d1 = poly::degree<FieldSpec>(r1);
    const auto lead_inv = f.inv(r1.back());
    q.assign(std::max(0, poly::degree<FieldSpec>(r) - d1 + 1), 0);
    while (poly::degree<FieldSpec>(r) >= d1) {
      const int shift = poly::degree<FieldSpec>(r) - d1;
      const auto factor = f.mul(r.back(), lead_inv);
      q[shift] = f.add(q[shift], factor);
      for (int i = 0; i <= d1; ++i) r[shift + i] = f.sub(r[shift + i], f.mul(factor, r1[i]));
      poly::trim(f, r);
    }
    P s = poly::sub(f, s0, poly::mul(f, q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  // r0 is a nonzero constant because h is irreducible.
  const auto c_inv = f.inv(r0[0]);
  value_type out(impl_->t, 0);
  for (std::size_t i = 0; i < s0.size(); ++i) out[i] = f.mul(s0[i], c_inv);
  return out;
}

ExtensionSpec::value_type ExtensionSpec::pow(value_type a, std::uint64_t e) const {
  value_type r = one();
  while (e > 0) {
    if (e & 1U) r = mul(r, a);
    e >>= 1U;
    if (e > 0) a = mul(a, a);
  }
  return r;
}

ExtensionSpec::value_type ExtensionSpec::embed(FieldSpec::value_type c) const {
  if (!impl_->base.contains(c)) throw Error(ErrorCode::FieldMismatch, "value not in base field");
  value_type r(impl_->t, 0);
  r[0] = c;
  return r;
}

ExtensionSpec::value_type ExtensionSpec::monomial(int e) const {
  value_type y(impl_->t, 0);
  if (impl_->t == 1) {
    y[0] = impl_->base.neg(impl_->modulus[0]);
  } else {
    y[1] = 1;
  }
  return pow(y, static_cast<std::uint64_t>(e));
}

ExtensionSpec::value_type ExtensionSpec::frobenius(const value_type& a, std::uint64_t i) const {
  value_type r = a;
  const std::uint64_t steps = i % static_cast<std::uint64_t>(impl_->t);
  for (std::uint64_t s = 0; s < steps; ++s) r = pow(r, base_order());
  return r;
}

bool ExtensionSpec::operator==(const ExtensionSpec& other) const {
  if (impl_ == other.impl_) return true;
  return impl_->base == other.impl_->base && impl_->t == other.impl_->t &&
         impl_->modulus == other.impl_->modulus;
}

}  // namespace rsl
