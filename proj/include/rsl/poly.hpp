#ifndef RSL_POLY_HPP_
#define RSL_POLY_HPP_

// Univariate polynomial arithmetic over any field type exposing
// value_type, zero(), one(), add/sub/mul/inv, is_zero() and order().
// Polynomials are coefficient vectors in ascending degree with no trailing
// zeros; the zero polynomial is the empty vector.

#include <cstdint>
#include <vector>

namespace rsl::poly {

template <class K>
using Poly = std::vector<typename K::value_type>;

template <class K>
void trim(const K& k, Poly<K>& a) {
  while (!a.empty() && k.is_zero(a.back())) a.pop_back();
}

template <class K>
int degree(const Poly<K>& a) {
  return static_cast<int>(a.size()) - 1;
}

template <class K>
Poly<K> sub(const K& k, Poly<K> a, const Poly<K>& b) {
  if (a.size() < b.size()) a.resize(b.size(), k.zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = k.sub(a[i], b[i]);
  trim(k, a);
  return a;
}

template <class K>
Poly<K> mul(const K& k, const Poly<K>& a, const Poly<K>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<K> out(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (k.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = k.add(out[i + j], k.mul(a[i], b[j]));
  }
  trim(k, out);
  return out;
}

// Remainder of a modulo m (m nonzero).
template <class K>
Poly<K> mod(const K& k, Poly<K> a, const Poly<K>& m) {
  trim(k, a);
  const int dm = degree<K>(m);
  const auto lead_inv = k.inv(m.back());
  while (degree<K>(a) >= dm) {
    const int shift = degree<K>(a) - dm;
    const auto factor = k.mul(a.back(), lead_inv);
    for (int i = 0; i <= dm; ++i)
      a[shift + i] = k.sub(a[shift + i], k.mul(factor, m[i]));
    trim(k, a);
  }
  return a;
}

template <class K>
Poly<K> mulmod(const K& k, const Poly<K>& a, const Poly<K>& b,
               const Poly<K>& m) {
  return mod(k, mul(k, a, b), m);
}

template <class K>
Poly<K> powmod(const K& k, Poly<K> base, std::uint64_t e, const Poly<K>& m) {
  Poly<K> result{k.one()};
  result = mod(k, result, m);
  base = mod(k, base, m);
  while (e > 0) {
    if (e & 1U) result = mulmod(k, result, base, m);
    e >>= 1U;
    if (e > 0) base = mulmod(k, base, base, m);
  }
  return result;
}

// Monic greatest common divisor.
template <class K>
Poly<K> gcd(const K& k, Poly<K> a, Poly<K> b) {
  trim(k, a);
  trim(k, b);
  while (!b.empty()) {
    auto r = mod(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  const auto lead_inv = k.inv(a.back());
  for (auto& c : a) c = k.mul(c, lead_inv);
  return a;
}

// Deterministic irreducibility test: f of degree n over a field of order q
// is irreducible iff gcd(f, x^(q^i) - x) = 1 for every 1 <= i <= n/2.
template <class K>
bool is_irreducible(const K& k, Poly<K> f) {
  trim(k, f);
  const int n = degree<K>(f);
  if (n < 1) return false;
  if (n == 1) return true;
  const Poly<K> x{k.zero(), k.one()};
  Poly<K> h = mod(k, x, f);
  for (int i = 1; i <= n / 2; ++i) {
    h = powmod(k, h, k.order(), f);
    if (degree<K>(gcd(k, f, sub(k, h, x))) > 0) return false;
  }
  return true;
}

}  // namespace rsl::poly

#endif  // RSL_POLY_HPP_
