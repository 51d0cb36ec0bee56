#include "rsl/field.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "rsl/error.hpp"
#include "rsl/poly.hpp"

namespace rsl {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1U) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1U;
  }
  return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

constexpr std::uint64_t kTableLimit = 1U << 16;

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DivideByZero: return "DivideByZero";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::FieldTooSmall: return "FieldTooSmall";
    case ErrorCode::DegenerateLambda: return "DegenerateLambda";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SelfRepair: return "SelfRepair";
    case ErrorCode::WrongHelperCount: return "WrongHelperCount";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::WrongNodeCount: return "WrongNodeCount";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::BadSelector: return "BadSelector";
    case ErrorCode::MixedFields: return "MixedFields";
    case ErrorCode::BadModel: return "BadModel";
    case ErrorCode::AsymmetricLeakage: return "AsymmetricLeakage";
    case ErrorCode::CapacityZero: return "CapacityZero";
    case ErrorCode::BadQuery: return "BadQuery";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // These bases make Miller-Rabin deterministic for all 64-bit inputs.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct FieldSpec::Impl {
  std::uint64_t p = 2;
  int w = 1;
  std::vector<std::uint64_t> modulus;
  std::uint64_t order = 2;
  std::uint64_t modmask = 0;  // p == 2 only: modulus bits including x^w
  std::vector<std::uint32_t> exp_table;
  std::vector<std::uint32_t> log_table;
  mutable std::once_flag primitive_once;
  mutable std::uint64_t primitive = 0;

  std::uint64_t raw_mul(std::uint64_t a, std::uint64_t b) const {
    if (w == 1) return mulmod_u64(a, b, p);
    if (p == 2) {
      std::uint64_t r = 0;
      const std::uint64_t top = std::uint64_t{1} << w;
      while (b != 0) {
        if (b & 1U) r ^= a;
        b >>= 1U;
        a <<= 1U;
        if (a & top) a ^= modmask;
      }
      return r;
    }
    std::vector<std::uint64_t> ca = digits(a), cb = digits(b);
    std::vector<std::uint64_t> prod(2 * w - 1, 0);
    for (int i = 0; i < w; ++i) {
      if (ca[i] == 0) continue;
      for (int j = 0; j < w; ++j)
        prod[i + j] = (prod[i + j] + mulmod_u64(ca[i], cb[j], p)) % p;
    }
    for (int deg = 2 * w - 2; deg >= w; --deg) {
      const std::uint64_t c = prod[deg];
      if (c == 0) continue;
      for (int i = 0; i <= w; ++i) {
        const std::uint64_t t = mulmod_u64(c, modulus[i], p);
        prod[deg - w + i] = (prod[deg - w + i] + p - t) % p;
      }
    }
    prod.resize(w);
    return pack(prod);
  }

  std::vector<std::uint64_t> digits(std::uint64_t a) const {
    std::vector<std::uint64_t> c(w, 0);
    for (int i = 0; i < w; ++i) {
      c[i] = a % p;
      a /= p;
    }
    return c;
  }

  std::uint64_t pack(std::span<const std::uint64_t> c) const {
    std::uint64_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
    return v;
  }

  std::uint64_t raw_pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    while (e > 0) {
      if (e & 1U) r = raw_mul(r, a);
      e >>= 1U;
      if (e > 0) a = raw_mul(a, a);
    }
    return r;
  }

  std::uint64_t find_primitive() const {
    if (order == 2) return 1;
    const std::uint64_t group = order - 1;
    const auto factors = prime_factors(group);
    for (std::uint64_t g = 2; g < order; ++g) {
      bool ok = true;
      for (std::uint64_t r : factors) {
        if (raw_pow(g, group / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
    return 1;
  }
};

FieldSpec FieldSpec::prime(std::uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p));
  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->w = 1;
  impl->modulus = {0, 1};
  impl->order = p;
  impl->modmask = 2;
  return FieldSpec(std::move(impl));
}

FieldSpec FieldSpec::make(std::uint64_t p, int w,
                          std::optional<std::vector<std::uint64_t>> modulus) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p));
  if (w < 1) throw Error(ErrorCode::BadParams, "degree must be >= 1");
  std::uint64_t order = 1;
  for (int i = 0; i < w; ++i) {
    if (order > (std::uint64_t{1} << 62) / p)
      throw Error(ErrorCode::BadParams, "field order exceeds 2^62");
    order *= p;
  }
  const FieldSpec base = prime(p);
  if (modulus) {
    const auto& m = *modulus;
    if (m.size() != static_cast<std::size_t>(w) + 1 || m.back() != 1 ||
        std::any_of(m.begin(), m.end(), [p](std::uint64_t c) { return c >= p; }))
      throw Error(ErrorCode::BadParams, "modulus must be monic of degree w over GF(p)");
    if (!poly::is_irreducible(base, m))
      throw Error(ErrorCode::Reducible, "supplied modulus is reducible");
  } else {
    const std::uint64_t count = order;  // p^w candidates for the lower part
    for (std::uint64_t low = 0; low < count; ++low) {
      std::vector<std::uint64_t> cand(w + 1, 0);
      std::uint64_t v = low;
      for (int i = 0; i < w; ++i) {
        cand[i] = v % p;
        v /= p;
      }
      cand[w] = 1;
      if (poly::is_irreducible(base, cand)) {
        modulus = std::move(cand);
        break;
      }
    }
  }

  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->w = w;
  impl->modulus = *modulus;
  impl->order = order;
  if (p == 2) {
    std::uint64_t mask = 0;
    for (int i = 0; i <= w; ++i)
      if (impl->modulus[i]) mask |= std::uint64_t{1} << i;
    impl->modmask = mask;
  }
  if (w > 1 && order <= kTableLimit) {
    const std::uint64_t g = impl->find_primitive();
    impl->exp_table.resize(order - 1);
    impl->log_table.assign(order, 0);
    std::uint64_t x = 1;
    for (std::uint64_t i = 0; i + 1 < order; ++i) {
      impl->exp_table[i] = static_cast<std::uint32_t>(x);
      impl->log_table[x] = static_cast<std::uint32_t>(i);
      x = impl->raw_mul(x, g);
    }
    std::call_once(impl->primitive_once, [&] { impl->primitive = g; });
  }
  return FieldSpec(std::move(impl));
}

std::uint64_t FieldSpec::characteristic() const { return impl_->p; }
int FieldSpec::degree() const { return impl_->w; }
const std::vector<std::uint64_t>& FieldSpec::modulus() const { return impl_->modulus; }
std::uint64_t FieldSpec::order() const { return impl_->order; }

int FieldSpec::byte_width() const {
  const int bits = std::bit_width(impl_->order - 1);
  return std::max(1, (bits + 7) / 8);
}

FieldSpec::value_type FieldSpec::add(value_type a, value_type b) const {
  const auto& im = *impl_;
  if (im.p == 2) return a ^ b;
  if (im.w == 1) return (a + b) % im.p;
  std::uint64_t r = 0, scale = 1;
  for (int i = 0; i < im.w; ++i) {
    r += ((a % im.p + b % im.p) % im.p) * scale;
    a /= im.p;
    b /= im.p;
    scale *= im.p;
  }
  return r;
}

FieldSpec::value_type FieldSpec::neg(value_type a) const {
  const auto& im = *impl_;
  if (im.p == 2) return a;
  if (im.w == 1) return (im.p - a % im.p) % im.p;
  std::uint64_t r = 0, scale = 1;
  for (int i = 0; i < im.w; ++i) {
    r += ((im.p - a % im.p) % im.p) * scale;
    a /= im.p;
    scale *= im.p;
  }
  return r;
}

FieldSpec::value_type FieldSpec::sub(value_type a, value_type b) const {
  return add(a, neg(b));
}

FieldSpec::value_type FieldSpec::mul(value_type a, value_type b) const {
  const auto& im = *impl_;
  if (!im.exp_table.empty()) {
    if (a == 0 || b == 0) return 0;
    const std::uint64_t e = (std::uint64_t{im.log_table[a]} + im.log_table[b]) % (im.order - 1);
    return im.exp_table[e];
  }
  return im.raw_mul(a, b);
}

FieldSpec::value_type FieldSpec::inv(value_type a) const {
  if (a == 0) throw Error(ErrorCode::DivideByZero, "inverse of zero");
  const auto& im = *impl_;
  if (!im.exp_table.empty()) {
    const std::uint64_t e = (im.order - 1 - im.log_table[a]) % (im.order - 1);
    return im.exp_table[e];
  }
  return im.raw_pow(a, im.order - 2);
}

FieldSpec::value_type FieldSpec::pow(value_type a, std::uint64_t e) const {
  value_type r = 1;
  while (e > 0) {
    if (e & 1U) r = mul(r, a);
    e >>= 1U;
    if (e > 0) a = mul(a, a);
  }
  return r;
}

FieldSpec::value_type FieldSpec::primitive_element() const {
  std::call_once(impl_->primitive_once,
                 [this] { impl_->primitive = impl_->find_primitive(); });
  return impl_->primitive;
}

std::vector<std::uint64_t> FieldSpec::coeffs(value_type a) const {
  return impl_->digits(a);
}

FieldSpec::value_type FieldSpec::from_coeffs(std::span<const std::uint64_t> c) const {
  if (c.size() != static_cast<std::size_t>(impl_->w))
    throw Error(ErrorCode::LengthMismatch, "coefficient vector length");
  for (auto x : c)
    if (x >= impl_->p) throw Error(ErrorCode::BadParams, "coefficient out of range");
  return impl_->pack(c);
}

std::string FieldSpec::to_hex(value_type a) const {
  std::ostringstream os;
  os << "0x" << std::hex << a;
  return os.str();
}

bool FieldSpec::operator==(const FieldSpec& other) const {
  if (impl_ == other.impl_) return true;
  return impl_->p == other.impl_->p && impl_->w == other.impl_->w &&
         impl_->modulus == other.impl_->modulus;
}

std::string FieldSpec::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = impl_->p;
  j["w"] = impl_->w;
  j["modulus"] = impl_->modulus;
  return j.dump();
}

FieldSpec FieldSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    return make(j.at("p").get<std::uint64_t>(), j.at("w").get<int>(),
                j.at("modulus").get<std::vector<std::uint64_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadParams, std::string("field json: ") + e.what());
  }
}

FieldElement::FieldElement(FieldSpec spec, FieldSpec::value_type value)
    : spec_(std::move(spec)), value_(value) {
  if (!spec_.contains(value_))
    throw Error(ErrorCode::BadParams, "element out of range");
}

namespace {
const FieldSpec& common(const FieldElement& a, const FieldElement& b) {
  if (a.spec() != b.spec())
    throw Error(ErrorCode::FieldMismatch, "operands from different fields");
  return a.spec();
}
}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  const auto& f = common(a, b);
  return {f, f.add(a.value(), b.value())};
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  const auto& f = common(a, b);
  return {f, f.sub(a.value(), b.value())};
}
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const auto& f = common(a, b);
  return {f, f.mul(a.value(), b.value())};
}
FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  const auto& f = common(a, b);
  return {f, f.mul(a.value(), f.inv(b.value()))};
}
FieldElement FieldElement::operator-() const { return {spec_, spec_.neg(value_)}; }
FieldElement FieldElement::inv() const { return {spec_, spec_.inv(value_)}; }
FieldElement FieldElement::pow(std::uint64_t e) const { return {spec_, spec_.pow(value_, e)}; }
bool FieldElement::operator==(const FieldElement& other) const {
  return spec_ == other.spec_ && value_ == other.value_;
}

}  // namespace rsl
