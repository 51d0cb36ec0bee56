#include "rsl/secrecy.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rsl/error.hpp"
#include "rsl/subsets.hpp"

namespace rsl {

std::string EavesdropperModel::describe() const {
  std::ostringstream os;
  auto put = [&os](const NodeSet& s) {
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << '}';
  };
  os << "E=";
  put(E);
  os << " F=";
  put(F);
  return os.str();
}

void validate_model(const PmMsrCode& code, const EavesdropperModel& model) {
  const auto& p = code.params();
  std::set<NodeId> seen;
  for (const auto* s : {&model.E, &model.F})
    for (auto v : *s) {
      if (v < 1 || v > p.n) throw Error(ErrorCode::BadModel, "node " + std::to_string(v) + " out of range");
      if (!seen.insert(v).second)
        throw Error(ErrorCode::BadModel, "E and F must be disjoint and duplicate-free");
    }
  if (model.l1() + model.l2() > p.k - 1)
    throw Error(ErrorCode::BadModel, "l1 + l2 must be at most k-1");
}

std::vector<EavesdropperModel> enumerate_models(int limit, int l1, int l2) {
  std::vector<EavesdropperModel> out;
  const auto all = iota_set(1, limit);
  for (const auto& e : combinations(all, l1))
    for (const auto& f : combinations(set_minus(all, e), l2)) out.push_back({e, f});
  return out;
}

std::vector<EavesdropperModel> enumerate_models(const PmMsrCode& code, int l1, int l2) {
  return enumerate_models(code.params().n, l1, l2);
}

ObsSet eavesdropped_rows(const PmMsrCode& code, const EavesdropperModel& model) {
  validate_model(code, model);
  return ObsSet::of(code, select::Stored{model.E})
      .united(ObsSet::of(code, select::RepairTo{model.F}));
}

std::size_t leakage(const PmMsrCode& code, const EavesdropperModel& model) {
  return joint_entropy(eavesdropped_rows(code, model));
}

std::size_t achieved_secure_size(const PmMsrCode& code, const EavesdropperModel& model) {
  return static_cast<std::size_t>(code.params().B) - leakage(code, model);
}

SecureScheme::SecureScheme(ExtensionSpec ext, int ell, int l1, int l2)
    : ext_(std::move(ext)), ell_(ell), l1_(l1), l2_(l2),
      moore_(ext_, ext_.degree(), ext_.degree()), moore_inv_(ext_, 0, 0) {
  const int b = ext_.degree();
  if (ell_ < 0 || ell_ > b) throw Error(ErrorCode::BadParams, "randomness size out of range");
  for (int j = 0; j < b; ++j) points_.push_back(ext_.monomial(j));
  for (int j = 0; j < b; ++j) {
    LElem power = points_[j];
    for (int i = 0; i < b; ++i) {
      moore_(j, i) = power;
      power = ext_.frobenius(power, 1);
    }
  }
  try {
    moore_inv_ = invert(moore_);
  } catch (const Error&) {
    throw Error(ErrorCode::Singular, "Moore matrix is singular");
  }
}

SecureScheme SecureScheme::make(const PmMsrCode& code, int l1, int l2) {
  const auto& p = code.params();
  if (l1 < 0 || l2 < 0 || l1 + l2 > p.k - 1)
    throw Error(ErrorCode::BadModel, "l1 + l2 must be at most k-1");
  std::size_t lo = static_cast<std::size_t>(p.B), hi = 0;
  for (const auto& model : enumerate_models(code, l1, l2)) {
    const auto leak = leakage(code, model);
    lo = std::min(lo, leak);
    hi = std::max(hi, leak);
  }
  if (lo != hi)
    throw Error(ErrorCode::AsymmetricLeakage, "leakage ranges over [" + std::to_string(lo) +
                                                  ", " + std::to_string(hi) + "]");
  if (hi == static_cast<std::size_t>(p.B))
    throw Error(ErrorCode::CapacityZero, "eavesdropper sees the whole message");
  return SecureScheme(ExtensionSpec::make(code.field(), p.B), static_cast<int>(hi), l1, l2);
}

SecureScheme SecureScheme::with_randomness(const PmMsrCode& code, int ell) {
  return SecureScheme(ExtensionSpec::make(code.field(), code.params().B), ell, 0, 0);
}

SecureScheme SecureScheme::restore(const PmMsrCode& code, ExtensionSpec ext, int ell, int l1,
                                   int l2) {
  if (ext.base() != code.field() || ext.degree() != code.params().B)
    throw Error(ErrorCode::FieldMismatch, "extension does not match the code");
  return SecureScheme(std::move(ext), ell, l1, l2);
}

std::vector<LElem> SecureScheme::wrap(std::span<const LElem> secret,
                                      std::span<const LElem> randomness) const {
  if (static_cast<int>(secret.size()) != secret_size() ||
      static_cast<int>(randomness.size()) != ell_)
    throw Error(ErrorCode::LengthMismatch, "secret/randomness sizes do not match the scheme");
  std::vector<LElem> u(randomness.begin(), randomness.end());
  u.insert(u.end(), secret.begin(), secret.end());
  for (const auto& x : u)
    if (!ext_.contains(x)) throw Error(ErrorCode::FieldMismatch, "symbol not in L");
  return (moore_ * LMatrix::column(ext_, std::move(u))).col(0);
}

std::vector<LElem> SecureScheme::unwrap(std::span<const LElem> codeword) const {
  if (static_cast<int>(codeword.size()) != message_size())
    throw Error(ErrorCode::LengthMismatch, "codeword must have B symbols");
  const auto u =
      (moore_inv_ * LMatrix::column(ext_, std::vector<LElem>(codeword.begin(), codeword.end())))
          .col(0);
  return {u.begin() + ell_, u.end()};
}

FMatrix to_layers(const ExtensionSpec& ext, std::span<const LElem> symbols) {
  const auto t = static_cast<std::size_t>(ext.degree());
  FMatrix out(ext.base(), symbols.size(), t);
  for (std::size_t r = 0; r < symbols.size(); ++r) {
    if (!ext.contains(symbols[r])) throw Error(ErrorCode::FieldMismatch, "symbol not in L");
    for (std::size_t c = 0; c < t; ++c) out(r, c) = symbols[r][c];
  }
  return out;
}

std::vector<LElem> from_layers(const ExtensionSpec& ext, const FMatrix& layers) {
  if (layers.cols() != static_cast<std::size_t>(ext.degree()))
    throw Error(ErrorCode::LengthMismatch, "layer count differs from extension degree");
  std::vector<LElem> out;
  for (std::size_t r = 0; r < layers.rows(); ++r) {
    const auto row = layers.row(r);
    out.emplace_back(row.begin(), row.end());
  }
  return out;
}

PerfectReport verify_perfect(const SecureScheme& scheme, const ObsSet& view) {
  const auto& ext = scheme.extension();
  if (view.field() != ext.base() || static_cast<int>(view.length()) != scheme.message_size())
    throw Error(ErrorCode::MixedFields, "view does not match the scheme");
  PerfectReport report;
  if (view.empty()) {
    report.perfect = true;
    return report;
  }
  const auto lifted =
      map_matrix(view.matrix(), ext, [&](Elem e) { return ext.embed(e); });
  const LMatrix composed = lifted * scheme.moore();
  report.observed_rank = rank(composed);
  report.randomness_rank =
      scheme.randomness_size() == 0 ? 0 : rank(composed.columns(0, scheme.randomness_size()));
  report.perfect = report.observed_rank == report.randomness_rank;
  return report;
}

PerfectReport verify_perfect(const SecureScheme& scheme, const PmMsrCode& code,
                             const EavesdropperModel& model) {
  return verify_perfect(scheme, eavesdropped_rows(code, model));
}

std::string AttackReport::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = {{"E", model.E}, {"F", model.F}};
  j["leakage"] = leakage;
  j["secure_size"] = secure_size;
  j["perfect"] = perfect;
  j["formula_value"] = to_string(formula.value);
  j["formula_kind"] = to_string(formula.kind);
  j["match"] = match;
  return j.dump();
}

AttackReport attack(const PmMsrCode& code, const SecureScheme& scheme,
                    const EavesdropperModel& model) {
  const auto& p = code.params();
  AttackReport r;
  r.model = model;
  const auto view = eavesdropped_rows(code, model);
  r.leakage = joint_entropy(view);
  r.secure_size = static_cast<std::size_t>(p.B) - r.leakage;
  r.perfect = verify_perfect(scheme, view).perfect;
  r.formula = secrecy_capacity(CapacityQuery::msr(p.k, p.d, p.beta, model.l1(), model.l2(), p.n));
  const Rational achieved(static_cast<std::int64_t>(r.secure_size));
  r.match = r.formula.kind == Kind::Exact ? achieved == r.formula.value
                                          : achieved <= r.formula.value;
  return r;
}

}  // namespace rsl
