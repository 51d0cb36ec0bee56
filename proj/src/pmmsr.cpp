#include "rsl/pmmsr.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rsl/error.hpp"
#include "rsl/subsets.hpp"

namespace rsl {

CodeParams CodeParams::product_matrix(int n, int k, int m) {
  if (k < 2) throw Error(ErrorCode::BadParams, "k must be at least 2");
  if (m < 1) throw Error(ErrorCode::BadParams, "concatenation factor must be >= 1");
  CodeParams p;
  p.n = n;
  p.k = k;
  p.d = 2 * k - 2;
  p.m = m;
  p.alpha = m * (k - 1);
  p.beta = m;
  p.B = k * p.alpha;
  if (n < p.d + 1) throw Error(ErrorCode::BadParams, "need n >= d+1");
  return p;
}

std::string CodeParams::describe() const {
  std::ostringstream os;
  os << "(n=" << n << ",k=" << k << ",d=" << d << ",alpha=" << alpha << ",beta=" << beta
     << ",B=" << B << ",m=" << m << ")";
  return os.str();
}

namespace {

void validate_params(const CodeParams& p) {
  const auto ref = CodeParams::product_matrix(p.n, p.k, p.m);
  if (ref.d != p.d || ref.alpha != p.alpha || ref.beta != p.beta || ref.B != p.B)
    throw Error(ErrorCode::BadParams, "parameters are not a product-matrix MSR point");
  // Cut-set bound with equality: B = sum_{i=1}^k min(alpha, (d-i+1) beta).
  int cut = 0;
  for (int i = 1; i <= p.k; ++i) cut += std::min(p.alpha, (p.d - i + 1) * p.beta);
  if (cut != p.B) throw Error(ErrorCode::BadParams, "cut-set bound not met with equality");
}

bool lambdas_distinct(const FieldSpec& f, const std::vector<Elem>& pts, int a0) {
  std::set<Elem> seen;
  for (auto x : pts)
    if (!seen.insert(f.pow(x, a0)).second) return false;
  return true;
}

}  // namespace

PmMsrCode::PmMsrCode(CodeParams params, FieldSpec field, std::vector<Elem> points)
    : params_(params), field_(std::move(field)), points_(std::move(points)),
      psi_(vandermonde(field_, std::span<const Elem>(points_), params_.d)) {}

PmMsrCode PmMsrCode::construct(const CodeParams& params, FieldSpec field,
                               std::optional<std::vector<Elem>> points) {
  validate_params(params);
  const int n = params.n;
  const int a0 = params.base_alpha();
  if (field.order() <= static_cast<std::uint64_t>(n))
    throw Error(ErrorCode::FieldTooSmall, "need more than n field elements");

  std::vector<Elem> pts;
  if (points) {
    pts = *points;
    if (static_cast<int>(pts.size()) != n)
      throw Error(ErrorCode::LengthMismatch, "need exactly n evaluation points");
    std::set<Elem> uniq(pts.begin(), pts.end());
    if (static_cast<int>(uniq.size()) != n || uniq.count(0) > 0 ||
        std::any_of(pts.begin(), pts.end(), [&](Elem x) { return !field.contains(x); }))
      throw Error(ErrorCode::BadParams, "points must be distinct nonzero field elements");
    if (!lambdas_distinct(field, pts, a0))
      throw Error(ErrorCode::DegenerateLambda, "x_i^alpha0 values collide");
  } else {
    const Elem g = field.primitive_element();
    for (int i = 1; i <= n; ++i) pts.push_back(field.pow(g, i));
    if (!lambdas_distinct(field, pts, a0)) {
      pts.clear();
      std::set<Elem> lambdas;
      Elem x = g;
      for (std::uint64_t e = 1; e < field.order() && static_cast<int>(pts.size()) < n; ++e) {
        if (lambdas.insert(field.pow(x, a0)).second) pts.push_back(x);
        x = field.mul(x, g);
      }
      if (static_cast<int>(pts.size()) < n)
        throw Error(ErrorCode::DegenerateLambda, "cannot find n points with distinct x^alpha0");
    }
  }

  PmMsrCode code(params, field, std::move(pts));
  if (n <= 8) {
    const auto nodes = iota_set(0, n - 1);
    for (const auto& rows : combinations(nodes, params.d)) {
      std::vector<std::size_t> sel(rows.begin(), rows.end());
      if (rank(code.psi_.select_rows(sel)) != static_cast<std::size_t>(params.d))
        throw Error(ErrorCode::BadParams, "a d-row submatrix of Psi is singular");
    }
    const auto phi = code.psi_.columns(0, a0);
    for (const auto& rows : combinations(nodes, a0)) {
      std::vector<std::size_t> sel(rows.begin(), rows.end());
      if (rank(phi.select_rows(sel)) != static_cast<std::size_t>(a0))
        throw Error(ErrorCode::BadParams, "an alpha0-row submatrix of Phi is singular");
    }
  }
  return code;
}

void PmMsrCode::check_node(NodeId node) const {
  if (node < 1 || node > params_.n)
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(node));
}

std::vector<Elem> PmMsrCode::phi(NodeId node) const {
  check_node(node);
  const auto r = psi_.row(node - 1);
  return {r.begin(), r.begin() + params_.base_alpha()};
}

Elem PmMsrCode::lambda(NodeId node) const {
  check_node(node);
  return field_.pow(points_[node - 1], params_.base_alpha());
}

PmMsrCode PmMsrCode::truncated(int n_prefix) const {
  auto p = CodeParams::product_matrix(n_prefix, params_.k, params_.m);
  if (n_prefix > params_.n) throw Error(ErrorCode::BadParams, "truncation larger than code");
  return PmMsrCode(p, field_, std::vector<Elem>(points_.begin(), points_.begin() + n_prefix));
}

std::size_t PmMsrCode::message_index(int copy, int which, int row, int col) const {
  const int a0 = params_.base_alpha();
  const int r = std::min(row, col);
  const int c = std::max(row, col);
  const int tri = a0 * (a0 + 1) / 2;
  const int in_tri = r * a0 - r * (r - 1) / 2 + (c - r);
  return static_cast<std::size_t>(copy * params_.base_message() + which * tri + in_tri);
}

std::vector<FMatrix> PmMsrCode::encode_columns(const FMatrix& message) const {
  if (message.rows() != static_cast<std::size_t>(params_.B))
    throw Error(ErrorCode::LengthMismatch, "message must have B symbols");
  const int a0 = params_.base_alpha();
  const int d = params_.d;
  const std::size_t layers = message.cols();
  std::vector<FMatrix> shares(params_.n, FMatrix(field_, params_.alpha, layers));
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (int copy = 0; copy < params_.m; ++copy) {
      // M = [S1; S2], d x alpha0, built from the symmetric layout.
      FMatrix msg(field_, d, a0);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < a0; ++c)
          msg(r, c) = message(message_index(copy, r / a0, r % a0, c), layer);
      const FMatrix coded = psi_ * msg;
      for (int i = 0; i < params_.n; ++i)
        for (int c = 0; c < a0; ++c) shares[i](copy * a0 + c, layer) = coded(i, c);
    }
  }
  return shares;
}

std::vector<std::vector<Elem>> PmMsrCode::encode(std::span<const Elem> message) const {
  const auto shares = encode_columns(
      FMatrix::column(field_, std::vector<Elem>(message.begin(), message.end())));
  std::vector<std::vector<Elem>> out;
  for (const auto& s : shares) out.push_back(s.col(0));
  return out;
}

FMatrix PmMsrCode::repair_symbol_columns(NodeId helper, NodeId failed,
                                         const FMatrix& share) const {
  check_node(helper);
  check_node(failed);
  if (helper == failed) throw Error(ErrorCode::SelfRepair, "helper equals failed node");
  if (share.rows() != static_cast<std::size_t>(params_.alpha))
    throw Error(ErrorCode::LengthMismatch, "share must have alpha symbols");
  const int a0 = params_.base_alpha();
  const auto ph = phi(failed);
  FMatrix out(field_, params_.beta, share.cols());
  for (std::size_t layer = 0; layer < share.cols(); ++layer)
    for (int copy = 0; copy < params_.m; ++copy) {
      Elem acc = 0;
      for (int a = 0; a < a0; ++a)
        acc = field_.add(acc, field_.mul(share(copy * a0 + a, layer), ph[a]));
      out(copy, layer) = acc;
    }
  return out;
}

std::vector<Elem> PmMsrCode::repair_symbol(NodeId helper, NodeId failed,
                                           std::span<const Elem> share) const {
  return repair_symbol_columns(
             helper, failed,
             FMatrix::column(field_, std::vector<Elem>(share.begin(), share.end())))
      .col(0);
}

FMatrix PmMsrCode::repair_columns(NodeId failed, std::span<const NodeId> helpers,
                                  const std::vector<FMatrix>& symbols) const {
  check_node(failed);
  const int d = params_.d;
  const int a0 = params_.base_alpha();
  if (static_cast<int>(helpers.size()) != d)
    throw Error(ErrorCode::WrongHelperCount, "repair needs exactly d helpers");
  if (symbols.size() != helpers.size())
    throw Error(ErrorCode::LengthMismatch, "one symbol block per helper");
  std::set<NodeId> uniq;
  for (auto h : helpers) {
    check_node(h);
    if (h == failed) throw Error(ErrorCode::SelfRepair, "failed node listed as helper");
    uniq.insert(h);
  }
  if (static_cast<int>(uniq.size()) != d)
    throw Error(ErrorCode::WrongHelperCount, "helpers must be distinct");

  std::vector<std::size_t> rows;
  for (auto h : helpers) rows.push_back(static_cast<std::size_t>(h - 1));
  FMatrix psi_inv(field_, 0, 0);
  try {
    psi_inv = invert(psi_.select_rows(rows));
  } catch (const Error&) {
    throw Error(ErrorCode::SingularSystem, "helper submatrix of Psi is singular");
  }

  const std::size_t layers = symbols.front().cols();
  const Elem lam = lambda(failed);
  FMatrix out(field_, params_.alpha, layers);
  for (int copy = 0; copy < params_.m; ++copy) {
    FMatrix received(field_, d, layers);
    for (int j = 0; j < d; ++j) {
      if (symbols[j].rows() != static_cast<std::size_t>(params_.beta) ||
          symbols[j].cols() != layers)
        throw Error(ErrorCode::LengthMismatch, "repair symbol block shape");
      for (std::size_t l = 0; l < layers; ++l) received(j, l) = symbols[j](copy, l);
    }
    // (S1 phi_f ; S2 phi_f), then phi_f^T S1 + lambda_f phi_f^T S2.
    const FMatrix m_phi = psi_inv * received;
    for (int a = 0; a < a0; ++a)
      for (std::size_t l = 0; l < layers; ++l)
        out(copy * a0 + a, l) =
            field_.add(m_phi(a, l), field_.mul(lam, m_phi(a0 + a, l)));
  }
  return out;
}

std::vector<Elem> PmMsrCode::repair(NodeId failed, std::span<const NodeId> helpers,
                                    const std::vector<std::vector<Elem>>& symbols) const {
  std::vector<FMatrix> blocks;
  for (const auto& s : symbols) blocks.push_back(FMatrix::column(field_, s));
  return repair_columns(failed, helpers, blocks).col(0);
}

FMatrix PmMsrCode::reconstruct_columns(std::span<const NodeId> nodes,
                                       const std::vector<FMatrix>& shares) const {
  const int k = params_.k;
  if (static_cast<int>(nodes.size()) != k)
    throw Error(ErrorCode::WrongNodeCount, "reconstruction needs exactly k nodes");
  if (shares.size() != nodes.size())
    throw Error(ErrorCode::LengthMismatch, "one share per node");
  std::set<NodeId> uniq;
  for (auto v : nodes) {
    check_node(v);
    uniq.insert(v);
  }
  if (static_cast<int>(uniq.size()) != k)
    throw Error(ErrorCode::WrongNodeCount, "node ids must be distinct");

  const std::size_t layers = shares.front().cols();
  FMatrix system(field_, 0, params_.B);
  FMatrix rhs(field_, 0, layers);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (shares[i].rows() != static_cast<std::size_t>(params_.alpha) ||
        shares[i].cols() != layers)
      throw Error(ErrorCode::LengthMismatch, "share shape");
    for (int slot = 0; slot < params_.alpha; ++slot) {
      const auto r = stored_row(nodes[i], slot);
      system.append_row(r);
      rhs.append_row(shares[i].row(slot));
    }
  }
  if (rank(system) != static_cast<std::size_t>(params_.B))
    throw Error(ErrorCode::RankDeficient, "stored rows of k nodes do not span the message");
  return solve(system, rhs);
}

std::vector<Elem> PmMsrCode::reconstruct(std::span<const NodeId> nodes,
                                         const std::vector<std::vector<Elem>>& shares) const {
  std::vector<FMatrix> blocks;
  for (const auto& s : shares) blocks.push_back(FMatrix::column(field_, s));
  return reconstruct_columns(nodes, blocks).col(0);
}

std::vector<Elem> PmMsrCode::stored_row(NodeId node, int slot) const {
  check_node(node);
  if (slot < 0 || slot >= params_.alpha) throw Error(ErrorCode::BadSelector, "slot out of range");
  const int a0 = params_.base_alpha();
  const int copy = slot / a0;
  const int col = slot % a0;
  std::vector<Elem> row(params_.B, 0);
  const auto psi_i = psi_.row(node - 1);
  for (int r = 0; r < params_.d; ++r) {
    const auto idx = message_index(copy, r / a0, r % a0, col);
    row[idx] = field_.add(row[idx], psi_i[r]);
  }
  return row;
}

std::vector<Elem> PmMsrCode::repair_row(NodeId helper, NodeId failed, int slot) const {
  check_node(helper);
  check_node(failed);
  if (helper == failed) throw Error(ErrorCode::SelfRepair, "helper equals failed node");
  if (slot < 0 || slot >= params_.beta) throw Error(ErrorCode::BadSelector, "slot out of range");
  const int a0 = params_.base_alpha();
  const auto ph = phi(failed);
  std::vector<Elem> row(params_.B, 0);
  for (int a = 0; a < a0; ++a) {
    const auto part = stored_row(helper, slot * a0 + a);
    for (int b = 0; b < params_.B; ++b)
      row[b] = field_.add(row[b], field_.mul(ph[a], part[b]));
  }
  return row;
}

std::vector<Observation> PmMsrCode::observation_rows(const Selector& selector, int epoch) const {
  auto check = [this](const NodeSet& s) {
    for (auto v : s)
      if (v < 1 || v > params_.n)
        throw Error(ErrorCode::BadSelector, "node " + std::to_string(v) + " out of range");
  };
  std::vector<Observation> out;
  auto add_repair = [&](NodeId helper, NodeId failed) {
    for (int slot = 0; slot < params_.beta; ++slot)
      out.push_back({RepairTag{helper, failed, slot, epoch}, repair_row(helper, failed, slot)});
  };
  if (const auto* s = std::get_if<select::Stored>(&selector)) {
    check(s->nodes);
    for (auto v : s->nodes)
      for (int slot = 0; slot < params_.alpha; ++slot)
        out.push_back({StoredTag{v, slot}, stored_row(v, slot)});
  } else if (const auto* s = std::get_if<select::RepairTo>(&selector)) {
    check(s->failed);
    for (auto f : s->failed)
      for (NodeId i = 1; i <= params_.n; ++i)
        if (i != f) add_repair(i, f);
  } else {
    const auto& s2 = std::get<select::RepairFromTo>(selector);
    check(s2.helpers);
    check(s2.failed);
    for (auto f : s2.failed)
      for (auto i : s2.helpers)
        if (i != f) add_repair(i, f);
  }
  return out;
}

}  // namespace rsl
