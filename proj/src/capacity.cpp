#include "rsl/capacity.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "rsl/error.hpp"

namespace rsl {

namespace {

Rational rpow(Rational base, int e) {
  Rational out(1);
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

Rational clamp0(Rational r) { return r < 0 ? Rational(0) : r; }

}  // namespace

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::Exact: return "Exact";
    case Kind::LowerBound: return "LowerBound";
    case Kind::UpperBound: return "UpperBound";
  }
  return "";
}

CapacityQuery CapacityQuery::msr(int k, int d, int beta, int l1, int l2, int n) {
  CapacityQuery q;
  q.k = k;
  q.d = d;
  q.n = n == 0 ? d + 1 : n;
  q.beta = beta;
  q.alpha = (d - k + 1) * beta;
  q.l1 = l1;
  q.l2 = l2;
  return q;
}

void CapacityQuery::validate_code() const {
  if (k < 1 || d < k || beta < 1 || n < d + 1)
    throw Error(ErrorCode::BadQuery, "need k >= 1, d >= k, beta >= 1, n >= d+1");
  if (alpha != (d - k + 1) * beta)
    throw Error(ErrorCode::BadQuery, "alpha must equal (d-k+1) beta");
}

void CapacityQuery::validate() const {
  validate_code();
  if (l1 < 0 || l2 < 0 || l1 + l2 > k - 1)
    throw Error(ErrorCode::BadQuery, "need l1, l2 >= 0 and l1 + l2 <= k-1");
}

CapacityValue pi(const CapacityQuery& q) {
  // pi only concerns repair traffic into l2 nodes, so the l1 + l2 < k
  // budget is not required here.
  q.validate_code();
  if (q.l2 < 0 || q.l2 > q.n - 1) throw Error(ErrorCode::BadQuery, "need 0 <= l2 <= n-1");
  const int r = q.d - q.k + 1;
  CapacityValue out;
  if ((q.l2 - 1) * q.beta < r) {
    out.value = Rational(q.l2 * q.beta);
    out.kind = Kind::Exact;
    out.category = Category::Cat1;
    return out;
  }
  // Boundary l2 = 1 + r/beta lands here, as the strict inequality dictates.
  const int t = (r % q.beta == 0) ? r / q.beta : r / q.beta + 1;
  const int e = q.l2 - t;
  const Rational ratio(q.d - q.k, r);
  out.value = Rational(t * q.beta) +
              Rational(q.beta * (r - t)) * (Rational(1) - rpow(ratio, e));
  out.kind = Kind::LowerBound;
  out.category = Category::Cat2;
  out.t = t;
  out.e = e;
  return out;
}

CapacityValue secrecy_capacity(const CapacityQuery& q) {
  q.validate();
  CapacityValue p = pi(q);
  CapacityValue out = p;
  out.value = clamp0(Rational(q.k - q.l1 - q.l2) * (Rational(q.alpha) - p.value));
  out.kind = p.category == Category::Cat1 ? Kind::Exact : Kind::UpperBound;
  return out;
}

Rational geometric_bound(const CapacityQuery& q) {
  const int r = q.d - q.k + 1;
  return Rational(q.k - q.l1 - q.l2) * rpow(Rational(1) - Rational(1, r), q.l2) *
         Rational(q.alpha);
}

std::vector<NamedBound> bounds_table(const CapacityQuery& q) {
  q.validate();
  const int secure_nodes = q.k - q.l1 - q.l2;
  std::vector<NamedBound> rows;

  Rational cut(0);
  for (int i = q.l1 + q.l2 + 1; i <= q.k; ++i)
    cut += Rational(std::min(q.alpha, (q.d - i + 1) * q.beta));
  rows.push_back({"cutset", cut, Kind::UpperBound});

  rows.push_back({"pawar", Rational(secure_nodes * q.alpha), Kind::UpperBound});

  if (q.n == q.d + 1 && q.l1 == 0 && q.l2 >= 1 && q.l2 < q.k)
    rows.push_back({"tandon",
                    Rational(q.k - q.l2) * (Rational(1) - Rational(1, q.d)) * Rational(q.alpha),
                    Kind::UpperBound});

  rows.push_back({"shah", clamp0(Rational(secure_nodes * (q.alpha - q.l2 * q.beta))),
                  Kind::Exact});

  if (q.l2 == 1 || q.l2 == 2) {
    const Rational theta = q.l2 == 1
                               ? Rational(q.beta)
                               : Rational(2 * q.beta) - Rational(q.beta, q.d + 1 - q.k);
    rows.push_back({"rawat", clamp0(Rational(secure_nodes) * (Rational(q.alpha) - theta)),
                    Kind::UpperBound});
  }

  rows.push_back({"goparaju", geometric_bound(q), Kind::UpperBound});

  const auto mine = secrecy_capacity(q);
  rows.push_back({"this_paper", mine.value, mine.kind});
  return rows;
}

std::string capacity_csv_header() {
  return "k,d,n,alpha,beta,l1,l2,cutset,pawar,tandon,shah,rawat,goparaju,this_paper,kind";
}

std::string capacity_csv_row(const CapacityQuery& q) {
  const auto rows = bounds_table(q);
  std::map<std::string, const NamedBound*> by_name;
  for (const auto& r : rows) by_name[r.name] = &r;
  auto cell = [&](const char* name) {
    auto it = by_name.find(name);
    return it == by_name.end() ? std::string() : to_string(it->second->value);
  };
  std::ostringstream os;
  os << q.k << ',' << q.d << ',' << q.n << ',' << q.alpha << ',' << q.beta << ',' << q.l1
     << ',' << q.l2 << ',' << cell("cutset") << ',' << cell("pawar") << ',' << cell("tandon")
     << ',' << cell("shah") << ',' << cell("rawat") << ',' << cell("goparaju") << ','
     << cell("this_paper") << ',' << to_string(by_name.at("this_paper")->kind);
  return os.str();
}

std::string capacity_csv(const std::vector<CapacityQuery>& sweep) {
  std::string out = capacity_csv_header() + "\n";
  for (const auto& q : sweep) out += capacity_csv_row(q) + "\n";
  return out;
}

}  // namespace rsl
