#ifndef RSL_CAPACITY_HPP_
#define RSL_CAPACITY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace rsl {

using Rational = boost::rational<std::int64_t>;

// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& r);

struct CapacityQuery {
  int k = 0;
  int d = 0;
  int n = 0;
  int alpha = 0;
  int beta = 0;
  int l1 = 0;
  int l2 = 0;

  // MSR point alpha = (d-k+1) beta; n defaults to d+1.
  static CapacityQuery msr(int k, int d, int beta, int l1, int l2, int n = 0);
  // Throws BadQuery. validate_code checks only the code parameters.
  void validate_code() const;
  void validate() const;
};

enum class Kind { Exact, LowerBound, UpperBound };
enum class Category { Cat1, Cat2 };

const char* to_string(Kind kind);

struct CapacityValue {
  Rational value;
  Kind kind = Kind::Exact;
  Category category = Category::Cat1;
  std::optional<int> t;
  std::optional<int> e;
};

// Repair-data entropy term pi(beta, l2): exact l2*beta when
// (l2-1) beta < d-k+1, otherwise a lower bound parameterised by (t, e).
// Requires 0 <= l2 <= n-1 but not the l1 + l2 < k budget.
CapacityValue pi(const CapacityQuery& q);

// (k-l1-l2)(alpha - pi); an upper bound whenever pi is only a lower bound.
CapacityValue secrecy_capacity(const CapacityQuery& q);

struct NamedBound {
  std::string name;
  Rational value;
  Kind kind = Kind::UpperBound;
};

// Comparison rows in CSV column order: cutset, pawar, tandon (n=d+1, l1=0,
// l2>=1 only), shah, rawat (l2 in {1,2} only), goparaju, this_paper.
std::vector<NamedBound> bounds_table(const CapacityQuery& q);

// Closed form (k-l1-l2)(1-1/(d-k+1))^l2 alpha with n = d+1.
Rational geometric_bound(const CapacityQuery& q);

std::string capacity_csv_header();
std::string capacity_csv_row(const CapacityQuery& q);
std::string capacity_csv(const std::vector<CapacityQuery>& sweep);

}  // namespace rsl

#endif  // RSL_CAPACITY_HPP_
