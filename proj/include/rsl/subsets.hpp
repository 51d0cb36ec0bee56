#ifndef RSL_SUBSETS_HPP_
#define RSL_SUBSETS_HPP_

#include <algorithm>
#include <cstdint>
#include <vector>

namespace rsl {

// {first, ..., last}
inline std::vector<int> iota_set(int first, int last) {
  std::vector<int> out;
  for (int i = first; i <= last; ++i) out.push_back(i);
  return out;
}

inline std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  return out;
}

inline std::vector<int> set_union(std::vector<int> a, const std::vector<int>& b) {
  for (int x : b)
    if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
  std::sort(a.begin(), a.end());
  return a;
}

inline bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return false;
  return true;
}

// All size-r subsets of `items` in lexicographic order of positions.
inline std::vector<std::vector<int>> combinations(const std::vector<int>& items, int r) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(items.size());
  if (r < 0 || r > n) return out;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  for (;;) {
    std::vector<int> pick;
    pick.reserve(r);
    for (int i : idx) pick.push_back(items[i]);
    out.push_back(std::move(pick));
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

inline std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t out = 1;
  for (int i = 1; i <= r; ++i) out = out * static_cast<std::uint64_t>(n - r + i) / i;
  return out;
}

}  // namespace rsl

#endif  // RSL_SUBSETS_HPP_
