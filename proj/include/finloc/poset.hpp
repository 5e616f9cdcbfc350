#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "finloc/errors.hpp"

namespace finloc {

// Hard cap on poset size: a 16-element antichain already has 2^16 down-sets.
inline constexpr int kMaxPosetElements = 16;

// A finite poset over named elements. The order relation is stored closed
// (reflexive and transitive); antisymmetry is checked on construction.
// Elements are indexed 0..n-1; per-element up-sets fit in a 16-bit mask.
class Poset {
 public:
  Poset() = default;

  static Poset from_pairs(std::vector<std::string> names,
                          const std::vector<std::pair<int, int>>& leq_pairs) {
    const int n = static_cast<int>(names.size());
    if (n > kMaxPosetElements)
      throw SizeExceeded("poset has " + std::to_string(n) + " elements; limit is " +
                         std::to_string(kMaxPosetElements));
    std::vector<uint32_t> up(n, 0);
    for (int i = 0; i < n; ++i) up[i] |= 1u << i;  // reflexive
    for (auto [i, j] : leq_pairs) {
      if (i < 0 || i >= n || j < 0 || j >= n)
        throw OutOfRange("leq pair (" + std::to_string(i) + "," + std::to_string(j) +
                         ") out of range");
      up[i] |= 1u << j;
    }
    // Transitive closure (Warshall on bit rows).
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (up[i] & (1u << k)) up[i] |= up[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j)
        if ((up[i] & (1u << j)) && (up[j] & (1u << i)))
          throw ParseError("relation is not antisymmetric: " + names[i] + " <= " + names[j] +
                           " and " + names[j] + " <= " + names[i]);
    Poset p;
    p.names_ = std::move(names);
    p.up_ = std::move(up);
    p.build_down();
    return p;
  }

  static Poset chain(int n) {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
      names.push_back("c" + std::to_string(i));
      if (i + 1 < n) pairs.emplace_back(i, i + 1);
    }
    return from_pairs(std::move(names), pairs);
  }

  static Poset antichain(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
    return from_pairs(std::move(names), {});
  }

  // (i,j) <= (i',j') iff i <= i' and j <= j'.
  static Poset product(const Poset& a, const Poset& b) {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> pairs;
    const int n = a.size() * b.size();
    if (n > kMaxPosetElements)
      throw SizeExceeded("product poset would have " + std::to_string(n) + " elements");
    auto id = [&](int i, int j) { return i * b.size() + j; };
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < b.size(); ++j) names.push_back("(" + a.name(i) + "," + b.name(j) + ")");
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < b.size(); ++j)
        for (int i2 = 0; i2 < a.size(); ++i2)
          for (int j2 = 0; j2 < b.size(); ++j2)
            if (a.leq(i, i2) && b.leq(j, j2)) pairs.emplace_back(id(i, j), id(i2, j2));
    return from_pairs(std::move(names), pairs);
  }

  static Poset disjoint_union(const Poset& a, const Poset& b) {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < a.size(); ++i) names.push_back(a.name(i) + "'");
    for (int j = 0; j < b.size(); ++j) names.push_back(b.name(j) + "\"");
    for (int i = 0; i < a.size(); ++i)
      for (int j = 0; j < a.size(); ++j)
        if (a.leq(i, j)) pairs.emplace_back(i, j);
    for (int i = 0; i < b.size(); ++i)
      for (int j = 0; j < b.size(); ++j)
        if (b.leq(i, j)) pairs.emplace_back(a.size() + i, a.size() + j);
    return from_pairs(std::move(names), pairs);
  }

  int size() const { return static_cast<int>(names_.size()); }

  bool leq(int i, int j) const {
    check(i);
    check(j);
    return (up_[i] >> j) & 1u;
  }

  const std::string& name(int i) const {
    check(i);
    return names_[i];
  }

  // Mask of all j with j <= i.
  uint32_t down_mask(int i) const {
    check(i);
    return down_[i];
  }

  uint32_t up_mask(int i) const {
    check(i);
    return up_[i];
  }

  bool is_down_closed(uint32_t mask) const {
    for (int i = 0; i < size(); ++i)
      if ((mask >> i) & 1u)
        if ((down_[i] & mask) != down_[i]) return false;
    return true;
  }

  // All down-closed subsets, as masks in increasing numeric order.
  // Numeric order is a linear extension of inclusion, so the empty set comes
  // first and the full set last.
  std::vector<uint32_t> downsets() const {
    std::vector<uint32_t> out;
    const uint32_t limit = 1u << size();
    for (uint32_t m = 0; m < limit; ++m)
      if (is_down_closed(m)) out.push_back(m);
    return out;
  }

  // Cover relation: i covered by j (i < j with nothing strictly between).
  std::vector<std::pair<int, int>> covers() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) {
        if (i == j || !leq(i, j)) continue;
        bool cover = true;
        for (int k = 0; k < size() && cover; ++k)
          if (k != i && k != j && leq(i, k) && leq(k, j)) cover = false;
        if (cover) out.emplace_back(i, j);
      }
    return out;
  }

  // A fixed linear extension: indices sorted by down-set size, ties by index.
  std::vector<int> linear_extension() const {
    std::vector<int> order(size());
    for (int i = 0; i < size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return __builtin_popcount(down_[a]) < __builtin_popcount(down_[b]);
    });
    return order;
  }

 private:
  void check(int i) const {
    if (i < 0 || i >= size())
      throw OutOfRange("poset index " + std::to_string(i) + " out of range");
  }

  void build_down() {
    down_.assign(size(), 0);
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        if ((up_[j] >> i) & 1u) down_[i] |= 1u << j;
  }

  std::vector<std::string> names_;
  std::vector<uint32_t> up_;    // up_[i] = mask of j with i <= j
  std::vector<uint32_t> down_;  // down_[i] = mask of j with j <= i
};

}  // namespace finloc
