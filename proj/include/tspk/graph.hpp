#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tspk {

using Weight = std::int64_t;

inline constexpr Weight kInfinity = std::numeric_limits<Weight>::max();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised when an exact engine is asked to go beyond its configured size.
class ScaleError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

inline Weight checked_add(Weight a, Weight b) {
  Weight out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("weight arithmetic overflows 63 bits");
  return out;
}

inline Weight checked_sub(Weight a, Weight b) {
  Weight out;
  if (__builtin_sub_overflow(a, b, &out)) throw OverflowError("weight arithmetic overflows 63 bits");
  return out;
}

inline Weight checked_mul(Weight a, Weight b) {
  Weight out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("weight arithmetic overflows 63 bits");
  return out;
}

// Saturating product, used only for reporting bound formulas.
inline Weight saturating_mul(Weight a, Weight b) {
  Weight out;
  if (__builtin_mul_overflow(a, b, &out)) return kInfinity;
  return out;
}

inline Weight saturating_add(Weight a, Weight b) {
  Weight out;
  if (__builtin_add_overflow(a, b, &out)) return kInfinity;
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Multiset of edge indices. Items are (edge, count) sorted by edge with count > 0.
struct EdgeMultiset {
  std::vector<std::pair<int, int>> items;

  void add(int edge, int count = 1) {
    if (count == 0) return;
    auto it = std::lower_bound(items.begin(), items.end(), std::make_pair(edge, 0));
    if (it != items.end() && it->first == edge) {
      it->second += count;
      if (it->second == 0) items.erase(it);
    } else {
      items.insert(it, {edge, count});
    }
  }

  int count(int edge) const {
    auto it = std::lower_bound(items.begin(), items.end(), std::make_pair(edge, 0));
    return it != items.end() && it->first == edge ? it->second : 0;
  }

  int size() const {
    int total = 0;
    for (const auto& [e, c] : items) total += c;
    return total;
  }

  bool empty() const { return items.empty(); }

  std::vector<int> expanded() const {
    std::vector<int> out;
    for (const auto& [e, c] : items)
      for (int i = 0; i < c; ++i) out.push_back(e);
    return out;
  }

  bool operator==(const EdgeMultiset&) const = default;
};

// Order used for "lexicographically least multiset" tie-breaks.
inline bool lex_less(const EdgeMultiset& a, const EdgeMultiset& b) {
  const auto x = a.expanded();
  const auto y = b.expanded();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

}  // namespace tspk
