#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace vacant {

class UnionFind {
 public:
  explicit UnionFind(std::int64_t n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::int64_t find(std::int64_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::int64_t a, std::int64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
  }

  std::int64_t component_size(std::int64_t x) { return size_[find(x)]; }
  std::int64_t components() const { return components_; }

 private:
  std::vector<std::int64_t> parent_;
  std::vector<std::int64_t> size_;
  std::int64_t components_;
};

}  // namespace vacant
