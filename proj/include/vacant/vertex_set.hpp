#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace vacant {

using Vertex = std::uint32_t;

/// Membership bitmap over vertex ids 0..n-1 with cached cardinality.
class VertexSet {
 public:
  explicit VertexSet(std::int64_t n) : n_(n), words_((n + 63) / 64, 0) {}
  VertexSet(std::int64_t n, std::initializer_list<Vertex> vs) : VertexSet(n) {
    for (auto v : vs) insert(v);
  }

  std::int64_t universe() const { return n_; }
  std::int64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(Vertex v) const { return (words_[v >> 6] >> (v & 63)) & 1u; }

  /// Returns true when v was not yet a member.
  bool insert(Vertex v) {
    std::uint64_t& w = words_[v >> 6];
    const std::uint64_t bit = 1ull << (v & 63);
    if (w & bit) return false;
    w |= bit;
    ++count_;
    return true;
  }

  bool erase(Vertex v) {
    std::uint64_t& w = words_[v >> 6];
    const std::uint64_t bit = 1ull << (v & 63);
    if (!(w & bit)) return false;
    w &= ~bit;
    --count_;
    return true;
  }

  void clear() {
    std::fill(words_.begin(), words_.end(), 0);
    count_ = 0;
  }

  VertexSet complement() const {
    VertexSet out(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    const int tail = static_cast<int>(n_ & 63);
    if (tail != 0) out.words_.back() &= (1ull << tail) - 1;
    out.count_ = n_ - count_;
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        const int b = std::countr_zero(w);
        f(static_cast<Vertex>(i * 64 + b));
        w &= w - 1;
      }
    }
  }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(count_));
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  std::int64_t n_ = 0;
  std::int64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace vacant
