#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qbc {

// Fixed-size bit vector sized at construction. Used for adjacency rows and
// for vertex subsets during search; intersection counts are the hot path.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void set_all() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // |this & other|; both operands must have the same size.
  std::size_t count_and(const Bitset& other) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      c += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
    }
    return c;
  }

  bool any() const {
    for (auto w : words_) {
      if (w) return true;
    }
    return false;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }

  // Calls f(index) for each set bit in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  void trim() {
    if (bits_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
  }

  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace qbc
