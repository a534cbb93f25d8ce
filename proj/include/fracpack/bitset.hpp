#pragma once

#include <cstdint>
#include <vector>

#include "fracpack/kernels.hpp"

namespace fracpack {

/// Dynamic bitset whose bulk operations go through the dispatched kernels.
class Bitset {
 public:
  static constexpr size_t npos = static_cast<size_t>(-1);

  Bitset() = default;
  explicit Bitset(size_t bits) : bits_(bits), words_(kernels::words_for(bits), 0) {}

  size_t size() const { return bits_; }
  size_t word_count() const { return words_.size(); }
  uint64_t* data() { return words_.data(); }
  const uint64_t* data() const { return words_.data(); }

  void set(size_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
  void reset(size_t i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  bool test(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set_all() {
    for (auto& w : words_) w = ~uint64_t{0};
    trim();
  }

  bool any() const {
    for (uint64_t w : words_) {
      if (w) return true;
    }
    return false;
  }
  size_t count() const { return kernels::active().popcount(data(), word_count()); }
  size_t and_count(const Bitset& o) const { return kernels::active().and_popcount(data(), o.data(), word_count()); }
  bool intersects(const Bitset& o) const { return kernels::active().and_any(data(), o.data(), word_count()); }
  bool intersects(const Bitset& a, const Bitset& b) const {
    return kernels::active().and3_any(data(), a.data(), b.data(), word_count());
  }
  bool subset_of(const Bitset& o) const { return kernels::active().is_subset(data(), o.data(), word_count()); }

  Bitset& operator&=(const Bitset& o) {
    kernels::active().and_inplace(data(), o.data(), word_count());
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    kernels::active().or_inplace(data(), o.data(), word_count());
    return *this;
  }
  Bitset& subtract(const Bitset& o) {
    kernels::active().andnot_inplace(data(), o.data(), word_count());
    return *this;
  }

  size_t first() const {
    for (size_t w = 0; w < words_.size(); ++w) {
      if (words_[w]) return w * 64 + static_cast<size_t>(__builtin_ctzll(words_[w]));
    }
    return npos;
  }

  template <class F>
  void for_each(F&& f) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + static_cast<size_t>(__builtin_ctzll(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<size_t> indices() const {
    std::vector<size_t> out;
    for_each([&](size_t i) { out.push_back(i); });
    return out;
  }

  bool operator==(const Bitset& o) const = default;

 private:
  void trim() {
    if (bits_ % 64 && !words_.empty()) words_.back() &= (uint64_t{1} << (bits_ % 64)) - 1;
  }

  size_t bits_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace fracpack
