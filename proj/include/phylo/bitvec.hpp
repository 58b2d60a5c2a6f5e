#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phylo {

using Coord = std::uint32_t;

// Fixed-width bit vector packed into 64-bit words. Coordinate i lives in word
// i/64 at bit i%64, so walking words front to back enumerates coordinates in
// ascending order. Lexicographic order reads coordinate 0 first, '0' < '1'.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static BitVec from_string(std::string_view bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1')
        v.set(i, true);
      else if (bits[i] != '0')
        throw std::invalid_argument("BitVec: expected '0' or '1'");
    }
    return v;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::size_t word_count() const { return words_.size(); }
  std::uint64_t word(std::size_t k) const { return words_[k]; }
  std::uint64_t& word_ref(std::size_t k) { return words_[k]; }

  bool get(std::size_t i) const {
    assert(i < size_);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool v) {
    assert(i < size_);
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) {
    assert(i < size_);
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }
  BitVec with_flipped(std::size_t i) const {
    BitVec r = *this;
    r.flip(i);
    return r;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  BitVec& operator&=(const BitVec& o) {
    assert(size_ == o.size_);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  BitVec& operator|=(const BitVec& o) {
    assert(size_ == o.size_);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  BitVec& operator^=(const BitVec& o) {
    assert(size_ == o.size_);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  // a & ~b, width-safe.
  BitVec and_not(const BitVec& o) const {
    assert(size_ == o.size_);
    BitVec r(size_);
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = words_[k] & ~o.words_[k];
    return r;
  }
  void invert() {
    for (auto& w : words_) w = ~w;
    trim();
  }
  BitVec inverted() const {
    BitVec r = *this;
    r.invert();
    return r;
  }

  // this |= (a ^ b); the accumulate step of a per-side constancy fold.
  void or_xor_of(const BitVec& a, const BitVec& b) {
    assert(size_ == a.size_ && size_ == b.size_);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= a.words_[k] ^ b.words_[k];
  }

  bool operator==(const BitVec& o) const { return size_ == o.size_ && words_ == o.words_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  // Coordinate-0-first order: the vector with 0 at the lowest differing
  // coordinate is smaller.
  static bool lex_less(const BitVec& a, const BitVec& b) {
    assert(a.size_ == b.size_);
    for (std::size_t k = 0; k < a.words_.size(); ++k) {
      const std::uint64_t x = a.words_[k] ^ b.words_[k];
      if (x) {
        const int j = std::countr_zero(x);
        return ((a.words_[k] >> j) & 1u) == 0;
      }
    }
    return false;
  }

  template <typename F>
  void for_each_set(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        const int j = std::countr_zero(w);
        f(static_cast<std::size_t>(k * 64 + j));
        w &= w - 1;
      }
    }
  }
  // Index of the lowest set bit, or -1 if none.
  std::ptrdiff_t first_set() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return static_cast<std::ptrdiff_t>(k * 64 + std::countr_zero(words_[k]));
    return -1;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for_each_set([&](std::size_t i) { s[i] = '1'; });
    return s;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (std::uint64_t)size_;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ULL;
      h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
  }

 private:
  void trim() {
    if (size_ & 63) words_.back() &= (~std::uint64_t{0}) >> (64 - (size_ & 63));
    if (size_ == 0 && !words_.empty()) words_.back() = 0;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitVecHash {
  std::size_t operator()(const BitVec& v) const { return v.hash(); }
};

}  // namespace phylo
