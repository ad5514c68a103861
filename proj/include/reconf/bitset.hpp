#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace reconf {

/// Fixed-universe dynamic bitset. Two bitsets over the same universe compare
/// equal iff they hold the same members, so it doubles as a canonical set key.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int universe) : universe_(universe), words_((universe + 63) / 64, 0) {}
  Bitset(int universe, std::initializer_list<int> members) : Bitset(universe) {
    for (int m : members) set(m);
  }
  template <class Range>
  static Bitset of(int universe, const Range& members) {
    Bitset b(universe);
    for (int m : members) b.set(m);
    return b;
  }
  static Bitset full(int universe) {
    Bitset b(universe);
    for (int i = 0; i < universe; ++i) b.set(i);
    return b;
  }

  int universe() const { return universe_; }

  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  /// Removes every member of o.
  Bitset& subtract(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

  bool is_subset_of(const Bitset& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const Bitset& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto bits = words_[w];
      while (bits) {
        int b = std::countr_zero(bits);
        out.push_back(static_cast<int>(w * 64) + b);
        bits &= bits - 1;
      }
    }
    return out;
  }

  /// Smallest member, or -1.
  int first() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return static_cast<int>(w * 64) + std::countr_zero(words_[w]);
    return -1;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const Bitset& a, const Bitset& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  /// Lexicographic order on the sorted member lists.
  friend bool lex_less(const Bitset& a, const Bitset& b) { return a.members() < b.members(); }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::size_t>(universe_);
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
    return h;
  }

 private:
  int universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

using VertexSet = Bitset;
using LetterSet = Bitset;

}  // namespace reconf
