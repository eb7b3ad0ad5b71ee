#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cyclotrace {

// Packed binary sequence with explicit length. Bit i lives in word i / 64 at
// position i % 64; bits past size() are always zero. Ordering is
// lexicographic on the bit string ('0' < '1', a proper prefix sorts first).
class BitSeq {
 public:
  BitSeq() = default;
  explicit BitSeq(std::size_t size, bool value = false);

  // Throws Error(kInvalidArgument) on characters other than '0' / '1'.
  static BitSeq parse(std::string_view text);
  // Low `size` bits of `word`, bit i of the sequence = bit i of the word.
  static BitSeq from_word(std::uint64_t word, std::size_t size);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool value) noexcept;
  void push_back(bool value);
  void append(const BitSeq& other);

  std::size_t count() const noexcept;

  // result[i] = (*this)[(i + shift) mod size()].
  BitSeq rotated(std::size_t shift) const;
  // Linear sub-range [begin, begin + length).
  BitSeq slice(std::size_t begin, std::size_t length) const;
  // Circular window of `length` bits starting at `begin`; may wrap repeatedly.
  BitSeq circular_window(std::size_t begin, std::size_t length) const;

  // Requires size() <= 64.
  std::uint64_t to_word() const noexcept { return words_.empty() ? 0 : words_[0]; }

  std::string to_string() const;

  std::size_t hash() const noexcept;

  friend bool operator==(const BitSeq& a, const BitSeq& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }
  friend std::strong_ordering operator<=>(const BitSeq& a, const BitSeq& b) noexcept;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

// Word-level helpers for sequences of at most 64 bits (same bit layout as
// BitSeq::from_word). Used by the exhaustive enumerators.
namespace word {

inline std::uint64_t mask(unsigned len) noexcept {
  return len >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
}

// result bit i = w bit (i + shift) mod len.
inline std::uint64_t rotate(std::uint64_t w, unsigned len, unsigned shift) noexcept {
  if (len == 0) return 0;
  shift %= len;
  if (shift == 0) return w;
  return ((w >> shift) | (w << (len - shift))) & mask(len);
}

// True when sequence a sorts strictly before b (equal lengths).
inline bool less(std::uint64_t a, std::uint64_t b) noexcept {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  const std::uint64_t low = diff & (~diff + 1);
  return (a & low) == 0;
}

// Lexicographically smallest rotation.
std::uint64_t canonical(std::uint64_t w, unsigned len) noexcept;

}  // namespace word

}  // namespace cyclotrace

template <>
struct std::hash<cyclotrace::BitSeq> {
  std::size_t operator()(const cyclotrace::BitSeq& b) const noexcept { return b.hash(); }
};
