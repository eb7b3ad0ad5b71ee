#include "cyclotrace/bitseq.hpp"

#include <algorithm>
#include <bit>

#include "cyclotrace/error.hpp"

namespace cyclotrace {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

BitSeq::BitSeq(std::size_t size, bool value) : words_(words_for(size), 0), size_(size) {
  if (value) {
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    if (size_ % 64 != 0) words_.back() = word::mask(size_ % 64);
  }
}

BitSeq BitSeq::parse(std::string_view text) {
  BitSeq out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1') {
      fail(ErrorCode::kInvalidArgument,
           "bit string may contain only '0' and '1', got '" + std::string(text) + "'");
    }
    if (c == '1') out.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return out;
}

BitSeq BitSeq::from_word(std::uint64_t w, std::size_t size) {
  BitSeq out(size);
  if (size > 0) out.words_[0] = w & word::mask(static_cast<unsigned>(std::min<std::size_t>(size, 64)));
  return out;
}

void BitSeq::set(std::size_t i, bool value) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

void BitSeq::push_back(bool value) {
  if (size_ % 64 == 0) words_.push_back(0);
  ++size_;
  if (value) words_.back() |= std::uint64_t{1} << ((size_ - 1) & 63);
}

void BitSeq::append(const BitSeq& other) {
  for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
}

std::size_t BitSeq::count() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

BitSeq BitSeq::rotated(std::size_t shift) const {
  if (size_ == 0) return *this;
  shift %= size_;
  if (size_ <= 64) {
    return from_word(word::rotate(words_[0], static_cast<unsigned>(size_),
                                  static_cast<unsigned>(shift)),
                     size_);
  }
  BitSeq out(size_);
  for (std::size_t i = 0; i < size_; ++i) out.set(i, (*this)[(i + shift) % size_]);
  return out;
}

BitSeq BitSeq::slice(std::size_t begin, std::size_t length) const {
  if (begin + length > size_) fail(ErrorCode::kInvalidArgument, "slice out of range");
  BitSeq out(length);
  for (std::size_t i = 0; i < length; ++i) out.set(i, (*this)[begin + i]);
  return out;
}

BitSeq BitSeq::circular_window(std::size_t begin, std::size_t length) const {
  if (size_ == 0) fail(ErrorCode::kInvalidArgument, "window of an empty sequence");
  BitSeq out(length);
  for (std::size_t i = 0; i < length; ++i) out.set(i, (*this)[(begin + i) % size_]);
  return out;
}

std::string BitSeq::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if ((*this)[i]) out[i] = '1';
  return out;
}

std::size_t BitSeq::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

std::strong_ordering operator<=>(const BitSeq& a, const BitSeq& b) noexcept {
  const std::size_t common = std::min(a.size_, b.size_);
  const std::size_t full_words = common / 64;
  for (std::size_t i = 0; i < full_words; ++i) {
    if (a.words_[i] != b.words_[i]) {
      return word::less(a.words_[i], b.words_[i]) ? std::strong_ordering::less
                                                   : std::strong_ordering::greater;
    }
  }
  if (common % 64 != 0) {
    const std::uint64_t m = word::mask(static_cast<unsigned>(common % 64));
    const std::uint64_t wa = a.words_[full_words] & m;
    const std::uint64_t wb = b.words_[full_words] & m;
    if (wa != wb) {
      return word::less(wa, wb) ? std::strong_ordering::less : std::strong_ordering::greater;
    }
  }
  return a.size_ <=> b.size_;
}

namespace word {

std::uint64_t canonical(std::uint64_t w, unsigned len) noexcept {
  std::uint64_t best = w;
  for (unsigned s = 1; s < len; ++s) {
    const std::uint64_t r = rotate(w, len, s);
    if (less(r, best)) best = r;
  }
  return best;
}

}  // namespace word

}  // namespace cyclotrace
