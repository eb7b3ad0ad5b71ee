#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cyclotrace/bitseq.hpp"
#include "cyclotrace/rng.hpp"

namespace cyclotrace {

// Exhaustive trace-law enumeration costs n * 2^n.
inline constexpr std::size_t kMaxExactLength = 20;

// A binary string with no distinguished start. Equality via == is linear
// equality; use cyclically_equal or canonical for rotation classes.
class CircularString {
 public:
  // Throws Error(kInvalidArgument) if bits is empty.
  explicit CircularString(BitSeq bits);
  static CircularString parse(std::string_view text);

  const BitSeq& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i % bits_.size()]; }
  std::size_t weight() const noexcept { return bits_.count(); }

  // x^{(j)}: result[i] = x[(i + j) mod n].
  CircularString rotated(std::size_t j) const { return CircularString(bits_.rotated(j)); }

  std::string to_string() const { return bits_.to_string(); }

  friend bool operator==(const CircularString&, const CircularString&) = default;
  friend auto operator<=>(const CircularString& a, const CircularString& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  BitSeq bits_;
};

CircularString canonical(const CircularString& x);
bool cyclically_equal(const CircularString& a, const CircularString& b);

// Every canonical circular string of length n, ascending. n <= 24.
std::vector<CircularString> all_canonical_strings(std::size_t n);

class ChannelParams {
 public:
  // Throws Error(kInvalidArgument) unless 0 < q < 1.
  explicit ChannelParams(double q);

  double q() const noexcept { return q_; }
  double p() const noexcept { return p_; }

 private:
  double q_;
  double p_;
};

using Trace = BitSeq;

// Rotate x by a uniform offset, then delete each bit independently with
// probability q.
Trace generate_trace(const CircularString& x, const ChannelParams& params, RngStream& rng);

// The rotation-free deletion channel on a linear string.
Trace generate_linear_trace(const BitSeq& x, const ChannelParams& params, RngStream& rng);

// Trace idx is drawn from RngStream(seed).substream(idx), so the batch does
// not depend on `threads`.
std::vector<Trace> generate_traces(const CircularString& x, const ChannelParams& params,
                                   std::uint64_t seed, std::size_t count, unsigned threads = 1);
std::vector<Trace> generate_linear_traces(const BitSeq& x, const ChannelParams& params,
                                          std::uint64_t seed, std::size_t count,
                                          unsigned threads = 1);

// Deterministic reading rules behind generate_trace. `retained` has bit i set
// when original position i survives. Both return the same trace for every
// (offset, retained) pair.
Trace read_rotate_then_delete(const CircularString& x, std::size_t offset,
                              const std::vector<bool>& retained);
Trace read_from_first_retained(const CircularString& x, std::size_t offset,
                               const std::vector<bool>& retained);

// Map from trace value to probability.
class ExactTraceDistribution {
 public:
  using Map = std::unordered_map<BitSeq, double>;

  void add(const BitSeq& trace, double probability) { entries_[trace] += probability; }
  double probability(const BitSeq& trace) const;
  std::size_t size() const noexcept { return entries_.size(); }
  double total_mass() const;
  const Map& entries() const noexcept { return entries_; }
  // Sorted by length, then lexicographically.
  std::vector<std::pair<BitSeq, double>> sorted() const;

 private:
  Map entries_;
};

// Exact law of generate_trace(x, params). Throws kInstanceTooLarge for n > 20.
ExactTraceDistribution exact_trace_distribution(const CircularString& x,
                                                const ChannelParams& params);
// Exact law of generate_linear_trace(x, params). Same size cap.
ExactTraceDistribution exact_linear_trace_distribution(const BitSeq& x,
                                                       const ChannelParams& params);
// Collapses traces to their rotation class (keys are canonical forms; the
// empty trace stays empty).
ExactTraceDistribution collapse_to_rotation_classes(const ExactTraceDistribution& d);
ExactTraceDistribution empirical_distribution(std::span<const Trace> traces);

struct PaddedString {
  CircularString circular;
  BitSeq pad;
};

// x_linear followed by a uniformly random pad of length m - n.
// Throws kBadLength when m < 2n or x_linear is empty.
PaddedString pad_linear(const BitSeq& x_linear, std::size_t m, RngStream& rng);
PaddedString pad_linear(const BitSeq& x_linear, const BitSeq& pad);

// The arc complementary to the unique circular occurrence of pad.
// Throws kPadNotUnique for zero or multiple occurrences.
BitSeq unpad(const CircularString& xc, const BitSeq& pad);

// Turns a rotation-free trace of a linear string into a trace of the circular
// string x . pad: a trace of the pad is appended and the result is rotated by
// a uniform number of places. This is not exactly the law of generate_trace
// (the start is uniform over retained bits rather than over positions).
Trace lift_linear_trace(const Trace& linear_trace, const BitSeq& pad,
                        const ChannelParams& params, RngStream& rng);

// JSONL: {"bits":"0101","idx":3} per line.
void write_traces_jsonl(std::ostream& out, std::span<const Trace> traces);
std::vector<Trace> read_traces_jsonl(std::istream& in);
// CSV with header trace,probability.
void write_distribution_csv(std::ostream& out, const ExactTraceDistribution& d);

// Shortest round-trip decimal representation; locale independent.
std::string format_double(double value);

}  // namespace cyclotrace
