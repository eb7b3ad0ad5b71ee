#include "cyclotrace/channel.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "cyclotrace/error.hpp"
#include "parallel.hpp"

namespace cyclotrace {

namespace {

// Booth's least-rotation algorithm; returns the starting index.
std::size_t least_rotation(const BitSeq& s) {
  const std::size_t n = s.size();
  std::vector<std::ptrdiff_t> failure(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const bool sj = s[j % n];
    std::ptrdiff_t i = failure[j - k - 1];
    while (i != -1 && sj != s[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (!sj && s[(k + static_cast<std::size_t>(i) + 1) % n]) k = j - static_cast<std::size_t>(i) - 1;
      i = failure[static_cast<std::size_t>(i)];
    }
    if (sj != s[(k + static_cast<std::size_t>(i + 1)) % n]) {
      // here i == -1
      if (!sj && s[k % n]) k = j;
      failure[j - k] = -1;
    } else {
      failure[j - k] = i + 1;
    }
  }
  return k % n;
}

BitSeq canonical_bits(const BitSeq& bits) {
  if (bits.empty()) return bits;
  if (bits.size() <= 64) {
    return BitSeq::from_word(word::canonical(bits.to_word(), static_cast<unsigned>(bits.size())),
                             bits.size());
  }
  return bits.rotated(least_rotation(bits));
}

// Sentinel key: bit `len` marks the length, low bits hold the sequence.
BitSeq key_to_bits(std::uint64_t key) {
  const auto len = static_cast<std::size_t>(std::bit_width(key) - 1);
  return BitSeq::from_word(key ^ (std::uint64_t{1} << len), len);
}

// Accumulates, for the string `w` of length n read from position 0, the
// probability of every retained subset into acc[key]. `keys` is scratch of
// size 2^n.
void accumulate_subsets(std::uint64_t w, unsigned n, std::span<const double> weight_by_kept,
                        std::vector<std::uint32_t>& keys, std::vector<double>& acc) {
  const std::uint32_t subsets = std::uint32_t{1} << n;
  keys[0] = 1;
  acc[1] += weight_by_kept[0];
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    const unsigned high = static_cast<unsigned>(std::bit_width(mask) - 1);
    const std::uint32_t prev = keys[mask ^ (std::uint32_t{1} << high)];
    const unsigned len = static_cast<unsigned>(std::bit_width(prev) - 1);
    const std::uint32_t bits = prev ^ (std::uint32_t{1} << len);
    const std::uint32_t bit = static_cast<std::uint32_t>((w >> high) & 1u);
    const std::uint32_t key = bits | (bit << len) | (std::uint32_t{1} << (len + 1));
    keys[mask] = key;
    acc[key] += weight_by_kept[static_cast<std::size_t>(std::popcount(mask))];
  }
}

ExactTraceDistribution from_accumulator(const std::vector<double>& acc) {
  ExactTraceDistribution out;
  for (std::size_t key = 1; key < acc.size(); ++key) {
    if (acc[key] > 0.0) out.add(key_to_bits(key), acc[key]);
  }
  return out;
}

std::vector<double> weights_by_kept(unsigned n, const ChannelParams& params, double scale) {
  std::vector<double> w(n + 1);
  for (unsigned kept = 0; kept <= n; ++kept) {
    w[kept] = scale * std::pow(params.p(), kept) * std::pow(params.q(), n - kept);
  }
  return w;
}

}  // namespace

CircularString::CircularString(BitSeq bits) : bits_(std::move(bits)) {
  require(!bits_.empty(), ErrorCode::kInvalidArgument, "circular string must be nonempty");
}

CircularString CircularString::parse(std::string_view text) {
  return CircularString(BitSeq::parse(text));
}

CircularString canonical(const CircularString& x) { return CircularString(canonical_bits(x.bits())); }

bool cyclically_equal(const CircularString& a, const CircularString& b) {
  return a.size() == b.size() && canonical(a) == canonical(b);
}

std::vector<CircularString> all_canonical_strings(std::size_t n) {
  require(n >= 1 && n <= 24, ErrorCode::kInstanceTooLarge,
          "canonical enumeration supports 1 <= n <= 24");
  std::vector<CircularString> out;
  const auto len = static_cast<unsigned>(n);
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
    if (word::canonical(w, len) == w) out.emplace_back(BitSeq::from_word(w, n));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ChannelParams::ChannelParams(double q) : q_(q), p_(1.0 - q) {
  require(q > 0.0 && q < 1.0, ErrorCode::kInvalidArgument,
          "deletion probability q must lie in (0, 1), got " + format_double(q));
}

Trace generate_trace(const CircularString& x, const ChannelParams& params, RngStream& rng) {
  const std::size_t n = x.size();
  const std::size_t offset = rng.below(n);
  Trace out;
  for (std::size_t o = 0; o < n; ++o) {
    const bool bit = x.bits()[(offset + o) % n];
    if (!rng.bernoulli(params.q())) out.push_back(bit);
  }
  return out;
}

Trace generate_linear_trace(const BitSeq& x, const ChannelParams& params, RngStream& rng) {
  Trace out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!rng.bernoulli(params.q())) out.push_back(x[i]);
  }
  return out;
}

namespace {

template <class Draw>
std::vector<Trace> generate_batch(std::uint64_t seed, std::size_t count, unsigned threads,
                                  Draw draw) {
  std::vector<Trace> out(count);
  const RngStream root(seed);
  detail::parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng = root.substream(i);
      out[i] = draw(rng);
    }
  });
  return out;
}

}  // namespace

std::vector<Trace> generate_traces(const CircularString& x, const ChannelParams& params,
                                   std::uint64_t seed, std::size_t count, unsigned threads) {
  return generate_batch(seed, count, threads,
                        [&](RngStream& rng) { return generate_trace(x, params, rng); });
}

std::vector<Trace> generate_linear_traces(const BitSeq& x, const ChannelParams& params,
                                          std::uint64_t seed, std::size_t count,
                                          unsigned threads) {
  return generate_batch(seed, count, threads,
                        [&](RngStream& rng) { return generate_linear_trace(x, params, rng); });
}

Trace read_rotate_then_delete(const CircularString& x, std::size_t offset,
                              const std::vector<bool>& retained) {
  const std::size_t n = x.size();
  const CircularString rotated = x.rotated(offset);
  Trace out;
  for (std::size_t o = 0; o < n; ++o) {
    if (retained[(offset + o) % n]) out.push_back(rotated[o]);
  }
  return out;
}

Trace read_from_first_retained(const CircularString& x, std::size_t offset,
                               const std::vector<bool>& retained) {
  const std::size_t n = x.size();
  std::size_t start = n;
  for (std::size_t o = 0; o < n; ++o) {
    if (retained[(offset + o) % n]) {
      start = (offset + o) % n;
      break;
    }
  }
  Trace out;
  if (start == n) return out;
  for (std::size_t o = 0; o < n; ++o) {
    const std::size_t i = (start + o) % n;
    if (retained[i]) out.push_back(x[i]);
  }
  return out;
}

double ExactTraceDistribution::probability(const BitSeq& trace) const {
  const auto it = entries_.find(trace);
  return it == entries_.end() ? 0.0 : it->second;
}

double ExactTraceDistribution::total_mass() const {
  // Sorted summation keeps the result independent of hash order.
  double total = 0.0;
  for (const auto& [trace, prob] : sorted()) total += prob;
  return total;
}

std::vector<std::pair<BitSeq, double>> ExactTraceDistribution::sorted() const {
  std::vector<std::pair<BitSeq, double>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  return out;
}

ExactTraceDistribution exact_trace_distribution(const CircularString& x,
                                                const ChannelParams& params) {
  const std::size_t n = x.size();
  require(n <= kMaxExactLength, ErrorCode::kInstanceTooLarge,
          "exact trace distribution supports n <= 20, got n = " + std::to_string(n));
  const auto len = static_cast<unsigned>(n);
  const auto weights = weights_by_kept(len, params, 1.0 / static_cast<double>(n));
  std::vector<std::uint32_t> keys(std::size_t{1} << n);
  std::vector<double> acc(std::size_t{2} << n, 0.0);
  const std::uint64_t w = x.bits().to_word();
  for (unsigned r = 0; r < len; ++r) {
    accumulate_subsets(word::rotate(w, len, r), len, weights, keys, acc);
  }
  return from_accumulator(acc);
}

ExactTraceDistribution exact_linear_trace_distribution(const BitSeq& x,
                                                       const ChannelParams& params) {
  const std::size_t n = x.size();
  require(n <= kMaxExactLength, ErrorCode::kInstanceTooLarge,
          "exact trace distribution supports n <= 20, got n = " + std::to_string(n));
  const auto len = static_cast<unsigned>(n);
  const auto weights = weights_by_kept(len, params, 1.0);
  std::vector<std::uint32_t> keys(std::size_t{1} << n);
  std::vector<double> acc(std::size_t{2} << n, 0.0);
  accumulate_subsets(x.to_word(), len, weights, keys, acc);
  return from_accumulator(acc);
}

ExactTraceDistribution collapse_to_rotation_classes(const ExactTraceDistribution& d) {
  ExactTraceDistribution out;
  for (const auto& [trace, prob] : d.sorted()) out.add(canonical_bits(trace), prob);
  return out;
}

ExactTraceDistribution empirical_distribution(std::span<const Trace> traces) {
  require(!traces.empty(), ErrorCode::kEmptyTraceStream, "empty trace batch");
  std::unordered_map<BitSeq, std::uint64_t> counts;
  for (const auto& t : traces) ++counts[t];
  ExactTraceDistribution out;
  const double total = static_cast<double>(traces.size());
  for (const auto& [trace, count] : counts) out.add(trace, static_cast<double>(count) / total);
  return out;
}

PaddedString pad_linear(const BitSeq& x_linear, std::size_t m, RngStream& rng) {
  require(!x_linear.empty(), ErrorCode::kBadLength, "linear string must be nonempty");
  require(m >= 2 * x_linear.size(), ErrorCode::kBadLength,
          "padded length m must be at least 2n (n = " + std::to_string(x_linear.size()) +
              ", m = " + std::to_string(m) + ")");
  BitSeq pad(m - x_linear.size());
  for (std::size_t i = 0; i < pad.size(); ++i) pad.set(i, (rng() >> 63) != 0);
  return pad_linear(x_linear, pad);
}

PaddedString pad_linear(const BitSeq& x_linear, const BitSeq& pad) {
  require(!x_linear.empty(), ErrorCode::kBadLength, "linear string must be nonempty");
  require(pad.size() >= x_linear.size(), ErrorCode::kBadLength,
          "pad must be at least as long as the linear string");
  BitSeq joined = x_linear;
  joined.append(pad);
  return PaddedString{CircularString(std::move(joined)), pad};
}

BitSeq unpad(const CircularString& xc, const BitSeq& pad) {
  require(!pad.empty(), ErrorCode::kInvalidArgument, "pad must be nonempty");
  const std::size_t n = xc.size();
  require(pad.size() < n, ErrorCode::kBadLength, "pad must be shorter than the padded string");
  std::size_t occurrences = 0;
  std::size_t where = 0;
  for (std::size_t s = 0; s < n; ++s) {
    bool match = true;
    for (std::size_t j = 0; j < pad.size() && match; ++j) match = xc[s + j] == pad[j];
    if (match) {
      ++occurrences;
      where = s;
    }
  }
  if (occurrences != 1) {
    fail(ErrorCode::kPadNotUnique, "pad " + pad.to_string() + " occurs " +
                                       std::to_string(occurrences) + " times in " +
                                       xc.to_string());
  }
  return xc.bits().circular_window(where + pad.size(), n - pad.size());
}

Trace lift_linear_trace(const Trace& linear_trace, const BitSeq& pad,
                        const ChannelParams& params, RngStream& rng) {
  Trace joined = linear_trace;
  for (std::size_t j = 0; j < pad.size(); ++j)
    if (!rng.bernoulli(params.q())) joined.push_back(pad[j]);
  if (joined.empty()) return joined;
  return joined.rotated(rng.below(joined.size()));
}

void write_traces_jsonl(std::ostream& out, std::span<const Trace> traces) {
  for (std::size_t i = 0; i < traces.size(); ++i) {
    nlohmann::ordered_json record;
    record["bits"] = traces[i].to_string();
    record["idx"] = i;
    out << record.dump() << '\n';
  }
}

std::vector<Trace> read_traces_jsonl(std::istream& in) {
  std::vector<Trace> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      out.push_back(BitSeq::parse(record.at("bits").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kIo, "trace file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_distribution_csv(std::ostream& out, const ExactTraceDistribution& d) {
  out << "trace,probability\n";
  for (const auto& [trace, prob] : d.sorted()) {
    out << trace.to_string() << ',' << format_double(prob) << '\n';
  }
}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

}  // namespace cyclotrace
