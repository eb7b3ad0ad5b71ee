#include "cyclotrace/kmer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include <Eigen/Dense>

#include "cyclotrace/error.hpp"
#include "parallel.hpp"

namespace cyclotrace {

namespace {

// counts[s] = occurrences of `pattern` as a circular subsequence whose span is
// exactly s (1 <= s <= n).
std::vector<std::uint64_t> span_histogram(const CircularString& x, const BitSeq& pattern) {
  const std::size_t n = x.size();
  const std::size_t k = pattern.size();
  std::vector<std::uint64_t> by_span(n + 1, 0);
  std::vector<std::uint64_t> ways(n);
  std::vector<std::uint64_t> next(n);
  for (std::size_t start = 0; start < n; ++start) {
    if (x[start] != pattern[0]) continue;
    std::fill(ways.begin(), ways.end(), 0);
    ways[0] = 1;
    for (std::size_t j = 1; j < k; ++j) {
      std::fill(next.begin(), next.end(), 0);
      std::uint64_t running = 0;
      for (std::size_t o = 1; o < n; ++o) {
        running += ways[o - 1];
        if (x[start + o] == pattern[j]) next[o] = running;
      }
      ways.swap(next);
    }
    for (std::size_t o = 0; o < n; ++o) by_span[o + 1] += ways[o];
  }
  return by_span;
}

}  // namespace

KmerProfile kmer_profile_exact(const CircularString& x, const BitSeq& pattern, std::size_t D) {
  const std::size_t n = x.size();
  const std::size_t k = pattern.size();
  require(k >= 1, ErrorCode::kInvalidArgument, "pattern must be nonempty");
  require(k <= n, ErrorCode::kPatternTooLong, "pattern longer than the string");
  require(D <= n - k, ErrorCode::kInvalidArgument, "profile degree D must be at most n - k");
  const auto by_span = span_histogram(x, pattern);
  KmerProfile out{pattern, std::vector<std::uint64_t>(D + 1, 0)};
  std::uint64_t cumulative = 0;
  for (std::size_t s = 1; s <= k; ++s) cumulative += by_span[s];
  for (std::size_t i = 0; i <= D; ++i) {
    if (i > 0) cumulative += by_span[i + k];
    out.coeffs[i] = cumulative;
  }
  return out;
}

double start_prob_exact(const CircularString& x, const BitSeq& pattern,
                        const ChannelParams& params) {
  const std::size_t n = x.size();
  if (pattern.size() > n) return 0.0;
  const auto profile = kmer_profile_exact(x, pattern, n - pattern.size());
  double sum = 0.0;
  double power = 1.0;
  for (auto c : profile.coeffs) {
    sum += static_cast<double>(c) * power;
    power *= params.q();
  }
  return std::pow(params.p(), static_cast<double>(pattern.size())) * sum /
         static_cast<double>(n);
}

double start_prob_by_enumeration(const CircularString& x, const BitSeq& pattern,
                                 const ChannelParams& params) {
  const auto law = exact_trace_distribution(x, params);
  double mass = 0.0;
  for (const auto& [trace, prob] : law.sorted()) {
    if (trace.size() >= pattern.size() && trace.slice(0, pattern.size()) == pattern) mass += prob;
  }
  return mass;
}

Trace boost_deletion(const Trace& trace, double q, double q_target, RngStream& rng) {
  require(q >= 0.0 && q < 1.0, ErrorCode::kBadTarget, "source deletion probability must lie in [0, 1)");
  require(q_target >= q && q_target < 1.0, ErrorCode::kBadTarget,
          "boost target must satisfy q <= q' < 1");
  const double extra = (q_target - q) / (1.0 - q);
  if (extra == 0.0) return trace;
  Trace out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!rng.bernoulli(extra)) out.push_back(trace[i]);
  }
  return out;
}

double estimate_start_prob(std::span<const Trace> traces, const BitSeq& pattern) {
  require(!traces.empty(), ErrorCode::kEmptyTraceStream, "empty trace batch");
  std::size_t hits = 0;
  for (const auto& t : traces) {
    if (t.size() >= pattern.size() && t.slice(0, pattern.size()) == pattern) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(traces.size());
}

std::size_t default_k(std::size_t n) {
  std::size_t k = 1;
  while ((std::size_t{1} << (k - 1)) < 2 * n) ++k;
  return k;
}

ResolvedKmerConfig resolve(const KmerConfig& config, std::size_t n, double q,
                           std::size_t batch_size) {
  ResolvedKmerConfig out{};
  out.k = config.k > 0 ? config.k : default_k(n);
  require(out.k <= n, ErrorCode::kPatternTooLong, "k exceeds the string length");
  out.r = config.r > 0.0 ? config.r : (q + 1.0) / 2.0;
  require(out.r >= q && out.r < 1.0, ErrorCode::kBadTarget, "boost ceiling r must satisfy q <= r < 1");
  out.alpha = config.alpha > 0.0 ? config.alpha : 4.0 / (1.0 - out.r);
  const auto scaled = static_cast<std::size_t>(std::ceil(out.alpha * static_cast<double>(out.k) - 1e-9));
  out.degree = std::min(scaled, n - out.k);
  out.grid_size = config.grid_size > 0 ? config.grid_size : out.degree + 1;
  require(out.grid_size >= out.degree + 1, ErrorCode::kInvalidArgument,
          "grid size must be at least D + 1");
  out.traces_per_point =
      config.traces_per_point > 0 ? config.traces_per_point : batch_size / out.grid_size;
  require(out.traces_per_point >= 1 && out.traces_per_point * out.grid_size <= batch_size,
          ErrorCode::kInsufficientTraces, "trace budget smaller than grid_size * traces_per_point");
  out.condition_cap = config.condition_cap;
  return out;
}

std::vector<double> chebyshev_nodes(double lo, double hi, std::size_t count) {
  require(count >= 1, ErrorCode::kInvalidArgument, "need at least one node");
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double angle =
        std::numbers::pi * (2.0 * static_cast<double>(j) + 1.0) / (2.0 * static_cast<double>(count));
    out[count - 1 - j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(angle);
  }
  return out;
}

std::vector<double> fit_profile_polynomial(std::span<const double> nodes,
                                           std::span<const double> start_probs, std::size_t n,
                                           std::size_t k, std::size_t D, double condition_cap) {
  require(nodes.size() == start_probs.size(), ErrorCode::kInvalidArgument,
          "node and probability counts differ");
  require(nodes.size() >= D + 1, ErrorCode::kInvalidArgument, "need at least D + 1 nodes");
  const auto rows = static_cast<Eigen::Index>(nodes.size());
  const auto cols = static_cast<Eigen::Index>(D + 1);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index j = 0; j < rows; ++j) {
    const double t = nodes[static_cast<std::size_t>(j)];
    const double scale = std::pow(1.0 - t, static_cast<double>(k)) / static_cast<double>(n);
    rhs(j) = start_probs[static_cast<std::size_t>(j)] / scale;
    double power = 1.0;
    for (Eigen::Index i = 0; i < cols; ++i) {
      design(j, i) = power;
      power *= t;
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double condition =
      sigma(sigma.size() - 1) > 0.0 ? sigma(0) / sigma(sigma.size() - 1) : INFINITY;
  if (!(condition <= condition_cap)) {
    fail(ErrorCode::kIllConditioned,
         "profile system condition number " + format_double(condition) + " exceeds cap " +
             format_double(condition_cap));
  }
  const Eigen::VectorXd solution = svd.solve(rhs);
  return std::vector<double>(solution.data(), solution.data() + solution.size());
}

BoostedPrefixTable::BoostedPrefixTable(std::span<const Trace> traces, const ChannelParams& params,
                                       const ResolvedKmerConfig& config, std::uint64_t boost_seed)
    : nodes_(chebyshev_nodes(params.q(), config.r, config.grid_size)),
      per_point_(config.traces_per_point),
      prefix_counts_(config.grid_size) {
  require(per_point_ >= 1 && per_point_ * nodes_.size() <= traces.size(),
          ErrorCode::kInsufficientTraces, "trace budget smaller than grid_size * traces_per_point");
  const double q = params.q();
  const std::size_t k = config.k;
  for (std::size_t node = 0; node < nodes_.size(); ++node) {
    const double extra = (nodes_[node] - q) / (1.0 - q);
    const RngStream root(boost_seed, node);
    auto& counts = prefix_counts_[node];
    for (std::size_t i = 0; i < per_point_; ++i) {
      const Trace& trace = traces[node * per_point_ + i];
      RngStream rng = root.substream(i);
      // Same draws as boost_deletion, stopped once k bits survive.
      BitSeq prefix;
      for (std::size_t b = 0; b < trace.size() && prefix.size() < k; ++b) {
        if (!rng.bernoulli(extra)) prefix.push_back(trace[b]);
      }
      if (prefix.size() == k) ++counts[prefix];
    }
  }
}

double BoostedPrefixTable::start_prob(std::size_t node, const BitSeq& pattern) const {
  const auto& counts = prefix_counts_.at(node);
  const auto it = counts.find(pattern);
  const double hits = it == counts.end() ? 0.0 : static_cast<double>(it->second);
  return hits / static_cast<double>(per_point_);
}

std::vector<BitSeq> BoostedPrefixTable::observed_prefixes() const {
  std::vector<BitSeq> out;
  for (const auto& counts : prefix_counts_) {
    for (const auto& [prefix, count] : counts) out.push_back(prefix);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t recover_c0(const BoostedPrefixTable& table, const BitSeq& pattern, std::size_t n,
                        const ResolvedKmerConfig& config) {
  std::vector<double> probs;
  probs.reserve(table.nodes().size());
  for (std::size_t j = 0; j < table.nodes().size(); ++j) probs.push_back(table.start_prob(j, pattern));
  const auto coeffs =
      fit_profile_polynomial(table.nodes(), probs, n, pattern.size(), config.degree, config.condition_cap);
  const double rounded = std::round(coeffs[0]);
  return static_cast<std::int64_t>(std::clamp(rounded, 0.0, static_cast<double>(n)));
}

std::int64_t recover_c0(std::span<const Trace> traces, const BitSeq& pattern, std::size_t n,
                        const ChannelParams& params, const KmerConfig& config) {
  KmerConfig pinned = config;
  pinned.k = pattern.size();
  const auto resolved = resolve(pinned, n, params.q(), traces.size());
  const BoostedPrefixTable table(traces, params, resolved, config.boost_seed);
  return recover_c0(table, pattern, n, resolved);
}

ProfileSeparation distinguish_profiles(const KmerProfile& a, const KmerProfile& b, double q,
                                       double r, std::size_t grid_size) {
  require(q <= r, ErrorCode::kBadTarget, "profile range needs q <= r");
  ProfileSeparation best;
  best.gap = -1.0;
  for (double t : chebyshev_nodes(q, r, grid_size)) {
    auto eval = [t](const KmerProfile& prof) {
      double sum = 0.0;
      double power = 1.0;
      for (auto c : prof.coeffs) {
        sum += static_cast<double>(c) * power;
        power *= t;
      }
      return sum;
    };
    const double gap = std::abs(eval(a) - eval(b));
    if (gap > best.gap) best = ProfileSeparation{t, gap};
  }
  return best;
}

namespace {

bool windows_distinct(const CircularString& x, std::size_t len) {
  std::unordered_set<BitSeq> seen;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!seen.insert(x.bits().circular_window(i, len)).second) return false;
  }
  return true;
}

}  // namespace

bool regularity_check(const CircularString& x, std::size_t k) {
  require(k >= 1 && k <= x.size(), ErrorCode::kPatternTooLong, "regularity needs 1 <= k <= n");
  return windows_distinct(x, k) && windows_distinct(x, k - 1);
}

std::int64_t KmerCensus::total() const {
  std::int64_t sum = 0;
  for (const auto& [pattern, count] : counts) sum += count;
  return sum;
}

KmerCensus census_exact(const CircularString& x, std::size_t k) {
  require(k >= 1 && k <= x.size(), ErrorCode::kPatternTooLong, "census needs 1 <= k <= n");
  KmerCensus out;
  out.k = k;
  for (std::size_t i = 0; i < x.size(); ++i) ++out.counts[x.bits().circular_window(i, k)];
  return out;
}

CircularString glue_census(const KmerCensus& census, std::size_t n) {
  const std::size_t k = census.k;
  require(k >= 1, ErrorCode::kInvalidArgument, "census k must be positive");
  std::vector<BitSeq> present;
  for (const auto& [pattern, count] : census.counts) {
    require(pattern.size() == k, ErrorCode::kInvalidArgument, "census pattern of wrong length");
    if (count < 0 || count > 1) {
      fail(ErrorCode::kNotRegular,
           "pattern " + pattern.to_string() + " has count " + std::to_string(count));
    }
    if (count == 1) present.push_back(pattern);
  }
  if (present.size() != n) {
    fail(ErrorCode::kNotRegular, "census has " + std::to_string(present.size()) +
                                     " present patterns, expected " + std::to_string(n));
  }
  std::unordered_map<BitSeq, std::size_t> by_prefix;
  for (std::size_t i = 0; i < present.size(); ++i) {
    if (!by_prefix.emplace(present[i].slice(0, k - 1), i).second) {
      fail(ErrorCode::kNotRegular, "two patterns share the prefix " +
                                       present[i].slice(0, k - 1).to_string());
    }
  }
  std::vector<bool> visited(present.size(), false);
  BitSeq bits;
  std::size_t current = 0;
  for (std::size_t step = 0; step < n; ++step) {
    if (visited[current]) fail(ErrorCode::kNotRegular, "successor walk closes early");
    visited[current] = true;
    bits.push_back(present[current][0]);
    const auto it = by_prefix.find(present[current].slice(1, k - 1));
    if (it == by_prefix.end()) fail(ErrorCode::kNotRegular, "successor walk breaks off");
    current = it->second;
  }
  if (current != 0) fail(ErrorCode::kNotRegular, "successor walk does not close");
  CircularString out(std::move(bits));
  std::map<BitSeq, std::int64_t> expected;
  for (const auto& p : present) expected[p] = 1;
  if (census_exact(out, k).counts != expected) {
    fail(ErrorCode::kNotRegular, "glued string does not reproduce the census");
  }
  return canonical(out);
}

KmerCensus recover_census(std::span<const Trace> traces, std::size_t n,
                          const ChannelParams& params, const KmerConfig& config) {
  const auto resolved = resolve(config, n, params.q(), traces.size());
  const std::size_t k = resolved.k;
  require(k <= 64, ErrorCode::kPatternTooLong, "census recovery supports k <= 64");
  const BoostedPrefixTable table(traces, params, resolved, config.boost_seed);

  std::unordered_set<std::uint64_t> windows;
  const std::uint64_t mask = word::mask(static_cast<unsigned>(k));
  for (const auto& trace : traces) {
    if (trace.size() < k) continue;
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      // Bit j of w holds window position j.
      w = (w >> 1) | (static_cast<std::uint64_t>(trace[i]) << (k - 1));
      if (i + 1 >= k) windows.insert(w & mask);
    }
  }
  std::unordered_set<std::uint64_t> candidates = windows;
  for (std::uint64_t w : windows) {
    candidates.insert(w >> 1);
    candidates.insert((w >> 1) | (std::uint64_t{1} << (k - 1)));
  }
  std::vector<BitSeq> patterns;
  patterns.reserve(candidates.size());
  for (std::uint64_t w : candidates) patterns.push_back(BitSeq::from_word(w, k));
  std::sort(patterns.begin(), patterns.end());

  std::vector<std::int64_t> counts(patterns.size());
  detail::parallel_for(patterns.size(), config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) counts[i] = recover_c0(table, patterns[i], n, resolved);
  });
  KmerCensus out;
  out.k = k;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (counts[i] != 0) out.counts[patterns[i]] = counts[i];
  }
  return out;
}

CircularString average_case_reconstruct(std::span<const Trace> traces, std::size_t n,
                                        const ChannelParams& params, const KmerConfig& config) {
  const KmerCensus census = recover_census(traces, n, params, config);
  for (const auto& [pattern, count] : census.counts) {
    if (count > 1) {
      fail(ErrorCode::kNotRegular,
           "pattern " + pattern.to_string() + " occurs " + std::to_string(count) + " times");
    }
  }
  if (census.total() != static_cast<std::int64_t>(n)) {
    fail(ErrorCode::kInsufficientTraces, "recovered census totals " +
                                             std::to_string(census.total()) + ", expected " +
                                             std::to_string(n));
  }
  return glue_census(census, n);
}

namespace {

void lyndon_walk(std::size_t t, std::size_t period, std::size_t order, std::vector<int>& a,
                 BitSeq& out) {
  if (t > order) {
    if (order % period == 0) {
      for (std::size_t j = 1; j <= period; ++j) out.push_back(a[j] != 0);
    }
    return;
  }
  a[t] = a[t - period];
  lyndon_walk(t + 1, period, order, a, out);
  if (a[t - period] == 0) {
    a[t] = 1;
    lyndon_walk(t + 1, t, order, a, out);
  }
}

}  // namespace

CircularString de_bruijn(std::size_t order) {
  require(order >= 1 && order <= 24, ErrorCode::kInvalidArgument,
          "de Bruijn order must lie in 1..24");
  std::vector<int> a(order + 1, 0);
  BitSeq out;
  lyndon_walk(1, 1, order, a, out);
  return CircularString(std::move(out));
}

}  // namespace cyclotrace
