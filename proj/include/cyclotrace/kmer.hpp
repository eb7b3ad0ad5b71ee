#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "cyclotrace/channel.hpp"

namespace cyclotrace {

// coeffs[i] = number of circular subsequence occurrences of `pattern` whose
// span (last - first + 1, in circular order) is at most i + k.
struct KmerProfile {
  BitSeq pattern;
  std::vector<std::uint64_t> coeffs;
};

// Throws kPatternTooLong when k > n, kInvalidArgument when D > n - k.
KmerProfile kmer_profile_exact(const CircularString& x, const BitSeq& pattern, std::size_t D);

// (1/n) p^k sum_{i=0}^{n-k} c_i q^i.
double start_prob_exact(const CircularString& x, const BitSeq& pattern,
                        const ChannelParams& params);
// Mass of traces starting with `pattern` under exact_trace_distribution.
// Throws kInstanceTooLarge for n > 20.
double start_prob_by_enumeration(const CircularString& x, const BitSeq& pattern,
                                 const ChannelParams& params);

// Deletes each bit with probability (q_target - q) / (1 - q).
// Throws kBadTarget unless q <= q_target < 1.
Trace boost_deletion(const Trace& trace, double q, double q_target, RngStream& rng);

// Fraction of traces whose first k bits equal `pattern`. Throws kEmptyTraceStream.
double estimate_start_prob(std::span<const Trace> traces, const BitSeq& pattern);

struct KmerConfig {
  std::size_t k = 0;             // 0: smallest k with 2^{k-1} >= 2n
  double alpha = 0.0;            // 0: 4 / (1 - r)
  double r = 0.0;                // 0: (q + 1) / 2
  std::size_t grid_size = 0;     // 0: D + 1
  std::size_t traces_per_point = 0;  // 0: batch size / grid_size
  double condition_cap = 1e13;
  std::uint64_t boost_seed = kDefaultSeed;
  unsigned threads = 1;
};

std::size_t default_k(std::size_t n);

// Config defaults resolved against (n, q, batch size).
struct ResolvedKmerConfig {
  std::size_t k;
  double alpha;
  double r;
  std::size_t degree;  // D = min(ceil(alpha k), n - k)
  std::size_t grid_size;
  std::size_t traces_per_point;
  double condition_cap;
};
ResolvedKmerConfig resolve(const KmerConfig& config, std::size_t n, double q,
                           std::size_t batch_size);

// Chebyshev nodes of the first kind on [lo, hi], ascending.
std::vector<double> chebyshev_nodes(double lo, double hi, std::size_t count);

// Least-squares fit of sum_{i<=D} c_i t^i to the normalised start
// probabilities y_j = prob_j / ((1/n)(1 - t_j)^k). Throws kIllConditioned
// when the design matrix condition number exceeds the cap.
std::vector<double> fit_profile_polynomial(std::span<const double> nodes,
                                           std::span<const double> start_probs, std::size_t n,
                                           std::size_t k, std::size_t D, double condition_cap);

// Prefix counts of boosted traces at every grid node; shared by all patterns.
class BoostedPrefixTable {
 public:
  BoostedPrefixTable(std::span<const Trace> traces, const ChannelParams& params,
                     const ResolvedKmerConfig& config, std::uint64_t boost_seed);

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  std::size_t traces_per_point() const noexcept { return per_point_; }
  // Estimated start probability of `pattern` at node j.
  double start_prob(std::size_t node, const BitSeq& pattern) const;
  // Every length-k prefix observed at any node.
  std::vector<BitSeq> observed_prefixes() const;

 private:
  std::vector<double> nodes_;
  std::size_t per_point_;
  std::vector<std::unordered_map<BitSeq, std::uint64_t>> prefix_counts_;
};

// c_0 rounded to the nearest integer and clamped to [0, n].
std::int64_t recover_c0(const BoostedPrefixTable& table, const BitSeq& pattern, std::size_t n,
                        const ResolvedKmerConfig& config);
std::int64_t recover_c0(std::span<const Trace> traces, const BitSeq& pattern, std::size_t n,
                        const ChannelParams& params, const KmerConfig& config);

// Pairwise comparator of two candidate profiles: the q' in [q, r] that
// maximises |P(q') - Q(q')| over the Chebyshev grid.
struct ProfileSeparation {
  double q_prime = 0.0;
  double gap = 0.0;
};
ProfileSeparation distinguish_profiles(const KmerProfile& a, const KmerProfile& b, double q,
                                       double r, std::size_t grid_size);

bool regularity_check(const CircularString& x, std::size_t k);

struct KmerCensus {
  std::size_t k = 0;
  std::map<BitSeq, std::int64_t> counts;

  std::int64_t total() const;
};

KmerCensus census_exact(const CircularString& x, std::size_t k);

// Throws kNotRegular.
CircularString glue_census(const KmerCensus& census, std::size_t n);

// Census recovered from traces; patterns never seen as a window (nor as a
// one-bit shift of a seen window) get count 0 without estimation.
KmerCensus recover_census(std::span<const Trace> traces, std::size_t n,
                          const ChannelParams& params, const KmerConfig& config);

// Throws kNotRegular, kInsufficientTraces.
CircularString average_case_reconstruct(std::span<const Trace> traces, std::size_t n,
                                        const ChannelParams& params, const KmerConfig& config);

// Binary de Bruijn cycle of the given order (length 2^order), as produced by
// the standard Lyndon-word construction.
CircularString de_bruijn(std::size_t order);

}  // namespace cyclotrace
