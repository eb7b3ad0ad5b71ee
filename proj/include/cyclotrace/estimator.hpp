#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cyclotrace/channel.hpp"

namespace cyclotrace {

using Complex = std::complex<double>;

// A point on the unit circle. Points built from a root-of-unity index keep
// the index so powers are computed exactly in Z/n before evaluation.
class UnitPoint {
 public:
  static UnitPoint root(std::int64_t k, std::int64_t n);
  // theta is wrapped into (-pi, pi].
  static UnitPoint from_angle(double theta);

  Complex value() const noexcept { return value_; }
  double arg() const noexcept { return arg_; }
  bool is_root() const noexcept { return order_ > 0; }
  std::int64_t index() const noexcept { return index_; }
  std::int64_t order() const noexcept { return order_; }

  UnitPoint pow(std::int64_t e) const;

 private:
  UnitPoint() = default;
  Complex value_{1.0, 0.0};
  double arg_ = 0.0;
  std::int64_t index_ = 0;
  std::int64_t order_ = 0;  // 0 for angle-built points
};

// P(z; x) = sum_{i=1}^{n} x_i z^i, with x_1 the first bit.
Complex eval_P(Complex z, const BitSeq& x);
Complex eval_P(const UnitPoint& z, const BitSeq& x);

// Strictly nested chain [m] = B_1 > B_2 > ... > B_k, each B_r a bitmask over
// {0..m-1}.
struct NestedChain {
  std::vector<std::uint32_t> sets;
};

// All chains over [m], cached. Size is the ordered Bell number of m.
const std::vector<NestedChain>& nested_chains(int m);

// sum_{1 <= i_1 < ... < i_k <= len} x_{i_1} ... x_{i_k}
//     * w_1^{i_1} w_2^{i_2 - i_1} ... w_k^{i_k - i_{k-1}},
// evaluated by a forward recurrence in O(len * k).
Complex f_chain(const Trace& trace, std::span<const Complex> w);

// Unbiased estimator of prod_k P(z_k; x) from one rotation-free trace.
// Precomputes the chain weights for a fixed (Z, q); equal entries of Z are
// grouped so chains with identical weight vectors are evaluated once.
class ChainEstimator {
 public:
  ChainEstimator(std::span<const Complex> z, const ChannelParams& params);

  Complex operator()(const Trace& trace) const;

  std::size_t distinct_terms() const noexcept { return terms_.size(); }

 private:
  struct Term {
    Complex coefficient;  // multiplicity * p^{-k} * prod z_{B_r} / w_{B,r}
    std::vector<Complex> w;
  };
  std::vector<Term> terms_;
};

Complex g_m(const Trace& trace, std::span<const Complex> z, const ChannelParams& params);

struct EstimatorQuery {
  int t = 2;
  UnitPoint z = UnitPoint::root(0, 1);
  double L = 2.0;

  int m() const noexcept { return t + 1; }
  // Throws kInvalidArgument unless t in {2,3,5}, L >= 2 and |arg z| <= 1/L.
  void validate() const;
};

// Z = (z, ..., z, z^{-t}) for the query.
std::vector<Complex> query_vector(const EstimatorQuery& query);

// h_t(trace, z) = n z^{tn} g_{t+1}(trace, Z), as a reusable evaluator.
class HtEstimator {
 public:
  HtEstimator(const EstimatorQuery& query, std::size_t n, const ChannelParams& params);
  Complex operator()(const Trace& trace) const { return scale_ * g_(trace); }

 private:
  Complex scale_;
  ChainEstimator g_;
};

Complex h_t(const Trace& trace, const EstimatorQuery& query, std::size_t n,
            const ChannelParams& params);

// sum_j z^{tn} P(z; x^{(j)})^t P(z^{-t}; x^{(j)}).
Complex Q_t_exact(Complex z, const CircularString& x, int t);
Complex Q_t_exact(const UnitPoint& z, const CircularString& x, int t);

// Distinct traces with multiplicities; averages over a batch are computed
// once per distinct value.
class TraceHistogram {
 public:
  TraceHistogram() = default;
  explicit TraceHistogram(std::span<const Trace> traces);

  void add(const Trace& trace, std::uint64_t count = 1);
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  const std::map<Trace, std::uint64_t>& counts() const noexcept { return counts_; }

 private:
  std::map<Trace, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Batch average of h_t in a fixed summation order, independent of `threads`.
Complex average_h_t(const TraceHistogram& traces, const EstimatorQuery& query, std::size_t n,
                    const ChannelParams& params, unsigned threads = 1);

struct DistinguishConfig {
  double L = 0.0;           // 0: max(2, ceil(n^{1/3}))
  std::size_t grid = 0;     // 0: 64 (t + 1) n arc points per t
  double delta_min = 1e-9;  // separations at or below this are Indistinguishable
  std::vector<int> exponents{2, 3, 5};
  unsigned threads = 1;
};

double default_arc_parameter(std::size_t n);

// Search points on the arc |arg z| <= 1/L: every n-th root of unity inside
// the arc, then `arc_points` uniformly spaced points across it.
std::vector<UnitPoint> search_grid(std::size_t n, double L, std::size_t arc_points);

// Q_t(.; x) tabulated over the search grids of every exponent in the config.
class SeparationTable {
 public:
  SeparationTable(std::size_t n, const DistinguishConfig& config);

  std::size_t n() const noexcept { return n_; }
  double L() const noexcept { return L_; }
  std::span<const int> exponents() const noexcept { return exponents_; }
  const std::vector<UnitPoint>& grid(std::size_t exponent_slot) const {
    return grids_[exponent_slot];
  }

  // values[slot][point] = Q_t(point; x).
  std::vector<std::vector<Complex>> evaluate(const CircularString& x) const;

 private:
  std::size_t n_;
  double L_;
  std::vector<int> exponents_;
  std::vector<std::vector<UnitPoint>> grids_;
};

struct Separation {
  int t = 2;
  UnitPoint z = UnitPoint::root(0, 1);
  double delta = 0.0;
  Complex q_a;
  Complex q_b;
};

// argmax over (t, z) of |Q_t(z; a) - Q_t(z; b)| from tabulated values.
Separation best_separation(const SeparationTable& table,
                           const std::vector<std::vector<Complex>>& values_a,
                           const std::vector<std::vector<Complex>>& values_b);
Separation search_separation(const CircularString& a, const CircularString& b,
                             const DistinguishConfig& config);

enum class Verdict { kA, kB, kIndistinguishable };
const char* verdict_name(Verdict v) noexcept;

struct DistinguishResult {
  Verdict verdict = Verdict::kIndistinguishable;
  Separation separation;
  Complex estimate;  // batch mean of h_t at the chosen (t, z); 0 if not computed
  double L = 0.0;
};

// Exact tie (or cyclically equal inputs the caller did not expect) resolves
// to the candidate with the smaller canonical form.
Verdict closer_candidate(const CircularString& a, const CircularString& b, Complex estimate,
                         Complex q_a, Complex q_b);

// Throws kLengthMismatch, kEmptyTraceStream.
DistinguishResult distinguish(const CircularString& a, const CircularString& b,
                              const TraceHistogram& traces, const ChannelParams& params,
                              const DistinguishConfig& config = {});
DistinguishResult distinguish(const CircularString& a, const CircularString& b,
                              std::span<const Trace> traces, const ChannelParams& params,
                              const DistinguishConfig& config = {});

// Tournament over canonical candidates (all 2^n strings up to rotation when
// `candidates` is empty, n <= 8). Throws kNoCondorcetWinner when no candidate
// beats every other, kInstanceTooLarge, kEmptyTraceStream.
CircularString worst_case_reconstruct(std::size_t n, const TraceHistogram& traces,
                                      const ChannelParams& params,
                                      const DistinguishConfig& config = {},
                                      std::span<const CircularString> candidates = {});

// Largest |h_t| over a batch, for the CLI's trace-count heuristic.
double max_abs_h_t(const TraceHistogram& traces, const EstimatorQuery& query, std::size_t n,
                   const ChannelParams& params);
// ceil((2 maxAbsH / delta)^2 ln(2 / failure)).
std::uint64_t chernoff_trace_count(double max_abs_h, double delta, double failure);

// Proposition-style reduction: reconstruct a linear string of length n from
// rotation-free traces by padding to m >= 2n, lifting each trace, running
// worst_case_reconstruct and unpadding. If the drawn pad is not unique in the
// reconstruction, a fresh pad is drawn and the same linear traces are lifted
// again, up to `attempts` times.
struct LinearReconstruction {
  BitSeq linear;
  CircularString circular;
  BitSeq pad;
  int attempts_used = 0;
};
LinearReconstruction reconstruct_linear_by_padding(std::span<const Trace> linear_traces,
                                                   std::size_t n, std::size_t m,
                                                   const ChannelParams& params,
                                                   const DistinguishConfig& config,
                                                   std::uint64_t seed, int attempts = 8);

}  // namespace cyclotrace
