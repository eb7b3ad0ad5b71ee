#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cyclotrace/channel.hpp"
#include "cyclotrace/estimator.hpp"

namespace cyclotrace {

double hellinger(const ExactTraceDistribution& d1, const ExactTraceDistribution& d2);
double total_variation(const ExactTraceDistribution& d1, const ExactTraceDistribution& d2);

// Bayes-optimal choice between a and b from exact trace laws (n <= 20).
// Throws kLengthMismatch, kEmptyTraceStream, kZeroLikelihoodBoth.
Verdict ml_distinguish_oracle(const CircularString& a, const CircularString& b,
                              const TraceHistogram& traces, const ChannelParams& params);
Verdict ml_distinguish_oracle(const CircularString& a, const CircularString& b,
                              std::span<const Trace> traces, const ChannelParams& params);

// x = 1 0^n 1 0^{n+1} 1 0^{n+kk},  y = 1 0^n 1 0^{n+kk} 1 0^{n+1}.
class ThreeOnesFamily {
 public:
  enum class Which { kX, kY };

  // Throws kInvalidArgument unless n >= 1, 2 <= kk <= 4, 0 < q < 1.
  ThreeOnesFamily(int n, int kk, double q);

  int n() const noexcept { return n_; }
  int kk() const noexcept { return kk_; }
  const ChannelParams& params() const noexcept { return params_; }
  const CircularString& x() const noexcept { return x_; }
  const CircularString& y() const noexcept { return y_; }
  const CircularString& string(Which which) const noexcept {
    return which == Which::kX ? x_ : y_;
  }
  std::size_t length() const noexcept { return x_.size(); }
  // Zero-run lengths following each 1, in cyclic order.
  std::array<int, 3> gaps(Which which) const noexcept;
  // Positions of the three 1s.
  std::array<std::size_t, 3> ones(Which which) const noexcept;

 private:
  int n_;
  int kk_;
  ChannelParams params_;
  CircularString x_;
  CircularString y_;
};

// q^{3n+kk+1-a-b-c} (1-q)^{a+b+c} times the sum over the three cyclic
// assignments of (a, b, c) to the gaps of binomial(gap, zeros kept).
// Binomials with top < bottom are zero. Log-space for n >= 64.
double three_ones_weight(const ThreeOnesFamily& fam, ThreeOnesFamily::Which which, int a, int b,
                         int c);

// Probability that the trace retains all three 1s and, read starting from a
// uniformly chosen one of them, equals 1 0^a 1 0^b 1 0^c:
// (1-q)^3 / 3 * three_ones_weight. Sums to (1-q)^3 over all triples.
double three_ones_prob(const ThreeOnesFamily& fam, ThreeOnesFamily::Which which, int a, int b,
                       int c);

// Law of the rotation class of a trace (keys are canonical forms), by
// enumerating deletion subsets. If `deleted_position` is set, the law is
// conditioned on that original bit being deleted. Throws kInstanceTooLarge
// for length > 20.
ExactTraceDistribution rotation_class_law(const CircularString& x, const ChannelParams& params,
                                          std::optional<std::size_t> deleted_position = {});

struct EquidistributionCase {
  std::size_t x_one;  // index (0..2) of the deleted 1 in x
  std::size_t y_one;  // matching index in y
  double max_abs_difference;
};

struct EquidistributionReport {
  bool holds = false;
  std::vector<EquidistributionCase> cases;
};

// Conditioned on one of the 1s being deleted, the rotation-class laws of
// traces of x and y agree, pairing x's first/second/third 1 with y's
// second/first/third. Tolerance 1e-12 per entry.
EquidistributionReport conditional_equidistribution(const ThreeOnesFamily& fam);
bool conditional_equidistribution_check(const ThreeOnesFamily& fam);

// The alternating polynomial
//   (a-b) prod_{i=2}^{kk} (n+i-a)(n+i-b) + (b-c) prod (n+i-b)(n+i-c)
//     + (c-a) prod (n+i-c)(n+i-a).
// Evaluated exactly; equals S_2 - S_1 for the product forms below.
__int128 alternating_difference(std::int64_t n, int kk, std::int64_t a, std::int64_t b,
                                std::int64_t c);

struct RatioSums {
  __int128 s1;
  __int128 s2;
};
RatioSums ratio_sums(std::int64_t n, int kk, std::int64_t a, std::int64_t b, std::int64_t c);

// Checks, per triple: zero when two arguments coincide, sign flip under each
// transposition, agreement with the expanded product forms, and a
// transposition-invariant quotient by (a-b)(b-c)(a-c) for distinct entries.
bool s1_s2_antisymmetry_check(std::int64_t n, int kk,
                              std::span<const std::array<std::int64_t, 3>> samples);

struct ThreeOnesDistance {
  double squared_difference;  // sum (mu - nu)^2
  double hellinger_squared;   // sum (sqrt mu - sqrt nu)^2
};

// Both sums over all 0 <= a, b, c <= n + kk of three_ones_prob.
ThreeOnesDistance hellinger_three_ones(const ThreeOnesFamily& fam, unsigned threads = 1);

// floor(log(1/eps) / (9 dH2)). Throws kBadArgs unless dH2 > 0, 0 < eps < 1.
std::uint64_t sample_lower_bound(double dH2, double eps);

// Least-squares slope of log(values) against log(abscissa).
double log_log_slope(std::span<const double> abscissa, std::span<const double> values);

}  // namespace cyclotrace
