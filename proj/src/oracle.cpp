#include "cyclotrace/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "cyclotrace/error.hpp"
#include "parallel.hpp"

namespace cyclotrace {

namespace {

std::unordered_set<BitSeq> support_union(const ExactTraceDistribution& d1,
                                         const ExactTraceDistribution& d2) {
  std::unordered_set<BitSeq> keys;
  for (const auto& [trace, prob] : d1.entries()) keys.insert(trace);
  for (const auto& [trace, prob] : d2.entries()) keys.insert(trace);
  return keys;
}

std::vector<BitSeq> sorted_union(const ExactTraceDistribution& d1,
                                 const ExactTraceDistribution& d2) {
  const auto keys = support_union(d1, d2);
  std::vector<BitSeq> out(keys.begin(), keys.end());
  std::sort(out.begin(), out.end(), [](const BitSeq& a, const BitSeq& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

}  // namespace

double hellinger(const ExactTraceDistribution& d1, const ExactTraceDistribution& d2) {
  double sum = 0.0;
  for (const auto& key : sorted_union(d1, d2)) {
    const double diff = std::sqrt(d1.probability(key)) - std::sqrt(d2.probability(key));
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double total_variation(const ExactTraceDistribution& d1, const ExactTraceDistribution& d2) {
  double sum = 0.0;
  for (const auto& key : sorted_union(d1, d2)) {
    sum += std::abs(d1.probability(key) - d2.probability(key));
  }
  return 0.5 * sum;
}

Verdict ml_distinguish_oracle(const CircularString& a, const CircularString& b,
                              const TraceHistogram& traces, const ChannelParams& params) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch, "candidates differ in length");
  require(!traces.empty(), ErrorCode::kEmptyTraceStream, "empty trace batch");
  const auto law_a = exact_trace_distribution(a, params);
  const auto law_b = exact_trace_distribution(b, params);
  double log_a = 0.0;
  double log_b = 0.0;
  for (const auto& [trace, count] : traces.counts()) {
    const double pa = law_a.probability(trace);
    const double pb = law_b.probability(trace);
    if (pa == 0.0 && pb == 0.0) {
      fail(ErrorCode::kZeroLikelihoodBoth,
           "trace " + trace.to_string() + " is impossible under both candidates");
    }
    const double weight = static_cast<double>(count);
    log_a += pa > 0.0 ? weight * std::log(pa) : -std::numeric_limits<double>::infinity();
    log_b += pb > 0.0 ? weight * std::log(pb) : -std::numeric_limits<double>::infinity();
  }
  if (log_a > log_b) return Verdict::kA;
  if (log_b > log_a) return Verdict::kB;
  return canonical(a) <= canonical(b) ? Verdict::kA : Verdict::kB;
}

Verdict ml_distinguish_oracle(const CircularString& a, const CircularString& b,
                              std::span<const Trace> traces, const ChannelParams& params) {
  return ml_distinguish_oracle(a, b, TraceHistogram(traces), params);
}

namespace {

CircularString three_ones_string(int g1, int g2, int g3) {
  BitSeq bits;
  for (int gap : {g1, g2, g3}) {
    bits.push_back(true);
    for (int i = 0; i < gap; ++i) bits.push_back(false);
  }
  return CircularString(std::move(bits));
}

}  // namespace

ThreeOnesFamily::ThreeOnesFamily(int n, int kk, double q)
    : n_(n),
      kk_(kk),
      params_(q),
      x_(three_ones_string(n, n + 1, n + kk)),
      y_(three_ones_string(n, n + kk, n + 1)) {
  require(n >= 1, ErrorCode::kInvalidArgument, "three-ones family needs n >= 1");
  require(kk >= 2 && kk <= 4, ErrorCode::kInvalidArgument, "three-ones family needs 2 <= kk <= 4");
  require(!cyclically_equal(x_, y_), ErrorCode::kInternal, "three-ones strings coincide");
}

std::array<int, 3> ThreeOnesFamily::gaps(Which which) const noexcept {
  if (which == Which::kX) return {n_, n_ + 1, n_ + kk_};
  return {n_, n_ + kk_, n_ + 1};
}

std::array<std::size_t, 3> ThreeOnesFamily::ones(Which which) const noexcept {
  const auto g = gaps(which);
  const auto first = static_cast<std::size_t>(g[0]) + 1;
  return {0, first, first + static_cast<std::size_t>(g[1]) + 1};
}

namespace {

// C(top, bottom) as a double; exact through 64-bit integers for top < 64.
double binomial(int top, int bottom) {
  if (bottom < 0 || top < bottom) return 0.0;
  bottom = std::min(bottom, top - bottom);
  std::uint64_t value = 1;
  for (int i = 1; i <= bottom; ++i) {
    // value * (top - bottom + i) is divisible by i at every step.
    const std::uint64_t factor = static_cast<std::uint64_t>(top - bottom + i);
    const __uint128_t wide = static_cast<__uint128_t>(value) * factor;
    value = static_cast<std::uint64_t>(wide / static_cast<std::uint64_t>(i));
  }
  return static_cast<double>(value);
}

double log_binomial(int top, int bottom) {
  if (bottom < 0 || top < bottom) return -std::numeric_limits<double>::infinity();
  return std::lgamma(top + 1.0) - std::lgamma(bottom + 1.0) - std::lgamma(top - bottom + 1.0);
}

// Per-family binomial tables indexed [gap slot][zeros kept].
struct GapTables {
  bool log_space;
  std::array<std::vector<double>, 3> table;

  GapTables(const std::array<int, 3>& gaps, int max_kept, bool use_log) : log_space(use_log) {
    for (std::size_t s = 0; s < 3; ++s) {
      table[s].resize(static_cast<std::size_t>(max_kept) + 1);
      for (int t = 0; t <= max_kept; ++t) {
        table[s][static_cast<std::size_t>(t)] =
            use_log ? log_binomial(gaps[s], t) : binomial(gaps[s], t);
      }
    }
  }

  double at(std::size_t slot, int kept) const { return table[slot][static_cast<std::size_t>(kept)]; }
};

double weight_from_tables(const GapTables& tables, int total_zeros, double q, double p, int a,
                          int b, int c) {
  const int kept = a + b + c;
  const std::array<int, 3> t{a, b, c};
  if (tables.log_space) {
    const double base = (total_zeros - kept) * std::log(q) + kept * std::log(p);
    double sum = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
      const double l = tables.at(0, t[s]) + tables.at(1, t[(s + 1) % 3]) + tables.at(2, t[(s + 2) % 3]);
      if (std::isfinite(l)) sum += std::exp(base + l);
    }
    return sum;
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < 3; ++s) {
    sum += tables.at(0, t[s]) * tables.at(1, t[(s + 1) % 3]) * tables.at(2, t[(s + 2) % 3]);
  }
  return std::pow(q, total_zeros - kept) * std::pow(p, kept) * sum;
}

int total_zeros(const ThreeOnesFamily& fam) { return 3 * fam.n() + fam.kk() + 1; }

}  // namespace

double three_ones_weight(const ThreeOnesFamily& fam, ThreeOnesFamily::Which which, int a, int b,
                         int c) {
  const int top = fam.n() + fam.kk();
  if (a < 0 || b < 0 || c < 0 || a > top || b > top || c > top) return 0.0;
  const GapTables tables(fam.gaps(which), top, fam.n() >= 64);
  return weight_from_tables(tables, total_zeros(fam), fam.params().q(), fam.params().p(), a, b, c);
}

double three_ones_prob(const ThreeOnesFamily& fam, ThreeOnesFamily::Which which, int a, int b,
                       int c) {
  const double p = fam.params().p();
  return p * p * p / 3.0 * three_ones_weight(fam, which, a, b, c);
}

ExactTraceDistribution rotation_class_law(const CircularString& x, const ChannelParams& params,
                                          std::optional<std::size_t> deleted_position) {
  const std::size_t n = x.size();
  require(n <= kMaxExactLength, ErrorCode::kInstanceTooLarge,
          "rotation-class law supports n <= 20, got n = " + std::to_string(n));
  if (deleted_position) {
    require(*deleted_position < n, ErrorCode::kInvalidArgument, "deleted position out of range");
  }
  const auto len = static_cast<unsigned>(n);
  std::vector<double> weight(n + 1);
  for (std::size_t kept = 0; kept <= n; ++kept) {
    weight[kept] = std::pow(params.p(), static_cast<double>(kept)) *
                   std::pow(params.q(), static_cast<double>(n - kept));
  }
  const double norm = deleted_position ? params.q() : 1.0;
  const std::uint64_t w = x.bits().to_word();
  // Accumulate by (length, canonical word) and convert once at the end.
  std::unordered_map<std::uint64_t, double> acc;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (deleted_position && ((mask >> *deleted_position) & 1u)) continue;
    std::uint64_t bits = 0;
    unsigned kept = 0;
    for (unsigned i = 0; i < len; ++i) {
      if ((mask >> i) & 1u) bits |= ((w >> i) & 1u) << kept++;
    }
    const std::uint64_t key = (std::uint64_t{1} << kept) | word::canonical(bits, kept);
    acc[key] += weight[kept] / norm;
  }
  ExactTraceDistribution out;
  for (const auto& [key, prob] : acc) {
    const auto kept = static_cast<std::size_t>(std::bit_width(key) - 1);
    out.add(BitSeq::from_word(key ^ (std::uint64_t{1} << kept), kept), prob);
  }
  return out;
}

EquidistributionReport conditional_equidistribution(const ThreeOnesFamily& fam) {
  using Which = ThreeOnesFamily::Which;
  const auto ones_x = fam.ones(Which::kX);
  const auto ones_y = fam.ones(Which::kY);
  // Deleting x's first 1 merges gaps like deleting y's second, and so on.
  constexpr std::array<std::pair<std::size_t, std::size_t>, 3> kPairs{{{0, 1}, {1, 0}, {2, 2}}};
  EquidistributionReport report;
  report.holds = true;
  for (const auto& [ix, iy] : kPairs) {
    const auto law_x = rotation_class_law(fam.x(), fam.params(), ones_x[ix]);
    const auto law_y = rotation_class_law(fam.y(), fam.params(), ones_y[iy]);
    double worst = 0.0;
    for (const auto& key : sorted_union(law_x, law_y)) {
      worst = std::max(worst, std::abs(law_x.probability(key) - law_y.probability(key)));
    }
    report.cases.push_back(EquidistributionCase{ix, iy, worst});
    if (worst > 1e-12) report.holds = false;
  }
  return report;
}

bool conditional_equidistribution_check(const ThreeOnesFamily& fam) {
  return conditional_equidistribution(fam).holds;
}

namespace {

__int128 prod_from(std::int64_t n, int from, int kk, std::int64_t v) {
  __int128 out = 1;
  for (int i = from; i <= kk; ++i) out *= static_cast<__int128>(n + i - v);
  return out;
}

}  // namespace

__int128 alternating_difference(std::int64_t n, int kk, std::int64_t a, std::int64_t b,
                                std::int64_t c) {
  auto pair = [&](std::int64_t u, std::int64_t v) {
    return prod_from(n, 2, kk, u) * prod_from(n, 2, kk, v);
  };
  return static_cast<__int128>(a - b) * pair(a, b) + static_cast<__int128>(b - c) * pair(b, c) +
         static_cast<__int128>(c - a) * pair(c, a);
}

RatioSums ratio_sums(std::int64_t n, int kk, std::int64_t a, std::int64_t b, std::int64_t c) {
  auto term = [&](std::int64_t full, std::int64_t partial) {
    return prod_from(n, 1, kk, full) * prod_from(n, 2, kk, partial);
  };
  return RatioSums{term(a, b) + term(b, c) + term(c, a), term(b, a) + term(c, b) + term(a, c)};
}

bool s1_s2_antisymmetry_check(std::int64_t n, int kk,
                              std::span<const std::array<std::int64_t, 3>> samples) {
  for (const auto& s : samples) {
    const std::int64_t a = s[0];
    const std::int64_t b = s[1];
    const std::int64_t c = s[2];
    const __int128 value = alternating_difference(n, kk, a, b, c);
    if (a == b || b == c || a == c) {
      if (value != 0) return false;
    }
    if (alternating_difference(n, kk, b, a, c) != -value) return false;
    if (alternating_difference(n, kk, a, c, b) != -value) return false;
    if (alternating_difference(n, kk, c, b, a) != -value) return false;
    const RatioSums sums = ratio_sums(n, kk, a, b, c);
    if (sums.s2 - sums.s1 != value) return false;
    if (a != b && b != c && a != c) {
      auto quotient = [&](std::int64_t u, std::int64_t v, std::int64_t w, __int128& out) {
        const __int128 vandermonde = static_cast<__int128>(u - v) * (v - w) * (u - w);
        const __int128 val = alternating_difference(n, kk, u, v, w);
        if (val % vandermonde != 0) return false;
        out = val / vandermonde;
        return true;
      };
      __int128 q0 = 0;
      __int128 q1 = 0;
      __int128 q2 = 0;
      __int128 q3 = 0;
      if (!quotient(a, b, c, q0) || !quotient(b, a, c, q1) || !quotient(a, c, b, q2) ||
          !quotient(c, b, a, q3)) {
        return false;
      }
      if (q0 != q1 || q0 != q2 || q0 != q3) return false;
    }
  }
  return true;
}

ThreeOnesDistance hellinger_three_ones(const ThreeOnesFamily& fam, unsigned threads) {
  using Which = ThreeOnesFamily::Which;
  const int top = fam.n() + fam.kk();
  const bool use_log = fam.n() >= 64;
  const GapTables tx(fam.gaps(Which::kX), top, use_log);
  const GapTables ty(fam.gaps(Which::kY), top, use_log);
  const int zeros = total_zeros(fam);
  const double q = fam.params().q();
  const double p = fam.params().p();
  const double scale = p * p * p / 3.0;
  const auto width = static_cast<std::size_t>(top) + 1;
  std::vector<ThreeOnesDistance> partial(width, ThreeOnesDistance{0.0, 0.0});
  detail::parallel_for(width, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ia = begin; ia < end; ++ia) {
      const int a = static_cast<int>(ia);
      ThreeOnesDistance acc{0.0, 0.0};
      for (int b = 0; b <= top; ++b) {
        for (int c = 0; c <= top; ++c) {
          const double mu = scale * weight_from_tables(tx, zeros, q, p, a, b, c);
          const double nu = scale * weight_from_tables(ty, zeros, q, p, a, b, c);
          const double d = mu - nu;
          const double h = std::sqrt(mu) - std::sqrt(nu);
          acc.squared_difference += d * d;
          acc.hellinger_squared += h * h;
        }
      }
      partial[ia] = acc;
    }
  });
  ThreeOnesDistance out{0.0, 0.0};
  for (const auto& part : partial) {
    out.squared_difference += part.squared_difference;
    out.hellinger_squared += part.hellinger_squared;
  }
  return out;
}

std::uint64_t sample_lower_bound(double dH2, double eps) {
  require(dH2 > 0.0, ErrorCode::kBadArgs, "Hellinger distance must be positive");
  require(eps > 0.0 && eps < 1.0, ErrorCode::kBadArgs, "eps must lie in (0, 1)");
  return static_cast<std::uint64_t>(std::floor(std::log(1.0 / eps) / (9.0 * dH2)));
}

double log_log_slope(std::span<const double> abscissa, std::span<const double> values) {
  require(abscissa.size() == values.size() && abscissa.size() >= 2, ErrorCode::kBadArgs,
          "slope needs at least two paired points");
  double mean_x = 0.0;
  double mean_y = 0.0;
  const auto count = static_cast<double>(abscissa.size());
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    require(abscissa[i] > 0.0 && values[i] > 0.0, ErrorCode::kBadArgs,
            "log-log slope needs positive data");
    mean_x += std::log(abscissa[i]) / count;
    mean_y += std::log(values[i]) / count;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    const double dx = std::log(abscissa[i]) - mean_x;
    sxy += dx * (std::log(values[i]) - mean_y);
    sxx += dx * dx;
  }
  require(sxx > 0.0, ErrorCode::kBadArgs, "abscissa values must not all coincide");
  return sxy / sxx;
}

}  // namespace cyclotrace
