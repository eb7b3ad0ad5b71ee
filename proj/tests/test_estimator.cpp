#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cyclotrace/channel.hpp"
#include "cyclotrace/error.hpp"
#include "cyclotrace/estimator.hpp"
#include "cyclotrace/oracle.hpp"
#include "oracles.hpp"

using namespace cyclotrace;

namespace {

CircularString cs(const char* bits) { return CircularString::parse(bits); }
Complex polar(double theta) { return std::polar(1.0, theta); }

Complex expected_g(const std::string& x, const std::vector<Complex>& z, double q) {
  Complex sum = 0.0;
  const ChannelParams params(q);
  for (const auto& [trace, prob] : oracle::linear_law(x, q))
    sum += prob * g_m(BitSeq::parse(trace), z, params);
  return sum;
}

Complex expected_h(const std::string& x, const EstimatorQuery& query, double q) {
  Complex sum = 0.0;
  const ChannelParams params(q);
  const HtEstimator h(query, x.size(), params);
  for (const auto& [trace, prob] : oracle::circular_law(x, q)) sum += prob * h(BitSeq::parse(trace));
  return sum;
}

}  // namespace

TEST_CASE("unit points") {
  const auto i = UnitPoint::root(1, 4);
  CHECK(i.value() == Complex(0.0, 1.0));
  CHECK(UnitPoint::root(2, 4).value() == Complex(-1.0, 0.0));
  CHECK(UnitPoint::root(-1, 4).index() == 3);
  CHECK(i.pow(-2).index() == 2);
  CHECK(i.pow(7).value() == Complex(0.0, -1.0));
  for (std::int64_t n = 1; n <= 13; ++n)
    for (std::int64_t k = 0; k < n; ++k) CHECK(std::abs(std::abs(UnitPoint::root(k, n).value()) - 1) < 1e-12);
  const auto a = UnitPoint::from_angle(4.0);
  CHECK(a.arg() == doctest::Approx(4.0 - 2 * std::numbers::pi));
  CHECK_FALSE(a.is_root());
  CHECK(std::abs(a.pow(3).value() - std::pow(a.value(), 3)) < 1e-12);
}

TEST_CASE("P(z; x)") {
  CHECK(eval_P(Complex(1.0), BitSeq::parse("1010")) == Complex(2.0));
  CHECK(eval_P(polar(0.7), BitSeq::parse("0000")) == Complex(0.0));
  CHECK(std::abs(eval_P(UnitPoint::root(1, 4), BitSeq::parse("1010"))) < 1e-15);
  for (const auto& s : oracle::all_strings(7)) {
    const Complex z = polar(0.37);
    CHECK(std::abs(eval_P(z, BitSeq::parse(s)) - oracle::P(z, s)) < 1e-12);
  }
}

TEST_CASE("root of unity shift identities") {
  for (std::size_t n = 2; n <= 7; ++n) {
    for (const auto& x : all_canonical_strings(n)) {
      const auto x1 = x.rotated(1);
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
        const auto z = UnitPoint::root(k, static_cast<std::int64_t>(n));
        CHECK(std::abs(eval_P(z, x1.bits()) - z.pow(-1).value() * eval_P(z, x.bits())) < 1e-12);
        for (int t : {2, 3, 5}) {
          const auto zt = z.pow(-t);
          CHECK(std::abs(eval_P(zt, x1.bits()) - z.pow(t).value() * eval_P(zt, x.bits())) < 1e-12);
          const Complex f0 = z.pow(t * static_cast<std::int64_t>(n)).value() *
                             std::pow(eval_P(z, x.bits()), t) * eval_P(zt, x.bits());
          for (std::size_t j = 1; j < n; ++j) {
            const auto xj = x.rotated(j);
            const Complex fj = z.pow(t * static_cast<std::int64_t>(n)).value() *
                               std::pow(eval_P(z, xj.bits()), t) * eval_P(zt, xj.bits());
            CHECK(std::abs(fj - f0) < 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("f_chain examples") {
  const std::vector<Complex> one{polar(0.4)};
  CHECK(f_chain(BitSeq(), one) == Complex(0.0));
  const Complex w1 = polar(0.4);
  CHECK(std::abs(f_chain(BitSeq::parse("11"), one) - (w1 + w1 * w1)) < 1e-15);
  const std::vector<Complex> two{Complex(0.3, 0.8), Complex(-1.1, 0.2)};
  CHECK(std::abs(f_chain(BitSeq::parse("101"), two) - two[0] * two[1] * two[1]) < 1e-15);
  CHECK(f_chain(BitSeq::parse("1000"), two) == Complex(0.0));
}

TEST_CASE("f_chain matches tuple enumeration") {
  RngStream rng(5);
  for (std::size_t len = 0; len <= 10; ++len) {
    for (const auto& s : oracle::all_strings(len)) {
      for (std::size_t k = 1; k <= 3; ++k) {
        std::vector<Complex> w;
        for (std::size_t r = 0; r < k; ++r)
          w.emplace_back(2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1);
        const Complex lib = f_chain(BitSeq::parse(s), w);
        const Complex ref = oracle::f_chain(s, w);
        CHECK(std::abs(lib - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST_CASE("nested chain counts are ordered Bell numbers") {
  const std::size_t expected[] = {0, 1, 3, 13, 75, 541, 4683};
  for (int m = 1; m <= 6; ++m) {
    const auto& chains = nested_chains(m);
    CHECK(chains.size() == expected[m]);
    for (const auto& c : chains) {
      REQUIRE(!c.sets.empty());
      CHECK(c.sets.front() == (1u << m) - 1);
      for (std::size_t r = 1; r < c.sets.size(); ++r) {
        CHECK(c.sets[r] != 0);
        CHECK((c.sets[r] & c.sets[r - 1]) == c.sets[r]);
        CHECK(c.sets[r] != c.sets[r - 1]);
      }
    }
  }
}

TEST_CASE("g_m agrees with the sum over explicit set chains") {
  RngStream rng(9);
  for (std::size_t m = 1; m <= 4; ++m) {
    for (const char* trace : {"", "1", "0110", "111010", "1011101"}) {
      std::vector<Complex> z;
      for (std::size_t i = 0; i < m; ++i) z.push_back(polar(2 * std::numbers::pi * rng.uniform01()));
      if (m >= 3) z[1] = z[0];  // exercises grouping of equal entries
      const Complex lib = g_m(BitSeq::parse(trace), z, ChannelParams(0.35));
      const Complex ref = oracle::g_by_set_chains(trace, z, 0.35);
      CHECK(std::abs(lib - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
  const auto z = query_vector({3, UnitPoint::from_angle(0.1), 4.0});
  CHECK(ChainEstimator(z, ChannelParams(0.5)).distinct_terms() < nested_chains(4).size());
}

TEST_CASE("g_m examples") {
  const Complex z = polar(0.3);
  const std::vector<Complex> single{z};
  // Nearly no deletion: g_1 reduces to P(z; trace).
  CHECK(std::abs(g_m(BitSeq::parse("1101"), single, ChannelParams(1e-15)) -
                 oracle::P(z, "1101")) < 1e-12);
  CHECK(std::abs(expected_g("110", single, 0.5) - oracle::P(z, "110")) < 1e-9);
  const Complex y = polar(0.2);
  const std::vector<Complex> three{y, y, std::pow(y, -2)};
  const Complex target = std::pow(oracle::P(y, "1011"), 2) * oracle::P(std::pow(y, -2), "1011");
  CHECK(std::abs(expected_g("1011", three, 0.4) - target) < 1e-9);
  // |z| = q makes a weight vanish.
  CHECK_THROWS_AS(g_m(BitSeq::parse("1"), std::vector<Complex>{Complex(0.5, 0.0)}, ChannelParams(0.5)),
                  Error);
}

TEST_CASE("g_m is unbiased over the linear channel") {
  RngStream rng(2024);
  for (const auto& x : oracle::all_strings(5)) {
    for (double q : {0.3, 0.5}) {
      for (std::size_t m = 1; m <= 3; ++m) {
        for (int rep = 0; rep < 3; ++rep) {
          std::vector<Complex> z;
          Complex target = 1.0;
          for (std::size_t i = 0; i < m; ++i) {
            z.push_back(polar(2 * std::numbers::pi * rng.uniform01()));
            target *= oracle::P(z.back(), x);
          }
          CHECK(std::abs(expected_g(x, z, q) - target) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("query validation") {
  CHECK_NOTHROW(EstimatorQuery{2, UnitPoint::from_angle(0.5), 2.0}.validate());
  CHECK_THROWS_AS((EstimatorQuery{4, UnitPoint::from_angle(0.1), 2.0}.validate()), Error);
  CHECK_THROWS_AS((EstimatorQuery{2, UnitPoint::from_angle(0.6), 2.0}.validate()), Error);
  CHECK_THROWS_AS((EstimatorQuery{2, UnitPoint::from_angle(0.1), 1.5}.validate()), Error);
  const auto z = query_vector({5, UnitPoint::from_angle(0.1), 2.0});
  CHECK(z.size() == 6);
  CHECK(std::abs(z[5] - polar(-0.5)) < 1e-15);
}

TEST_CASE("Q_t examples") {
  for (const char* s : {"1100", "10110", "111"}) {
    const auto x = cs(s);
    for (int t : {2, 3, 5}) {
      const double ones = static_cast<double>(x.weight());
      CHECK(std::abs(Q_t_exact(Complex(1.0), x, t) -
                     static_cast<double>(x.size()) * std::pow(ones, t + 1)) < 1e-9);
      const auto z = UnitPoint::from_angle(0.23);
      for (std::size_t j = 1; j < x.size(); ++j)
        CHECK(std::abs(Q_t_exact(z, x.rotated(j), t) - Q_t_exact(z, x, t)) < 1e-12);
      CHECK(std::abs(Q_t_exact(z, x, t) - oracle::Q_t(z.value(), s, t)) < 1e-9);
    }
  }
  const Complex i(0.0, 1.0);
  Complex term_sum = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    const std::string r = oracle::rotate("1100", j);
    term_sum += std::pow(i, 8) * std::pow(oracle::P(i, r), 2) * oracle::P(std::pow(i, -2), r);
  }
  CHECK(std::abs(Q_t_exact(UnitPoint::root(1, 4), cs("1100"), 2) - term_sum) < 1e-12);
}

TEST_CASE("h_t is unbiased for Q_t over the circular channel") {
  CHECK(std::abs(expected_h("1100", {2, UnitPoint::from_angle(0.1), 2.0}, 0.5) -
                 Q_t_exact(UnitPoint::from_angle(0.1), cs("1100"), 2)) < 1e-9);
  for (int t : {2, 3, 5}) {
    const EstimatorQuery query{t, UnitPoint::from_angle(-0.3), 3.0};
    CHECK(std::abs(expected_h("0000", query, 0.4)) < 1e-12);
  }
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& x : oracle::all_strings(n)) {
      for (int t : {2, 3, 5}) {
        const auto z = UnitPoint::from_angle(0.41);
        const EstimatorQuery query{t, z, 2.0};
        CHECK(std::abs(expected_h(x, query, 0.3) - oracle::Q_t(z.value(), x, t)) < 1e-9);
      }
    }
  }
}

TEST_CASE("h_t stays bounded on length 8 strings") {
  const ChannelParams params(0.5);
  double worst = 0.0;
  for (const auto& x : all_canonical_strings(8)) {
    const auto law = exact_trace_distribution(x, params);
    for (double theta : {0.5, -0.5, 0.25, 0.0}) {
      const HtEstimator h({2, UnitPoint::from_angle(theta), 2.0}, 8, params);
      for (const auto& [trace, prob] : law.entries()) worst = std::max(worst, std::abs(h(trace)));
    }
  }
  CHECK(worst < 1e9);
}

TEST_CASE("batch averages are independent of thread count") {
  const auto traces = generate_traces(cs("110100"), ChannelParams(0.4), 3, 20000);
  const TraceHistogram hist(traces);
  const EstimatorQuery query{3, UnitPoint::from_angle(0.2), 2.0};
  const Complex one = average_h_t(hist, query, 6, ChannelParams(0.4), 1);
  const Complex four = average_h_t(hist, query, 6, ChannelParams(0.4), 4);
  CHECK(one == four);
}

TEST_CASE("search grid") {
  CHECK(default_arc_parameter(4) == 2.0);
  CHECK(default_arc_parameter(27) == 3.0);
  CHECK(default_arc_parameter(28) == 4.0);
  const auto grid = search_grid(12, 2.0, 5);
  std::size_t roots = 0;
  for (const auto& z : grid) {
    CHECK(std::abs(z.arg()) <= 0.5 + 1e-15);
    roots += z.is_root();
  }
  CHECK(roots == 1);  // only w^0, since 2 pi / 12 > 1/2
  CHECK(grid.size() == 6);
  CHECK(search_grid(13, 2.0, 2).size() == 3 + 2);
}

TEST_CASE("separation at z = i for 1100 vs 1010") {
  const auto i = UnitPoint::root(1, 4);
  CHECK(std::abs(eval_P(i, BitSeq::parse("1010"))) < 1e-15);
  CHECK(std::abs(eval_P(i, BitSeq::parse("1100")) - Complex(-1.0, 1.0)) < 1e-15);
  // For t = 2 the factor P(i^-2; a) = P(-1; a) also vanishes, so only t = 3, 5
  // separate at this point.
  const auto gap = [&](int t) {
    return std::abs(Q_t_exact(i, cs("1100"), t) - Q_t_exact(i, cs("1010"), t));
  };
  CHECK(gap(2) < 1e-12);
  CHECK(gap(3) > 0.1);
  CHECK(gap(5) > 0.1);
  const auto sep = search_separation(cs("1100"), cs("1010"), DistinguishConfig{});
  CHECK(sep.delta > 1e-3);
}

TEST_CASE("distinguish: basic cases") {
  const ChannelParams params(0.5);
  const auto traces = generate_traces(cs("110"), params, 1, 100);
  CHECK(distinguish(cs("110"), cs("011"), traces, params).verdict == Verdict::kIndistinguishable);
  CHECK_THROWS_AS(distinguish(cs("110"), cs("0110"), traces, params), Error);
  CHECK_THROWS_AS(distinguish(cs("110"), cs("100"), std::span<const Trace>{}, params), Error);
  CHECK(closer_candidate(cs("1100"), cs("1010"), 0.4, 0.0, 2.0) == Verdict::kA);
  CHECK(closer_candidate(cs("1100"), cs("1010"), 1.9, 0.0, 2.0) == Verdict::kB);
  // Exact ties go to the smaller canonical form: 0011 < 0101.
  CHECK(closer_candidate(cs("1100"), cs("1010"), 1.0, 0.0, 2.0) == Verdict::kA);
  CHECK(closer_candidate(cs("1010"), cs("1100"), 1.0, 0.0, 2.0) == Verdict::kB);
  CHECK(std::string(verdict_name(Verdict::kIndistinguishable)) == "Indistinguishable");
}

TEST_CASE("distinguish: 1100 vs 1010 from seeded batches") {
  const ChannelParams params(0.5);
  int correct_a = 0;
  int correct_b = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    correct_a += distinguish(cs("1100"), cs("1010"), generate_traces(cs("1100"), params, seed, 100000),
                             params)
                     .verdict == Verdict::kA;
    correct_b += distinguish(cs("1100"), cs("1010"),
                             generate_traces(cs("1010"), params, seed + 100, 100000), params)
                     .verdict == Verdict::kB;
  }
  CHECK(correct_a >= 9);
  CHECK(correct_b >= 9);
}

TEST_CASE("distinguish agrees with the Bayes oracle on length 4 pairs") {
  const ChannelParams params(0.5);
  const auto strings = all_canonical_strings(4);
  int agree = 0;
  int total = 0;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    for (std::size_t j = i + 1; j < strings.size(); ++j) {
      for (std::uint64_t rep = 0; rep < 4; ++rep) {
        const auto& truth = rep % 2 ? strings[j] : strings[i];
        const TraceHistogram hist(generate_traces(truth, params, 1000 * i + 10 * j + rep, 100000));
        const auto ours = distinguish(strings[i], strings[j], hist, params).verdict;
        const auto bayes = ml_distinguish_oracle(strings[i], strings[j], hist, params);
        agree += ours == bayes;
        ++total;
      }
    }
  }
  CHECK(agree >= 0.95 * total);
}

TEST_CASE("worst case reconstruction") {
  const ChannelParams params(0.5);
  const auto traces = generate_traces(cs("1100"), params, 77, 100000);
  const TraceHistogram hist(traces);
  CHECK(worst_case_reconstruct(4, hist, params).to_string() == "0011");

  const std::vector<CircularString> two{cs("1100"), cs("1010")};
  CHECK(cyclically_equal(worst_case_reconstruct(4, hist, params, {}, two), cs("1100")));

  const TraceHistogram ones(generate_traces(cs("1"), params, 3, 1000));
  CHECK(worst_case_reconstruct(1, ones, params).to_string() == "1");
  const TraceHistogram zeros(generate_traces(cs("0"), params, 3, 1000));
  CHECK(worst_case_reconstruct(1, zeros, params).to_string() == "0");

  CHECK_THROWS_AS(worst_case_reconstruct(9, hist, params), Error);
  CHECK_THROWS_AS(worst_case_reconstruct(4, TraceHistogram{}, params), Error);
}

TEST_CASE("Chernoff trace count") {
  CHECK(chernoff_trace_count(1.0, 2.0, 2.0 / std::exp(1.0)) == 1);
  CHECK(chernoff_trace_count(10.0, 1.0, 0.05) ==
        static_cast<std::uint64_t>(std::ceil(400.0 * std::log(40.0))));
  CHECK_THROWS_AS(chernoff_trace_count(1.0, 0.0, 0.1), Error);
  CHECK_THROWS_AS(chernoff_trace_count(1.0, 1.0, 1.5), Error);
  const TraceHistogram hist(generate_traces(cs("1100"), ChannelParams(0.5), 1, 1000));
  CHECK(max_abs_h_t(hist, {2, UnitPoint::from_angle(0.3), 2.0}, 4, ChannelParams(0.5)) > 0.0);
}

TEST_CASE("linear reconstruction by padding") {
  const ChannelParams params(0.3);
  const BitSeq x = BitSeq::parse("1101");
  const auto traces = generate_linear_traces(x, params, 8, 100000);
  const auto result = reconstruct_linear_by_padding(traces, 4, 8, params, {}, 8);
  CHECK(result.linear == x);
  CHECK(result.attempts_used >= 1);
  CHECK(result.circular.size() == 8);
  CHECK(unpad(result.circular, result.pad) == x);
}
