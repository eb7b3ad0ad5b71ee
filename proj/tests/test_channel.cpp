#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cyclotrace/channel.hpp"
#include "cyclotrace/error.hpp"
#include "oracles.hpp"

using namespace cyclotrace;

namespace {

CircularString cs(const char* bits) { return CircularString::parse(bits); }

ExactTraceDistribution from_law(const oracle::Law& law) {
  ExactTraceDistribution out;
  for (const auto& [trace, prob] : law) out.add(BitSeq::parse(trace), prob);
  return out;
}

double max_gap(const ExactTraceDistribution& a, const ExactTraceDistribution& b) {
  double worst = 0.0;
  for (const auto& [t, p] : a.entries()) worst = std::max(worst, std::abs(p - b.probability(t)));
  for (const auto& [t, p] : b.entries()) worst = std::max(worst, std::abs(p - a.probability(t)));
  return worst;
}

double tv(const ExactTraceDistribution& a, const ExactTraceDistribution& b) {
  double sum = 0.0;
  for (const auto& [t, p] : a.entries()) sum += std::abs(p - b.probability(t));
  for (const auto& [t, p] : b.entries())
    if (a.probability(t) == 0.0) sum += p;
  return sum / 2;
}

}  // namespace

TEST_CASE("bit sequences round trip and order lexicographically") {
  const BitSeq a = BitSeq::parse("0110");
  CHECK(a.to_string() == "0110");
  CHECK(a.count() == 2);
  CHECK(a.rotated(1).to_string() == "1100");
  CHECK(BitSeq::parse("0") < BitSeq::parse("1"));
  CHECK(BitSeq::parse("01") < BitSeq::parse("011"));
  CHECK(BitSeq::parse("0111") < BitSeq::parse("1000"));
  CHECK_THROWS_AS(BitSeq::parse("012"), Error);

  std::string long_text;
  for (int i = 0; i < 150; ++i) long_text += (i * 7 % 3 == 0) ? '1' : '0';
  const BitSeq longer = BitSeq::parse(long_text);
  CHECK(longer.to_string() == long_text);
  CHECK(longer.rotated(70).to_string() == oracle::rotate(long_text, 70));
}

TEST_CASE("canonical forms") {
  CHECK(canonical(cs("1100")).to_string() == "0011");
  CHECK(canonical(cs("0000")).to_string() == "0000");
  CHECK(canonical(cs("101")).to_string() == "011");

  for (std::size_t n = 1; n <= 9; ++n) {
    for (const auto& s : oracle::all_strings(n)) {
      const auto x = cs(s.c_str());
      const auto c = canonical(x);
      CHECK(c.to_string() == oracle::min_rotation(s));
      CHECK(canonical(c) == c);
      CHECK(canonical(x.rotated(n / 2 + 1)) == c);
    }
  }
  // Strings longer than a machine word take the general path.
  std::string s(97, '0');
  for (std::size_t i = 0; i < s.size(); i += 5) s[i] = '1';
  s[40] = '1';
  CHECK(canonical(cs(s.c_str())).to_string() == oracle::min_rotation(s));
  CHECK(cyclically_equal(cs("110"), cs("011")));
  CHECK_FALSE(cyclically_equal(cs("1100"), cs("1010")));
}

TEST_CASE("canonical enumeration counts necklaces") {
  // Binary necklace counts.
  const std::size_t expected[] = {0, 2, 3, 4, 6, 8, 14, 20, 36, 60, 108, 188, 352};
  for (std::size_t n = 1; n <= 12; ++n) CHECK(all_canonical_strings(n).size() == expected[n]);
  CHECK_THROWS_AS(all_canonical_strings(25), Error);
}

TEST_CASE("channel parameters") {
  const ChannelParams params(0.3);
  CHECK(params.p() + params.q() == 1.0);
  CHECK_THROWS_AS(ChannelParams(0.0), Error);
  CHECK_THROWS_AS(ChannelParams(1.0), Error);
  CHECK_THROWS_AS(CircularString{BitSeq{}}, Error);
}

TEST_CASE("exact trace law: small examples") {
  const auto one = exact_trace_distribution(cs("1"), ChannelParams(0.3));
  CHECK(one.probability(BitSeq::parse("1")) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(one.probability(BitSeq()) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(one.size() == 2);

  const auto ones = exact_trace_distribution(cs("11"), ChannelParams(0.5));
  CHECK(ones.probability(BitSeq::parse("11")) == doctest::Approx(0.25));
  CHECK(ones.probability(BitSeq::parse("1")) == doctest::Approx(0.5));
  CHECK(ones.probability(BitSeq()) == doctest::Approx(0.25));

  const auto mixed = exact_trace_distribution(cs("10"), ChannelParams(0.5));
  CHECK(mixed.size() == 5);
  CHECK(mixed.probability(BitSeq::parse("10")) == doctest::Approx(0.125));
  CHECK(mixed.probability(BitSeq::parse("01")) == doctest::Approx(0.125));
  CHECK(mixed.probability(BitSeq::parse("1")) == doctest::Approx(0.25));
  CHECK(mixed.probability(BitSeq::parse("0")) == doctest::Approx(0.25));
  CHECK(mixed.probability(BitSeq()) == doctest::Approx(0.25));

  CHECK_THROWS_AS(exact_trace_distribution(CircularString(BitSeq(21)), ChannelParams(0.5)), Error);
}

TEST_CASE("exact trace law matches string enumeration") {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (const auto& s : oracle::all_strings(n)) {
      for (double q : {0.2, 0.5}) {
        const auto lib = exact_trace_distribution(cs(s.c_str()), ChannelParams(q));
        const auto ref = from_law(oracle::circular_law(s, q));
        CHECK(max_gap(lib, ref) < 1e-14);
        const auto lin = exact_linear_trace_distribution(BitSeq::parse(s), ChannelParams(q));
        CHECK(max_gap(lin, from_law(oracle::linear_law(s, q))) < 1e-14);
      }
    }
  }
}

TEST_CASE("exact trace law: total mass and rotation invariance") {
  for (std::size_t n = 1; n <= 10; ++n) {
    for (const auto& x : all_canonical_strings(n)) {
      for (double q : {0.2, 0.5, 0.8}) {
        const ChannelParams params(q);
        const auto law = exact_trace_distribution(x, params);
        CHECK(std::abs(law.total_mass() - 1.0) < 1e-12);
        for (const auto& [trace, prob] : law.entries()) CHECK(trace.size() <= n);
        if (n <= 6) {
          for (std::size_t j = 1; j < n; ++j) {
            CHECK(max_gap(law, exact_trace_distribution(x.rotated(j), params)) < 1e-15);
          }
        }
      }
    }
  }
}

TEST_CASE("rotate-then-delete equals reading from the first retained bit") {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (const auto& s : oracle::all_strings(n)) {
      const auto x = cs(s.c_str());
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<bool> retained(n);
        for (std::size_t i = 0; i < n; ++i) retained[i] = (mask >> i) & 1u;
        for (std::size_t r = 0; r < n; ++r) {
          CHECK(read_rotate_then_delete(x, r, retained) == read_from_first_retained(x, r, retained));
        }
      }
    }
  }
}

TEST_CASE("trace generation: zero deletion and single bit") {
  const auto batch = generate_traces(cs("0110"), ChannelParams(1e-300), 7, 4000);
  std::map<std::string, int> seen;
  for (const auto& t : batch) ++seen[t.to_string()];
  CHECK(seen.size() == 4);
  for (const char* r : {"0110", "1100", "1001", "0011"}) {
    CHECK(seen[r] > 900);
    CHECK(seen[r] < 1100);
  }
  const auto single = generate_traces(cs("1"), ChannelParams(0.5), 11, 10000);
  std::size_t kept = 0;
  for (const auto& t : single) {
    CHECK(t.size() <= 1);
    kept += t.size();
  }
  CHECK(kept > 4800);
  CHECK(kept < 5200);
}

TEST_CASE("trace generation matches the exact law") {
  const ChannelParams params(0.5);
  const auto x = cs("101");
  const auto batch = generate_traces(x, params, kDefaultSeed, 1000000);
  CHECK(tv(empirical_distribution(batch), exact_trace_distribution(x, params)) <= 0.01);

  const auto y = cs("11010010");
  const auto batch8 = generate_traces(y, ChannelParams(0.3), 99, 1000000);
  CHECK(tv(empirical_distribution(batch8), exact_trace_distribution(y, ChannelParams(0.3))) <= 0.01);
}

TEST_CASE("trace length is binomial") {
  const std::size_t N = 1000000;
  const double q = 0.35;
  const auto x = cs("1101001110");
  const auto batch = generate_traces(x, ChannelParams(q), 5, N);
  double mean = 0.0;
  for (const auto& t : batch) mean += static_cast<double>(t.size());
  mean /= static_cast<double>(N);
  const double n = 10.0;
  const double p = 1.0 - q;
  CHECK(std::abs(mean - n * p) <= 4.0 * std::sqrt(n * p * q / static_cast<double>(N)));
}

TEST_CASE("batches do not depend on the thread count") {
  const auto x = cs("1100101");
  const auto one = generate_traces(x, ChannelParams(0.4), 123, 5000, 1);
  const auto four = generate_traces(x, ChannelParams(0.4), 123, 5000, 4);
  CHECK(one == four);
  const auto other = generate_traces(x, ChannelParams(0.4), 124, 5000, 1);
  CHECK(one != other);
}

TEST_CASE("padding and unpadding") {
  const auto padded = pad_linear(BitSeq::parse("11"), BitSeq::parse("00"));
  CHECK(padded.circular.to_string() == "1100");
  CHECK(unpad(cs("1100"), BitSeq::parse("00")).to_string() == "11");
  CHECK(unpad(cs("0011"), BitSeq::parse("00")).to_string() == "11");

  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kOk;
  };
  CHECK(code_of([] { unpad(CircularString::parse("1010"), BitSeq::parse("00")); }) ==
        ErrorCode::kPadNotUnique);
  CHECK(code_of([] { unpad(CircularString::parse("0000"), BitSeq::parse("00")); }) ==
        ErrorCode::kPadNotUnique);
  RngStream rng(1);
  CHECK(code_of([&] { pad_linear(BitSeq::parse("101"), 5, rng); }) == ErrorCode::kBadLength);

  const auto tiny = pad_linear(BitSeq::parse("1"), 2, rng);
  CHECK(tiny.circular.size() == 2);
  CHECK(tiny.circular[0] == true);
  CHECK(tiny.pad.size() == 1);

  // Round trip whenever the drawn pad is unique.
  int unique = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RngStream r(seed);
    const BitSeq x = BitSeq::parse(seed % 2 ? "1011" : "0110");
    const auto p = pad_linear(x, 8, r);
    const auto rotated = p.circular.rotated(seed % 8);
    const ErrorCode code = code_of([&] { unpad(rotated, p.pad); });
    if (code == ErrorCode::kOk) {
      CHECK(unpad(rotated, p.pad) == x);
      ++unique;
    } else {
      CHECK(code == ErrorCode::kPadNotUnique);
    }
  }
  CHECK(unique > 100);
}

TEST_CASE("lifted traces: pad trace appended, then a uniform rotation") {
  const BitSeq x = BitSeq::parse("1101");
  const BitSeq pad = BitSeq::parse("0001");
  const ChannelParams params(0.3);
  const auto linear = generate_linear_traces(x, params, 17, 600000);
  std::vector<Trace> lifted;
  const RngStream root(18);
  for (std::size_t i = 0; i < linear.size(); ++i) {
    RngStream rng = root.substream(i);
    lifted.push_back(lift_linear_trace(linear[i], pad, params, rng));
  }
  const auto target = from_law(oracle::rotated_linear_law("1101" "0001", 0.3));
  CHECK(tv(empirical_distribution(lifted), target) <= 0.01);
  // Close to, but not equal to, the circular law of the padded string.
  const auto circular = exact_trace_distribution(pad_linear(x, pad).circular, params);
  CHECK(tv(target, circular) > 1e-3);
  CHECK(tv(target, circular) < 0.1);
}

TEST_CASE("trace and distribution serialisation") {
  const std::vector<Trace> traces{BitSeq::parse("0101"), BitSeq(), BitSeq::parse("1")};
  std::ostringstream out;
  write_traces_jsonl(out, traces);
  CHECK(out.str() == "{\"bits\":\"0101\",\"idx\":0}\n{\"bits\":\"\",\"idx\":1}\n{\"bits\":\"1\",\"idx\":2}\n");
  std::istringstream in(out.str());
  CHECK(read_traces_jsonl(in) == traces);
  std::istringstream bad("{\"bits\":\"01\"}\nnot json\n");
  CHECK_THROWS_AS(read_traces_jsonl(bad), Error);

  std::ostringstream csv;
  write_distribution_csv(csv, exact_trace_distribution(cs("1"), ChannelParams(0.25)));
  CHECK(csv.str() == "trace,probability\n,0.25\n1,0.75\n");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
}
