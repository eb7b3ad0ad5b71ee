#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "cyclotrace/cyclotomic.hpp"
#include "cyclotrace/error.hpp"
#include "oracles.hpp"

using namespace cyclotrace;

namespace {

CircularString cs(const std::string& bits) { return CircularString::parse(bits); }

oracle::Complex omega(std::int64_t k, std::int64_t n) {
  return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
}

// Ratio condition at every k, straight from the definition.
bool ratio_all_k_reference(const std::string& a, const std::string& b) {
  const auto n = static_cast<std::int64_t>(a.size());
  for (std::int64_t k = 0; k < n; ++k) {
    const auto pa = oracle::P(omega(k, n), a);
    const auto pb = oracle::P(omega(k, n), b);
    if (std::abs(pa) < 1e-9 && std::abs(pb) < 1e-9) continue;
    bool found = false;
    for (std::int64_t c = 0; c < n && !found; ++c) found = std::abs(pa - omega(c, n) * pb) < 1e-9;
    if (!found) return false;
  }
  return true;
}

std::string indicator(std::size_t n, std::initializer_list<int> ones) {
  std::string s(n, '0');
  for (int i : ones) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

int prime_factor_count(int n) {
  int count = 0;
  for (int p = 2; n > 1; ++p)
    while (n % p == 0) {
      n /= p;
      ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("roots of unity") {
  CHECK(root_of_unity(0, 5).value() == Complex(1.0));
  CHECK(root_of_unity(2, 4).value() == Complex(-1.0));
  CHECK(std::abs(root_of_unity(1, 3).value() - Complex(-0.5, std::sqrt(3.0) / 2)) < 1e-15);
  CHECK(root_of_unity(7, 5).index() == 2);
  CHECK(root_of_unity(-1, 5).index() == 4);
}

TEST_CASE("designated exponent") {
  CHECK(designated_exponent(0, 6) == 2);
  CHECK(designated_exponent(1, 4) == 3);
  CHECK(designated_exponent(1, 6) == 5);
  CHECK(designated_exponent(2, 6) == 2);
  CHECK(designated_exponent(1, 5) == 2);
  CHECK(designated_exponent(1, 30) == 7);
}

TEST_CASE("separating root examples") {
  const auto r = find_separating_root(cs("1100"), cs("1010"));
  REQUIRE(r.has_value());
  CHECK(r->k == 1);
  CHECK(r->t == 3);
  CHECK_FALSE(find_separating_root(cs("1100"), cs("1100")).has_value());
  CHECK_FALSE(find_separating_root(cs("110"), cs("011")).has_value());
  CHECK_THROWS_AS(find_separating_root(cs("110"), cs("0110")), Error);
}

TEST_CASE("separating root exists iff the pair is not cyclically equal") {
  for (std::size_t n = 2; n <= 10; ++n) {
    if (prime_factor_count(static_cast<int>(n)) > 2) continue;
    const auto strings = all_canonical_strings(n);
    for (std::size_t i = 0; i < strings.size(); ++i) {
      for (std::size_t j = i; j < strings.size(); ++j) {
        const auto b = strings[j].rotated(i % n);
        const bool equal = oracle::min_rotation(strings[i].to_string()) ==
                           oracle::min_rotation(b.to_string());
        const auto found = find_separating_root(strings[i], b);
        CHECK(found.has_value() == !equal);
        if (found) {
          const auto z = root_of_unity(found->k, static_cast<std::int64_t>(n));
          CHECK(std::abs(f_t(z, strings[i].bits(), found->t) - f_t(z, b.bits(), found->t)) > 1e-9);
        }
      }
    }
  }
}

TEST_CASE("ratio condition") {
  for (std::int64_t k = 0; k < 4; ++k) CHECK(check_ratio_condition(cs("1101"), cs("1101"), k));
  CHECK_FALSE(check_ratio_condition(cs("1100"), cs("1010"), 1));
  const auto a = cs(indicator(8, {1, 2, 3, 6}));
  const auto b = cs(indicator(8, {0, 1, 3, 4}));
  for (std::int64_t k = 0; k < 8; ++k) CHECK(check_ratio_condition(a, b, k));
  CHECK(ratio_condition_all_k(a, b));
  CHECK_FALSE(cyclically_equal(a, b));
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto strings = all_canonical_strings(n);
    for (const auto& x : strings)
      for (const auto& y : strings)
        CHECK(ratio_condition_all_k(x, y) == ratio_all_k_reference(x.to_string(), y.to_string()));
  }
}

TEST_CASE("Galois conjugates of vanishing sums vanish") {
  for (std::size_t n = 2; n <= 9; ++n) {
    const auto strings = all_canonical_strings(n);
    const auto nn = static_cast<std::int64_t>(n);
    for (const auto& x : strings) {
      for (const auto& y : strings) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto yj = y.rotated(j);
          const Complex d = eval_P(root_of_unity(1, nn), x.bits()) - eval_P(root_of_unity(1, nn), yj.bits());
          if (std::abs(d) >= 1e-9) continue;
          for (std::int64_t k = 1; k < nn; ++k) {
            if (std::gcd(k, nn) != 1) continue;
            CHECK(std::abs(eval_P(root_of_unity(k, nn), x.bits()) -
                           eval_P(root_of_unity(k, nn), yj.bits())) < 1e-6);
          }
        }
      }
    }
  }
}

TEST_CASE("brute-force verification for small n") {
  for (std::size_t n : {2, 3, 4, 5, 7, 9}) {
    const auto check = verify_theorem_nt(n);
    CHECK(check.holds);
    CHECK_FALSE(check.witness.has_value());
  }
  // n = 6 has a mirror-image pair meeting the ratio condition at every root:
  // reversal conjugates each sum up to a power of w.
  const auto six = verify_theorem_nt(6);
  CHECK_FALSE(six.holds);
  REQUIRE(six.witness.has_value());
  CHECK(six.witness->first.to_string() == "001011");
  CHECK(six.witness->second.to_string() == "001101");
  CHECK(ratio_all_k_reference("001011", "001101"));
  CHECK(oracle::min_rotation("001011") != oracle::min_rotation("001101"));
  const auto eight = verify_theorem_nt(8, 2);
  CHECK_FALSE(eight.holds);
  REQUIRE(eight.witness.has_value());
  const auto& [wa, wb] = *eight.witness;
  CHECK_FALSE(cyclically_equal(wa, wb));
  CHECK(ratio_all_k_reference(wa.to_string(), wb.to_string()));
  // Same witness with any thread count.
  const auto serial = verify_theorem_nt(8, 1);
  CHECK(serial.witness->first == wa);
  CHECK(serial.witness->second == wb);
  CHECK_THROWS_AS(verify_theorem_nt(13), Error);
}

TEST_CASE("counterexample construction") {
  const auto c = counterexample(2, 2, 2);
  CHECK(c.a.to_string() == "01110010");
  CHECK(c.b.to_string() == "11011000");
  CHECK(c.not_cyclic_shifts);
  CHECK(c.ratio_condition_holds);
  CHECK(c.polynomial_identities_hold);
  CHECK(ratio_all_k_reference(c.a.to_string(), c.b.to_string()));

  const auto d = counterexample(2, 2, 3);
  CHECK(d.a.size() == 12);
  CHECK(d.not_cyclic_shifts);
  CHECK(d.ratio_condition_holds);
  CHECK(d.polynomial_identities_hold);
  CHECK(d.a.weight() == 5);
  CHECK(d.b.weight() == 5);
  CHECK(ratio_all_k_reference(d.a.to_string(), d.b.to_string()));
  CHECK_FALSE(oracle::min_rotation(d.a.to_string()) == oracle::min_rotation(d.b.to_string()));

  const auto e = counterexample(3, 2, 2);
  CHECK(e.not_cyclic_shifts);
  CHECK(e.ratio_condition_holds);
  CHECK(e.polynomial_identities_hold);

  CHECK_THROWS_AS(counterexample(1, 2, 2), Error);
  CHECK_THROWS_AS(counterexample(2, 0, 2), Error);
}
