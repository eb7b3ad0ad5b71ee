#include "cyclotrace/cyclotomic.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "cyclotrace/error.hpp"
#include "parallel.hpp"

namespace cyclotrace {

UnitPoint root_of_unity(std::int64_t k, std::int64_t n) { return UnitPoint::root(k, n); }

Complex f_t(const UnitPoint& z, const BitSeq& x, int t) {
  return std::pow(eval_P(z, x), t) * eval_P(z.pow(-t), x);
}

int designated_exponent(std::int64_t k, std::int64_t n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "n must be positive");
  const std::int64_t r = ((k % n) + n) % n;
  if (r == 0) return 2;
  const std::int64_t order = n / std::gcd(n, r);
  for (int candidate = 2;; ++candidate) {
    bool prime = true;
    for (int d = 2; d * d <= candidate; ++d) prime = prime && candidate % d != 0;
    if (prime && order % candidate != 0) return candidate;
  }
}

std::optional<SeparatingRoot> find_separating_root(const CircularString& a,
                                                   const CircularString& b) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch, "strings differ in length");
  const auto n = static_cast<std::int64_t>(a.size());
  constexpr std::array<int, 3> kExponents{2, 3, 5};
  for (std::int64_t k = 0; k < n; ++k) {
    const UnitPoint z = root_of_unity(k, n);
    const int first = designated_exponent(k, n);
    std::vector<int> order;
    if (first == 2 || first == 3 || first == 5) order.push_back(first);
    for (int t : kExponents) {
      if (t != first) order.push_back(t);
    }
    for (int t : order) {
      if (std::abs(f_t(z, a.bits(), t) - f_t(z, b.bits(), t)) > kCyclotomicTolerance) {
        return SeparatingRoot{k, t};
      }
    }
  }
  return std::nullopt;
}

namespace {

// powers[c] = w^c for the n-th roots of unity.
std::vector<Complex> root_powers(std::int64_t n) {
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (std::int64_t c = 0; c < n; ++c) out[static_cast<std::size_t>(c)] = root_of_unity(c, n).value();
  return out;
}

bool ratio_holds(Complex pa, Complex pb, const std::vector<Complex>& powers) {
  if (std::abs(pa) < kCyclotomicTolerance && std::abs(pb) < kCyclotomicTolerance) return true;
  for (const Complex& w : powers) {
    if (std::abs(pa - w * pb) < kCyclotomicTolerance) return true;
  }
  return false;
}

}  // namespace

bool check_ratio_condition(const CircularString& a, const CircularString& b, std::int64_t k) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch, "strings differ in length");
  const auto n = static_cast<std::int64_t>(a.size());
  const UnitPoint z = root_of_unity(k, n);
  return ratio_holds(eval_P(z, a.bits()), eval_P(z, b.bits()), root_powers(n));
}

bool ratio_condition_all_k(const CircularString& a, const CircularString& b) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch, "strings differ in length");
  const auto n = static_cast<std::int64_t>(a.size());
  const auto powers = root_powers(n);
  for (std::int64_t k = 0; k < n; ++k) {
    const UnitPoint z = root_of_unity(k, n);
    if (!ratio_holds(eval_P(z, a.bits()), eval_P(z, b.bits()), powers)) return false;
  }
  return true;
}

TheoremCheck verify_theorem_nt(std::size_t n, unsigned threads) {
  require(n >= 1 && n <= kMaxTheoremLength, ErrorCode::kInstanceTooLarge,
          "brute-force verification supports 1 <= n <= 12");
  const auto strings = all_canonical_strings(n);
  const auto order = static_cast<std::int64_t>(n);
  const auto powers = root_powers(order);
  // sums[i][k] = P(w^k; strings[i]).
  std::vector<std::vector<Complex>> sums(strings.size());
  for (std::size_t i = 0; i < strings.size(); ++i) {
    for (std::int64_t k = 0; k < order; ++k) {
      sums[i].push_back(eval_P(root_of_unity(k, order), strings[i].bits()));
    }
  }
  // First witness partner per row, so the reported pair does not depend on
  // scheduling.
  std::vector<std::size_t> partner(strings.size(), strings.size());
  detail::parallel_for(strings.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < strings.size(); ++j) {
        bool all = true;
        for (std::size_t k = 0; k < n && all; ++k) all = ratio_holds(sums[i][k], sums[j][k], powers);
        if (all) {
          partner[i] = j;
          break;
        }
      }
    }
  });
  TheoremCheck out;
  out.pairs_checked = strings.size() * (strings.size() - 1) / 2;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    if (partner[i] < strings.size()) {
      out.holds = false;
      out.witness.emplace(strings[i], strings[partner[i]]);
      break;
    }
  }
  return out;
}

namespace {

CircularString indicator(const std::vector<int>& positions, int n) {
  BitSeq bits(static_cast<std::size_t>(n));
  for (int p : positions) bits.set(static_cast<std::size_t>(p), true);
  return CircularString(std::move(bits));
}

using Coeffs = std::vector<long long>;

Coeffs poly(const std::vector<int>& exponents, std::size_t degree) {
  Coeffs out(degree + 1, 0);
  for (int e : exponents) ++out[static_cast<std::size_t>(e)];
  return out;
}

}  // namespace

Counterexample counterexample(int a, int b, int c) {
  require(a > 1 && b > 1 && c > 1, ErrorCode::kBadFactors, "factors a, b, c must all exceed 1");
  const int n = a * b * c;
  std::vector<int> set_a;
  std::vector<int> set_b;
  for (int j = 0; j < b; ++j) {
    set_a.push_back(1 + a * j);
    set_b.push_back(1 + a * j);
  }
  for (int j = 0; j < c; ++j) {
    set_a.push_back(a + a * b * j);
    set_b.push_back(a * b * j);
  }
  Counterexample out{indicator(set_a, n), indicator(set_b, n)};
  out.not_cyclic_shifts = !cyclically_equal(out.a, out.b);
  out.ratio_condition_holds = ratio_condition_all_k(out.a, out.b);

  // P - Q = (x^a - 1) sum_{j<c} x^{abj}  and  P - x^a Q = x - x^{1+ab}.
  const std::size_t degree = static_cast<std::size_t>(n + a + a * b);
  const Coeffs p = poly(set_a, degree);
  const Coeffs q = poly(set_b, degree);
  Coeffs lhs1(degree + 1, 0);
  Coeffs rhs1(degree + 1, 0);
  Coeffs lhs2(degree + 1, 0);
  Coeffs rhs2(degree + 1, 0);
  for (std::size_t i = 0; i <= degree; ++i) {
    lhs1[i] = p[i] - q[i];
    lhs2[i] = p[i] - (i >= static_cast<std::size_t>(a) ? q[i - static_cast<std::size_t>(a)] : 0);
  }
  for (int j = 0; j < c; ++j) {
    rhs1[static_cast<std::size_t>(a * b * j + a)] += 1;
    rhs1[static_cast<std::size_t>(a * b * j)] -= 1;
  }
  rhs2[1] += 1;
  rhs2[static_cast<std::size_t>(1 + a * b)] -= 1;
  out.polynomial_identities_hold = lhs1 == rhs1 && lhs2 == rhs2;
  return out;
}

}  // namespace cyclotrace
