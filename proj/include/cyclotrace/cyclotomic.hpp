#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "cyclotrace/channel.hpp"
#include "cyclotrace/estimator.hpp"

namespace cyclotrace {

// Numerical zero / nonzero threshold for cyclotomic sums at n <= 12.
inline constexpr double kCyclotomicTolerance = 1e-9;
inline constexpr std::size_t kMaxTheoremLength = 12;

UnitPoint root_of_unity(std::int64_t k, std::int64_t n);

// f_t(z; x) = P(z; x)^t P(z^{-t}; x).
Complex f_t(const UnitPoint& z, const BitSeq& x, int t);

// Smallest prime not dividing n / gcd(n, k); 2 when k = 0 (mod n).
int designated_exponent(std::int64_t k, std::int64_t n);

struct SeparatingRoot {
  std::int64_t k = 0;
  int t = 2;
};

// First k in 0..n-1 (trying the designated exponent first, then the rest of
// {2,3,5}) where f_t(w^k; a) and f_t(w^k; b) differ by more than the
// tolerance. Throws kLengthMismatch.
std::optional<SeparatingRoot> find_separating_root(const CircularString& a,
                                                   const CircularString& b);

// True iff P(w^k; a) = w^c P(w^k; b) for some integer c, or both vanish.
bool check_ratio_condition(const CircularString& a, const CircularString& b, std::int64_t k);
bool ratio_condition_all_k(const CircularString& a, const CircularString& b);

struct TheoremCheck {
  bool holds = true;
  std::optional<std::pair<CircularString, CircularString>> witness;
  std::size_t pairs_checked = 0;
};

// Brute force over pairs of canonical strings of length n.
// Throws kInstanceTooLarge for n > 12.
TheoremCheck verify_theorem_nt(std::size_t n, unsigned threads = 1);

struct Counterexample {
  CircularString a;
  CircularString b;
  bool not_cyclic_shifts = false;
  bool ratio_condition_holds = false;
  bool polynomial_identities_hold = false;
};

// Indicator strings of
//   A = {1, a+1, ..., ab-a+1} u {a, ab+a, ..., abc-ab+a}
//   B = {1, a+1, ..., ab-a+1} u {0, ab, ..., abc-ab}
// on n = abc positions, with the three postconditions evaluated.
// Throws kBadFactors unless a, b, c > 1.
Counterexample counterexample(int a, int b, int c);

}  // namespace cyclotrace
