#pragma once

// Brute-force reference implementations used as ground truth. They work on
// plain std::string and share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Law = std::map<std::string, double>;

inline std::string rotate(const std::string& x, std::size_t j) {
  const std::size_t n = x.size();
  std::string out(n, '0');
  for (std::size_t i = 0; i < n; ++i) out[i] = x[(i + j) % n];
  return out;
}

inline std::string min_rotation(const std::string& x) {
  std::string best = x;
  for (std::size_t j = 1; j < x.size(); ++j) best = std::min(best, rotate(x, j));
  return best;
}

inline std::vector<std::string> all_strings(std::size_t n) {
  std::vector<std::string> out;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i)
      if ((w >> i) & 1u) s[i] = '1';
    out.push_back(s);
  }
  return out;
}

// Law of the rotation-free deletion channel.
inline Law linear_law(const std::string& x, double q) {
  Law law;
  const std::size_t n = x.size();
  for (std::uint64_t keep = 0; keep < (std::uint64_t{1} << n); ++keep) {
    std::string trace;
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((keep >> i) & 1u) {
        trace += x[i];
        prob *= 1.0 - q;
      } else {
        prob *= q;
      }
    }
    law[trace] += prob;
  }
  return law;
}

// Law of the circular channel: average of the linear laws of all rotations.
inline Law circular_law(const std::string& x, double q) {
  Law law;
  const double n = static_cast<double>(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (const auto& [trace, prob] : linear_law(rotate(x, j), q)) law[trace] += prob / n;
  }
  return law;
}

// Linear traces of x, each rotated by a uniform number of places.
inline Law rotated_linear_law(const std::string& x, double q) {
  Law law;
  for (const auto& [trace, prob] : linear_law(x, q)) {
    if (trace.empty()) {
      law[trace] += prob;
      continue;
    }
    for (std::size_t j = 0; j < trace.size(); ++j)
      law[rotate(trace, j)] += prob / static_cast<double>(trace.size());
  }
  return law;
}

inline Complex P(Complex z, const std::string& x) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] == '1') sum += std::pow(z, static_cast<int>(i + 1));
  return sum;
}

// Direct sum over index tuples i_1 < ... < i_k.
inline Complex f_chain(const std::string& trace, const std::vector<Complex>& w) {
  const std::size_t k = w.size();
  Complex total = 0.0;
  std::vector<std::size_t> idx;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (idx.size() == k) {
      Complex term = 1.0;
      std::size_t prev = 0;
      for (std::size_t r = 0; r < k; ++r) {
        term *= std::pow(w[r], static_cast<int>(idx[r] - prev));
        prev = idx[r];
      }
      total += term;
      return;
    }
    for (std::size_t i = from; i <= trace.size(); ++i) {
      if (trace[i - 1] != '1') continue;
      idx.push_back(i);
      rec(i + 1);
      idx.pop_back();
    }
  };
  rec(1);
  return total;
}

// The estimator summed over explicit set chains of {0..m-1}.
inline Complex g_by_set_chains(const std::string& trace, const std::vector<Complex>& z, double q) {
  const std::size_t m = z.size();
  const double p = 1.0 - q;
  Complex total = 0.0;
  std::vector<std::uint32_t> chain{(std::uint32_t{1} << m) - 1};
  std::function<void()> rec = [&]() {
    Complex coeff = 1.0;
    std::vector<Complex> w;
    for (std::uint32_t set : chain) {
      Complex zb = 1.0;
      for (std::size_t i = 0; i < m; ++i)
        if ((set >> i) & 1u) zb *= z[i];
      const Complex wr = (zb - q) / p;
      coeff *= zb / (p * wr);
      w.push_back(wr);
    }
    total += coeff * f_chain(trace, w);
    const std::uint32_t last = chain.back();
    for (std::uint32_t sub = 1; sub < last; ++sub) {
      if ((sub & last) != sub) continue;
      chain.push_back(sub);
      rec();
      chain.pop_back();
    }
  };
  rec();
  return total;
}

inline Complex Q_t(Complex z, const std::string& x, int t) {
  Complex total = 0.0;
  const int n = static_cast<int>(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const std::string r = rotate(x, j);
    total += std::pow(z, t * n) * std::pow(P(z, r), t) * P(std::pow(z, -t), r);
  }
  return total;
}

// Occurrences of s as a circular subsequence, keyed by span, by enumerating
// all increasing offset tuples from every start.
inline std::vector<std::uint64_t> spans(const std::string& x, const std::string& s) {
  const std::size_t n = x.size();
  const std::size_t k = s.size();
  std::vector<std::uint64_t> out(n + 1, 0);
  for (std::size_t start = 0; start < n; ++start) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (!(mask & 1u)) continue;
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
      std::string picked;
      std::size_t last = 0;
      for (std::size_t o = 0; o < n; ++o) {
        if ((mask >> o) & 1u) {
          picked += x[(start + o) % n];
          last = o;
        }
      }
      if (picked == s) ++out[last + 1];
    }
  }
  return out;
}

inline double hellinger(const Law& a, const Law& b) {
  std::map<std::string, int> keys;
  for (const auto& [k, v] : a) keys[k] = 1;
  for (const auto& [k, v] : b) keys[k] = 1;
  double sum = 0.0;
  for (const auto& [k, unused] : keys) {
    const double pa = a.count(k) ? a.at(k) : 0.0;
    const double pb = b.count(k) ? b.at(k) : 0.0;
    sum += (std::sqrt(pa) - std::sqrt(pb)) * (std::sqrt(pa) - std::sqrt(pb));
  }
  return std::sqrt(sum);
}

}  // namespace oracle
