#include "cyclotrace/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "cyclotrace/error.hpp"
#include "parallel.hpp"

namespace cyclotrace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>(mod(static_cast<std::int64_t>(
      (static_cast<__int128>(mod(a, n)) * static_cast<__int128>(mod(b, n))) % n), n));
}

double wrap_angle(double theta) {
  double r = std::remainder(theta, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

}  // namespace

UnitPoint UnitPoint::root(std::int64_t k, std::int64_t n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "root of unity order must be positive");
  UnitPoint out;
  out.order_ = n;
  out.index_ = mod(k, n);
  // Reduce to the symmetric index range before converting to an angle.
  const std::int64_t signed_index = 2 * out.index_ > n ? out.index_ - n : out.index_;
  out.arg_ = kTwoPi * static_cast<double>(signed_index) / static_cast<double>(n);
  if (2 * out.index_ == n) out.arg_ = std::numbers::pi;
  if (out.index_ == 0) {
    out.value_ = Complex(1.0, 0.0);
  } else if (2 * out.index_ == n) {
    out.value_ = Complex(-1.0, 0.0);
  } else if (4 * out.index_ == n) {
    out.value_ = Complex(0.0, 1.0);
  } else if (4 * out.index_ == 3 * n) {
    out.value_ = Complex(0.0, -1.0);
  } else {
    out.value_ = std::polar(1.0, out.arg_);
  }
  return out;
}

UnitPoint UnitPoint::from_angle(double theta) {
  UnitPoint out;
  out.arg_ = wrap_angle(theta);
  out.value_ = std::polar(1.0, out.arg_);
  return out;
}

UnitPoint UnitPoint::pow(std::int64_t e) const {
  if (is_root()) return root(mul_mod(index_, e, order_), order_);
  return from_angle(arg_ * static_cast<double>(e));
}

Complex eval_P(Complex z, const BitSeq& x) {
  Complex sum = 0.0;
  Complex power = z;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) sum += power;
    power *= z;
  }
  return sum;
}

Complex eval_P(const UnitPoint& z, const BitSeq& x) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) sum += z.pow(static_cast<std::int64_t>(i) + 1).value();
  }
  return sum;
}

namespace {

void extend_chains(std::vector<std::uint32_t>& prefix, std::vector<NestedChain>& out) {
  out.push_back(NestedChain{prefix});
  const std::uint32_t last = prefix.back();
  // Proper nonempty subsets of `last`.
  for (std::uint32_t sub = (last - 1) & last; sub != 0; sub = (sub - 1) & last) {
    prefix.push_back(sub);
    extend_chains(prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

const std::vector<NestedChain>& nested_chains(int m) {
  require(m >= 1 && m <= 8, ErrorCode::kInvalidArgument, "nested chains support 1 <= m <= 8");
  static std::mutex lock;
  static std::vector<std::vector<NestedChain>> cache(9);
  std::lock_guard guard(lock);
  auto& chains = cache[static_cast<std::size_t>(m)];
  if (chains.empty()) {
    std::vector<std::uint32_t> prefix{(std::uint32_t{1} << m) - 1};
    extend_chains(prefix, chains);
  }
  return chains;
}

Complex f_chain(const Trace& trace, std::span<const Complex> w) {
  const std::size_t k = w.size();
  if (k == 0) return 1.0;
  std::vector<Complex> acc(k + 1, 0.0);
  acc[0] = 1.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (std::size_t r = 0; r < k; ++r) acc[r] *= w[r];
    if (trace[i]) {
      for (std::size_t r = k; r-- > 0;) acc[r + 1] += acc[r];
    }
  }
  return acc[k];
}

namespace {

struct ChainBuilder {
  std::vector<Complex> values;        // distinct entries of Z
  std::vector<int> multiplicity;      // how often each occurs
  double p;
  double q;
  std::vector<double> factorial;

  struct Partial {
    Complex coefficient;
    std::vector<Complex> w;
  };

  Complex product(const std::vector<int>& counts) const {
    Complex out = 1.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      for (int e = 0; e < counts[j]; ++e) out *= values[j];
    }
    return out;
  }

  // `remaining` is B_r as a count vector over the distinct values.
  template <class Emit>
  void walk(const std::vector<int>& remaining, Partial& partial, Emit& emit) const {
    const Complex z_b = product(remaining);
    const Complex w = (z_b - q) / p;
    if (std::abs(w) < 1e-12) {
      fail(ErrorCode::kDegenerateWeight, "chain weight vanishes: some product of Z equals q");
    }
    const Complex saved = partial.coefficient;
    partial.coefficient *= z_b / (w * p);
    partial.w.push_back(w);
    // Choose C_r = B_r \ B_{r+1}: every nonzero count vector below `remaining`.
    std::vector<int> take(remaining.size(), 0);
    while (true) {
      std::size_t j = 0;
      while (j < take.size() && take[j] == remaining[j]) take[j++] = 0;
      if (j == take.size()) break;
      ++take[j];
      double denom = 1.0;
      std::vector<int> rest(remaining.size());
      bool empty = true;
      for (std::size_t i = 0; i < take.size(); ++i) {
        denom *= factorial[static_cast<std::size_t>(take[i])];
        rest[i] = remaining[i] - take[i];
        empty = empty && rest[i] == 0;
      }
      const Complex before = partial.coefficient;
      partial.coefficient /= denom;
      if (empty) {
        emit(partial);
      } else {
        walk(rest, partial, emit);
      }
      partial.coefficient = before;
    }
    partial.w.pop_back();
    partial.coefficient = saved;
  }
};

}  // namespace

ChainEstimator::ChainEstimator(std::span<const Complex> z, const ChannelParams& params) {
  require(!z.empty(), ErrorCode::kInvalidArgument, "estimator needs at least one point");
  ChainBuilder builder;
  builder.p = params.p();
  builder.q = params.q();
  for (const Complex& v : z) {
    const auto it = std::find(builder.values.begin(), builder.values.end(), v);
    if (it == builder.values.end()) {
      builder.values.push_back(v);
      builder.multiplicity.push_back(1);
    } else {
      ++builder.multiplicity[static_cast<std::size_t>(it - builder.values.begin())];
    }
  }
  builder.factorial.assign(z.size() + 1, 1.0);
  for (std::size_t i = 1; i <= z.size(); ++i) {
    builder.factorial[i] = builder.factorial[i - 1] * static_cast<double>(i);
  }
  double mu_factorials = 1.0;
  for (int mu : builder.multiplicity) mu_factorials *= builder.factorial[static_cast<std::size_t>(mu)];

  ChainBuilder::Partial partial{Complex(mu_factorials, 0.0), {}};
  auto emit = [this](const ChainBuilder::Partial& done) {
    terms_.push_back(Term{done.coefficient, done.w});
  };
  builder.walk(builder.multiplicity, partial, emit);
}

Complex ChainEstimator::operator()(const Trace& trace) const {
  Complex sum = 0.0;
  for (const Term& term : terms_) sum += term.coefficient * f_chain(trace, term.w);
  return sum;
}

Complex g_m(const Trace& trace, std::span<const Complex> z, const ChannelParams& params) {
  return ChainEstimator(z, params)(trace);
}

void EstimatorQuery::validate() const {
  require(t == 2 || t == 3 || t == 5, ErrorCode::kInvalidArgument,
          "exponent t must be 2, 3 or 5");
  require(L >= 2.0, ErrorCode::kInvalidArgument, "arc parameter L must be at least 2");
  require(std::abs(z.arg()) <= 1.0 / L + 1e-12, ErrorCode::kInvalidArgument,
          "query point lies outside the arc |arg z| <= 1/L");
}

std::vector<Complex> query_vector(const EstimatorQuery& query) {
  std::vector<Complex> out(static_cast<std::size_t>(query.t), query.z.value());
  out.push_back(query.z.pow(-query.t).value());
  return out;
}

namespace {

ChainEstimator make_chain(const EstimatorQuery& query, const ChannelParams& params) {
  query.validate();
  const auto z = query_vector(query);
  return ChainEstimator(z, params);
}

}  // namespace

HtEstimator::HtEstimator(const EstimatorQuery& query, std::size_t n, const ChannelParams& params)
    : scale_(static_cast<double>(n) *
             query.z.pow(static_cast<std::int64_t>(query.t) * static_cast<std::int64_t>(n)).value()),
      g_(make_chain(query, params)) {}

Complex h_t(const Trace& trace, const EstimatorQuery& query, std::size_t n,
            const ChannelParams& params) {
  return HtEstimator(query, n, params)(trace);
}

namespace {

// P(z; x^{(j)}) for every rotation j, given the powers z^1..z^n.
std::vector<Complex> rotation_sums(const BitSeq& x, const std::vector<Complex>& powers) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[(i + j) % n]) sum += powers[i];
    }
    out[j] = sum;
  }
  return out;
}

Complex q_t_from_powers(const BitSeq& x, int t, Complex z_tn, const std::vector<Complex>& pw,
                        const std::vector<Complex>& pw_neg_t) {
  const auto p1 = rotation_sums(x, pw);
  const auto p2 = rotation_sums(x, pw_neg_t);
  Complex total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) total += z_tn * std::pow(p1[j], t) * p2[j];
  return total;
}

std::vector<Complex> powers_of(Complex z, std::size_t n) {
  std::vector<Complex> out(n);
  Complex power = z;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = power;
    power *= z;
  }
  return out;
}

std::vector<Complex> powers_of(const UnitPoint& z, std::size_t n) {
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = z.pow(static_cast<std::int64_t>(i) + 1).value();
  return out;
}

}  // namespace

Complex Q_t_exact(Complex z, const CircularString& x, int t) {
  const std::size_t n = x.size();
  const Complex z_neg_t = std::pow(z, -t);
  const Complex z_tn = std::pow(z, t * static_cast<int>(n));
  return q_t_from_powers(x.bits(), t, z_tn, powers_of(z, n), powers_of(z_neg_t, n));
}

Complex Q_t_exact(const UnitPoint& z, const CircularString& x, int t) {
  const std::size_t n = x.size();
  const Complex z_tn = z.pow(static_cast<std::int64_t>(t) * static_cast<std::int64_t>(n)).value();
  return q_t_from_powers(x.bits(), t, z_tn, powers_of(z, n), powers_of(z.pow(-t), n));
}

TraceHistogram::TraceHistogram(std::span<const Trace> traces) {
  std::unordered_map<Trace, std::uint64_t> counts;
  for (const auto& trace : traces) ++counts[trace];
  for (const auto& [trace, count] : counts) add(trace, count);
}

void TraceHistogram::add(const Trace& trace, std::uint64_t count) {
  counts_[trace] += count;
  total_ += count;
}

namespace {

Complex histogram_mean(const TraceHistogram& traces, const HtEstimator& h, unsigned threads) {
  require(!traces.empty(), ErrorCode::kEmptyTraceStream, "empty trace batch");
  std::vector<const std::pair<const Trace, std::uint64_t>*> entries;
  entries.reserve(traces.counts().size());
  for (const auto& entry : traces.counts()) entries.push_back(&entry);
  std::vector<Complex> values(entries.size());
  detail::parallel_for(entries.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = h(entries[i]->first);
  });
  // Sequential reduction in map order.
  Complex sum = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    sum += values[i] * static_cast<double>(entries[i]->second);
  }
  return sum / static_cast<double>(traces.total());
}

}  // namespace

Complex average_h_t(const TraceHistogram& traces, const EstimatorQuery& query, std::size_t n,
                    const ChannelParams& params, unsigned threads) {
  return histogram_mean(traces, HtEstimator(query, n, params), threads);
}

double default_arc_parameter(std::size_t n) {
  return std::max(2.0, std::ceil(std::cbrt(static_cast<double>(n)) - 1e-12));
}

std::vector<UnitPoint> search_grid(std::size_t n, double L, std::size_t arc_points) {
  require(n >= 1, ErrorCode::kInvalidArgument, "grid needs n >= 1");
  require(L >= 2.0, ErrorCode::kInvalidArgument, "arc parameter L must be at least 2");
  std::vector<UnitPoint> out;
  const double half_width = 1.0 / L;
  for (std::size_t k = 0; k < n; ++k) {
    const UnitPoint w = UnitPoint::root(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n));
    if (std::abs(w.arg()) <= half_width) out.push_back(w);
  }
  if (arc_points == 1) {
    out.push_back(UnitPoint::from_angle(0.0));
  } else {
    for (std::size_t j = 0; j < arc_points; ++j) {
      const double theta = -half_width + 2.0 * half_width * static_cast<double>(j) /
                                             static_cast<double>(arc_points - 1);
      out.push_back(UnitPoint::from_angle(theta));
    }
  }
  return out;
}

SeparationTable::SeparationTable(std::size_t n, const DistinguishConfig& config)
    : n_(n), L_(config.L > 0.0 ? config.L : default_arc_parameter(n)), exponents_(config.exponents) {
  require(!exponents_.empty(), ErrorCode::kInvalidArgument, "no exponents configured");
  for (int t : exponents_) {
    require(t == 2 || t == 3 || t == 5, ErrorCode::kInvalidArgument,
            "exponent t must be 2, 3 or 5");
    const std::size_t arc =
        config.grid > 0 ? config.grid : 64 * static_cast<std::size_t>(t + 1) * n;
    grids_.push_back(search_grid(n, L_, arc));
  }
}

std::vector<std::vector<Complex>> SeparationTable::evaluate(const CircularString& x) const {
  require(x.size() == n_, ErrorCode::kLengthMismatch, "candidate length differs from table");
  std::vector<std::vector<Complex>> out(exponents_.size());
  for (std::size_t s = 0; s < exponents_.size(); ++s) {
    out[s].reserve(grids_[s].size());
    for (const auto& z : grids_[s]) out[s].push_back(Q_t_exact(z, x, exponents_[s]));
  }
  return out;
}

namespace {

struct SeparationIndex {
  std::size_t slot = 0;
  std::size_t point = 0;
  double delta = -1.0;
};

SeparationIndex best_index(const std::vector<std::vector<Complex>>& va,
                           const std::vector<std::vector<Complex>>& vb) {
  SeparationIndex best;
  for (std::size_t s = 0; s < va.size(); ++s) {
    for (std::size_t j = 0; j < va[s].size(); ++j) {
      const double d = std::abs(va[s][j] - vb[s][j]);
      if (d > best.delta) best = SeparationIndex{s, j, d};
    }
  }
  return best;
}

Separation to_separation(const SeparationTable& table, const SeparationIndex& idx,
                         const std::vector<std::vector<Complex>>& va,
                         const std::vector<std::vector<Complex>>& vb) {
  Separation out;
  out.t = table.exponents()[idx.slot];
  out.z = table.grid(idx.slot)[idx.point];
  out.delta = idx.delta;
  out.q_a = va[idx.slot][idx.point];
  out.q_b = vb[idx.slot][idx.point];
  return out;
}

}  // namespace

Separation best_separation(const SeparationTable& table,
                           const std::vector<std::vector<Complex>>& values_a,
                           const std::vector<std::vector<Complex>>& values_b) {
  return to_separation(table, best_index(values_a, values_b), values_a, values_b);
}

Separation search_separation(const CircularString& a, const CircularString& b,
                             const DistinguishConfig& config) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch, "candidates differ in length");
  const SeparationTable table(a.size(), config);
  return best_separation(table, table.evaluate(a), table.evaluate(b));
}

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::kA:
      return "A";
    case Verdict::kB:
      return "B";
    case Verdict::kIndistinguishable:
      return "Indistinguishable";
  }
  return "?";
}

Verdict closer_candidate(const CircularString& a, const CircularString& b, Complex estimate,
                         Complex q_a, Complex q_b) {
  const double da = std::abs(estimate - q_a);
  const double db = std::abs(estimate - q_b);
  if (da < db) return Verdict::kA;
  if (db < da) return Verdict::kB;
  return canonical(a) <= canonical(b) ? Verdict::kA : Verdict::kB;
}

DistinguishResult distinguish(const CircularString& a, const CircularString& b,
                              const TraceHistogram& traces, const ChannelParams& params,
                              const DistinguishConfig& config) {
  require(a.size() == b.size(), ErrorCode::kLengthMismatch, "candidates differ in length");
  require(!traces.empty(), ErrorCode::kEmptyTraceStream, "empty trace batch");
  DistinguishResult out;
  const SeparationTable table(a.size(), config);
  out.L = table.L();
  out.separation = best_separation(table, table.evaluate(a), table.evaluate(b));
  if (out.separation.delta <= config.delta_min) return out;
  const EstimatorQuery query{out.separation.t, out.separation.z, out.L};
  out.estimate = average_h_t(traces, query, a.size(), params, config.threads);
  out.verdict = closer_candidate(a, b, out.estimate, out.separation.q_a, out.separation.q_b);
  return out;
}

DistinguishResult distinguish(const CircularString& a, const CircularString& b,
                              std::span<const Trace> traces, const ChannelParams& params,
                              const DistinguishConfig& config) {
  return distinguish(a, b, TraceHistogram(traces), params, config);
}

CircularString worst_case_reconstruct(std::size_t n, const TraceHistogram& traces,
                                      const ChannelParams& params,
                                      const DistinguishConfig& config,
                                      std::span<const CircularString> candidates) {
  require(n >= 1, ErrorCode::kInvalidArgument, "length must be positive");
  require(!traces.empty(), ErrorCode::kEmptyTraceStream, "empty trace batch");
  std::vector<CircularString> pool;
  if (candidates.empty()) {
    require(n <= 8, ErrorCode::kInstanceTooLarge,
            "full tournament supports n <= 8; pass a candidate set for larger n");
    pool = all_canonical_strings(n);
  } else {
    for (const auto& c : candidates) {
      require(c.size() == n, ErrorCode::kLengthMismatch, "candidate length differs from n");
      pool.push_back(canonical(c));
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }
  if (pool.size() == 1) return pool.front();

  const SeparationTable table(n, config);
  std::vector<std::vector<std::vector<Complex>>> values(pool.size());
  detail::parallel_for(pool.size(), config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) values[i] = table.evaluate(pool[i]);
  });

  // Batch means are shared across pairs that select the same grid point.
  std::map<std::pair<std::size_t, std::size_t>, Complex> estimates;
  auto estimate_at = [&](const SeparationIndex& idx) {
    const auto key = std::make_pair(idx.slot, idx.point);
    const auto it = estimates.find(key);
    if (it != estimates.end()) return it->second;
    const EstimatorQuery query{table.exponents()[idx.slot], table.grid(idx.slot)[idx.point],
                               table.L()};
    const Complex mean = average_h_t(traces, query, n, params, config.threads);
    estimates.emplace(key, mean);
    return mean;
  };
  // Outcome per unordered pair: 0 lower index wins, 1 higher wins, 2 neither.
  std::map<std::pair<std::size_t, std::size_t>, int> decided;
  auto beats = [&](std::size_t i, std::size_t j) {
    const auto key = std::make_pair(std::min(i, j), std::max(i, j));
    auto it = decided.find(key);
    if (it == decided.end()) {
      const auto& va = values[key.first];
      const auto& vb = values[key.second];
      const SeparationIndex idx = best_index(va, vb);
      int outcome = 2;
      if (idx.delta > config.delta_min) {
        outcome = closer_candidate(pool[key.first], pool[key.second], estimate_at(idx),
                                   va[idx.slot][idx.point],
                                   vb[idx.slot][idx.point]) == Verdict::kA
                      ? 0
                      : 1;
      }
      it = decided.emplace(key, outcome).first;
    }
    if (it->second == 2) return false;
    return (i == key.first) == (it->second == 0);
  };

  std::size_t champion = 0;
  for (std::size_t i = 1; i < pool.size(); ++i) {
    if (!beats(champion, i)) champion = i;
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (i != champion && !beats(champion, i)) {
      fail(ErrorCode::kNoCondorcetWinner,
           "no candidate wins every pairwise comparison; more traces are needed");
    }
  }
  return pool[champion];
}

double max_abs_h_t(const TraceHistogram& traces, const EstimatorQuery& query, std::size_t n,
                   const ChannelParams& params) {
  require(!traces.empty(), ErrorCode::kEmptyTraceStream, "empty trace batch");
  const HtEstimator h(query, n, params);
  double best = 0.0;
  for (const auto& [trace, count] : traces.counts()) best = std::max(best, std::abs(h(trace)));
  return best;
}

std::uint64_t chernoff_trace_count(double max_abs_h, double delta, double failure) {
  require(delta > 0.0, ErrorCode::kBadArgs, "separation must be positive");
  require(failure > 0.0 && failure < 1.0, ErrorCode::kBadArgs,
          "failure probability must lie in (0, 1)");
  require(max_abs_h >= 0.0, ErrorCode::kBadArgs, "max |h| must be non-negative");
  const double ratio = 2.0 * max_abs_h / delta;
  return static_cast<std::uint64_t>(std::ceil(ratio * ratio * std::log(2.0 / failure)));
}

LinearReconstruction reconstruct_linear_by_padding(std::span<const Trace> linear_traces,
                                                   std::size_t n, std::size_t m,
                                                   const ChannelParams& params,
                                                   const DistinguishConfig& config,
                                                   std::uint64_t seed, int attempts) {
  require(n >= 1, ErrorCode::kBadLength, "linear length must be positive");
  require(m >= 2 * n, ErrorCode::kBadLength, "padded length m must be at least 2n");
  require(!linear_traces.empty(), ErrorCode::kEmptyTraceStream, "empty trace batch");
  require(attempts >= 1, ErrorCode::kInvalidArgument, "attempts must be positive");
  std::optional<Error> last;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    RngStream pad_rng(seed, 2 * static_cast<std::uint64_t>(attempt));
    BitSeq pad(m - n);
    for (std::size_t i = 0; i < pad.size(); ++i) pad.set(i, (pad_rng() >> 63) != 0);
    const RngStream lift_root(seed, 2 * static_cast<std::uint64_t>(attempt) + 1);
    TraceHistogram lifted;
    for (std::size_t i = 0; i < linear_traces.size(); ++i) {
      RngStream rng = lift_root.substream(i);
      lifted.add(lift_linear_trace(linear_traces[i], pad, params, rng));
    }
    try {
      const CircularString circular = worst_case_reconstruct(m, lifted, params, config);
      BitSeq linear = unpad(circular, pad);
      return LinearReconstruction{std::move(linear), circular, pad, attempt + 1};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPadNotUnique && e.code() != ErrorCode::kNoCondorcetWinner) throw;
      last = e;
    }
  }
  throw *last;
}

}  // namespace cyclotrace
