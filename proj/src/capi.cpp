#include "cyclotrace/cyclotrace.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "cyclotrace/channel.hpp"
#include "cyclotrace/cyclotomic.hpp"
#include "cyclotrace/error.hpp"
#include "cyclotrace/estimator.hpp"
#include "cyclotrace/kmer.hpp"
#include "cyclotrace/oracle.hpp"

struct ct_traces {
  std::vector<cyclotrace::Trace> items;
};

struct ct_distribution {
  std::vector<std::pair<cyclotrace::BitSeq, double>> entries;
  cyclotrace::ExactTraceDistribution law;
};

struct ct_census {
  cyclotrace::KmerCensus census;
  std::vector<std::pair<cyclotrace::BitSeq, std::int64_t>> entries;
};

namespace {

using namespace cyclotrace;

thread_local std::string last_error;

ct_status record(ct_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
ct_status guarded(Body&& body) {
  try {
    body();
    return CT_OK;
  } catch (const Error& e) {
    return record(static_cast<ct_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(CT_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(CT_INTERNAL, e.what());
  }
}

void need(const void* ptr, const char* name) {
  if (ptr == nullptr) fail(ErrorCode::kInvalidArgument, std::string("null pointer: ") + name);
}

void copy_out(const std::string& text, char* out, std::size_t out_size, std::size_t* needed) {
  if (needed != nullptr) *needed = text.size() + 1;
  if (out == nullptr || out_size < text.size() + 1) {
    fail(ErrorCode::kInvalidArgument, "output buffer needs " + std::to_string(text.size() + 1) +
                                          " bytes, got " + std::to_string(out_size));
  }
  std::memcpy(out, text.c_str(), text.size() + 1);
}

CircularString circular(const char* bits, const char* name) {
  need(bits, name);
  return CircularString::parse(bits);
}

DistinguishConfig to_cpp(const ct_distinguish_config* config) {
  DistinguishConfig out;
  if (config != nullptr) {
    out.L = config->L;
    out.grid = config->grid;
    out.delta_min = config->delta_min;
    out.threads = config->threads;
  }
  return out;
}

KmerConfig to_cpp(const ct_kmer_config* config) {
  KmerConfig out;
  if (config != nullptr) {
    out.k = config->k;
    out.alpha = config->alpha;
    out.r = config->r;
    out.grid_size = config->grid_size;
    out.traces_per_point = config->traces_per_point;
    out.condition_cap = config->condition_cap;
    out.boost_seed = config->boost_seed;
    out.threads = config->threads;
  }
  return out;
}

ct_verdict to_c(Verdict v) {
  switch (v) {
    case Verdict::kA:
      return CT_VERDICT_A;
    case Verdict::kB:
      return CT_VERDICT_B;
    case Verdict::kIndistinguishable:
      break;
  }
  return CT_VERDICT_INDISTINGUISHABLE;
}

}  // namespace

extern "C" {

const char* ct_version(void) { return "0.1.0"; }

const char* ct_last_error(void) { return last_error.c_str(); }

const char* ct_status_name(ct_status status) {
  return error_code_name(static_cast<ErrorCode>(status));
}

uint64_t ct_default_seed(void) { return kDefaultSeed; }

ct_status ct_canonical(const char* bits, char* out, size_t out_size, size_t* needed) {
  return guarded([&] { copy_out(canonical(circular(bits, "bits")).to_string(), out, out_size, needed); });
}

ct_status ct_cyclically_equal(const char* a, const char* b, int* equal) {
  return guarded([&] {
    need(equal, "equal");
    *equal = cyclically_equal(circular(a, "a"), circular(b, "b")) ? 1 : 0;
  });
}

ct_status ct_random_string(size_t n, uint64_t seed, char* out, size_t out_size, size_t* needed) {
  return guarded([&] {
    require(n >= 1, ErrorCode::kInvalidArgument, "length must be positive");
    RngStream rng(seed, 0x7374726eull);
    BitSeq bits(n);
    for (std::size_t i = 0; i < n; ++i) bits.set(i, (rng() >> 63) != 0);
    copy_out(bits.to_string(), out, out_size, needed);
  });
}

ct_status ct_de_bruijn(size_t order, char* out, size_t out_size, size_t* needed) {
  return guarded([&] { copy_out(de_bruijn(order).to_string(), out, out_size, needed); });
}

ct_status ct_traces_create(ct_traces** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ct_traces;
  });
}

void ct_traces_free(ct_traces* traces) { delete traces; }

ct_status ct_traces_push(ct_traces* traces, const char* bits) {
  return guarded([&] {
    need(traces, "traces");
    need(bits, "bits");
    traces->items.push_back(BitSeq::parse(bits));
  });
}

size_t ct_traces_count(const ct_traces* traces) { return traces == nullptr ? 0 : traces->items.size(); }

ct_status ct_traces_get(const ct_traces* traces, size_t index, char* out, size_t out_size,
                        size_t* needed) {
  return guarded([&] {
    need(traces, "traces");
    require(index < traces->items.size(), ErrorCode::kInvalidArgument, "trace index out of range");
    copy_out(traces->items[index].to_string(), out, out_size, needed);
  });
}

ct_status ct_traces_generate(const char* x, double q, uint64_t seed, size_t count,
                             unsigned threads, ct_traces** out) {
  return guarded([&] {
    need(out, "out");
    const CircularString source = circular(x, "x");
    auto batch = std::make_unique<ct_traces>();
    batch->items = generate_traces(source, ChannelParams(q), seed, count, threads);
    *out = batch.release();
  });
}

ct_status ct_traces_generate_linear(const char* x, double q, uint64_t seed, size_t count,
                                    unsigned threads, ct_traces** out) {
  return guarded([&] {
    need(out, "out");
    need(x, "x");
    const BitSeq source = BitSeq::parse(x);
    auto batch = std::make_unique<ct_traces>();
    batch->items = generate_linear_traces(source, ChannelParams(q), seed, count, threads);
    *out = batch.release();
  });
}

ct_status ct_traces_write_jsonl(const ct_traces* traces, const char* path) {
  return guarded([&] {
    need(traces, "traces");
    need(path, "path");
    if (std::strcmp(path, "-") == 0) {
      write_traces_jsonl(std::cout, traces->items);
      std::cout.flush();
      return;
    }
    std::ofstream file(path);
    require(file.good(), ErrorCode::kIo, std::string("cannot open ") + path + " for writing");
    write_traces_jsonl(file, traces->items);
    require(file.good(), ErrorCode::kIo, std::string("write to ") + path + " failed");
  });
}

ct_status ct_traces_read_jsonl(const char* path, ct_traces** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto batch = std::make_unique<ct_traces>();
    if (std::strcmp(path, "-") == 0) {
      batch->items = read_traces_jsonl(std::cin);
    } else {
      std::ifstream file(path);
      require(file.good(), ErrorCode::kIo, std::string("cannot open ") + path);
      batch->items = read_traces_jsonl(file);
    }
    *out = batch.release();
  });
}

namespace {

ct_distribution* wrap_law(ExactTraceDistribution law) {
  auto out = std::make_unique<ct_distribution>();
  out->entries = law.sorted();
  out->law = std::move(law);
  return out.release();
}

}  // namespace

ct_status ct_distribution_exact(const char* x, double q, ct_distribution** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap_law(exact_trace_distribution(circular(x, "x"), ChannelParams(q)));
  });
}

ct_status ct_distribution_empirical(const ct_traces* traces, ct_distribution** out) {
  return guarded([&] {
    need(traces, "traces");
    need(out, "out");
    *out = wrap_law(empirical_distribution(traces->items));
  });
}

void ct_distribution_free(ct_distribution* d) { delete d; }

size_t ct_distribution_size(const ct_distribution* d) { return d == nullptr ? 0 : d->entries.size(); }

ct_status ct_distribution_entry(const ct_distribution* d, size_t index, char* out,
                                size_t out_size, size_t* needed, double* probability) {
  return guarded([&] {
    need(d, "d");
    require(index < d->entries.size(), ErrorCode::kInvalidArgument, "entry index out of range");
    copy_out(d->entries[index].first.to_string(), out, out_size, needed);
    if (probability != nullptr) *probability = d->entries[index].second;
  });
}

ct_status ct_distribution_total_mass(const ct_distribution* d, double* mass) {
  return guarded([&] {
    need(d, "d");
    need(mass, "mass");
    *mass = d->law.total_mass();
  });
}

ct_status ct_distribution_write_csv(const ct_distribution* d, const char* path) {
  return guarded([&] {
    need(d, "d");
    need(path, "path");
    if (std::strcmp(path, "-") == 0) {
      write_distribution_csv(std::cout, d->law);
      std::cout.flush();
      return;
    }
    std::ofstream file(path);
    require(file.good(), ErrorCode::kIo, std::string("cannot open ") + path + " for writing");
    write_distribution_csv(file, d->law);
  });
}

ct_status ct_distribution_distance(const ct_distribution* d1, const ct_distribution* d2,
                                   double* hellinger_out, double* total_variation_out) {
  return guarded([&] {
    need(d1, "d1");
    need(d2, "d2");
    if (hellinger_out != nullptr) *hellinger_out = hellinger(d1->law, d2->law);
    if (total_variation_out != nullptr) *total_variation_out = total_variation(d1->law, d2->law);
  });
}

void ct_distinguish_config_default(ct_distinguish_config* config) {
  if (config == nullptr) return;
  const DistinguishConfig defaults;
  config->L = defaults.L;
  config->grid = defaults.grid;
  config->delta_min = defaults.delta_min;
  config->threads = defaults.threads;
}

ct_status ct_distinguish(const char* a, const char* b, const ct_traces* traces, double q,
                         const ct_distinguish_config* config, ct_distinguish_result* result) {
  return guarded([&] {
    need(traces, "traces");
    need(result, "result");
    const auto r = distinguish(circular(a, "a"), circular(b, "b"), traces->items, ChannelParams(q),
                               to_cpp(config));
    result->verdict = to_c(r.verdict);
    result->t = r.separation.t;
    result->z_re = r.separation.z.value().real();
    result->z_im = r.separation.z.value().imag();
    result->delta = r.separation.delta;
    result->estimate_re = r.estimate.real();
    result->estimate_im = r.estimate.imag();
    result->q_a_re = r.separation.q_a.real();
    result->q_a_im = r.separation.q_a.imag();
    result->q_b_re = r.separation.q_b.real();
    result->q_b_im = r.separation.q_b.imag();
    result->L = r.L;
  });
}

ct_status ct_ml_distinguish(const char* a, const char* b, const ct_traces* traces, double q,
                            ct_verdict* verdict) {
  return guarded([&] {
    need(traces, "traces");
    need(verdict, "verdict");
    *verdict = to_c(ml_distinguish_oracle(circular(a, "a"), circular(b, "b"), traces->items,
                                          ChannelParams(q)));
  });
}

ct_status ct_worst_case_reconstruct(size_t n, const ct_traces* traces, double q,
                                    const ct_distinguish_config* config,
                                    const char* const* candidates, size_t candidate_count,
                                    char* out, size_t out_size, size_t* needed) {
  return guarded([&] {
    need(traces, "traces");
    std::vector<CircularString> pool;
    for (std::size_t i = 0; i < candidate_count; ++i) {
      need(candidates, "candidates");
      pool.push_back(circular(candidates[i], "candidate"));
    }
    const auto result = worst_case_reconstruct(n, TraceHistogram(traces->items), ChannelParams(q),
                                               to_cpp(config), pool);
    copy_out(result.to_string(), out, out_size, needed);
  });
}

ct_status ct_chernoff_trace_count(const ct_traces* pilot, size_t n, double q, int t,
                                  double z_arg, double L, double delta, double failure,
                                  uint64_t* count) {
  return guarded([&] {
    need(pilot, "pilot");
    need(count, "count");
    const EstimatorQuery query{t, UnitPoint::from_angle(z_arg), L};
    const double max_h = max_abs_h_t(TraceHistogram(pilot->items), query, n, ChannelParams(q));
    *count = chernoff_trace_count(max_h, delta, failure);
  });
}

ct_status ct_pad_linear(const char* x_linear, size_t m, uint64_t seed, char* out_circular,
                        char* out_pad, size_t out_size) {
  return guarded([&] {
    need(x_linear, "x_linear");
    RngStream rng(seed);
    const auto padded = pad_linear(BitSeq::parse(x_linear), m, rng);
    copy_out(padded.circular.to_string(), out_circular, out_size, nullptr);
    copy_out(padded.pad.to_string(), out_pad, out_size, nullptr);
  });
}

ct_status ct_unpad(const char* circular_bits, const char* pad, char* out, size_t out_size,
                   size_t* needed) {
  return guarded([&] {
    need(pad, "pad");
    copy_out(unpad(circular(circular_bits, "circular"), BitSeq::parse(pad)).to_string(), out,
             out_size, needed);
  });
}

ct_status ct_reconstruct_linear(const ct_traces* linear_traces, size_t n, size_t m, double q,
                                const ct_distinguish_config* config, uint64_t seed, char* out,
                                size_t out_size, size_t* needed) {
  return guarded([&] {
    need(linear_traces, "linear_traces");
    const auto result = reconstruct_linear_by_padding(linear_traces->items, n, m, ChannelParams(q),
                                                      to_cpp(config), seed);
    copy_out(result.linear.to_string(), out, out_size, needed);
  });
}

void ct_kmer_config_default(ct_kmer_config* config) {
  if (config == nullptr) return;
  const KmerConfig defaults;
  config->k = defaults.k;
  config->alpha = defaults.alpha;
  config->r = defaults.r;
  config->grid_size = defaults.grid_size;
  config->traces_per_point = defaults.traces_per_point;
  config->condition_cap = defaults.condition_cap;
  config->boost_seed = defaults.boost_seed;
  config->threads = defaults.threads;
}

namespace {

ct_census* wrap_census(KmerCensus census) {
  auto out = std::make_unique<ct_census>();
  out->entries.assign(census.counts.begin(), census.counts.end());
  out->census = std::move(census);
  return out.release();
}

}  // namespace

ct_status ct_census_exact(const char* x, size_t k, ct_census** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap_census(census_exact(circular(x, "x"), k));
  });
}

ct_status ct_census_recover(const ct_traces* traces, size_t n, double q,
                            const ct_kmer_config* config, ct_census** out) {
  return guarded([&] {
    need(traces, "traces");
    need(out, "out");
    *out = wrap_census(recover_census(traces->items, n, ChannelParams(q), to_cpp(config)));
  });
}

void ct_census_free(ct_census* census) { delete census; }

size_t ct_census_k(const ct_census* census) { return census == nullptr ? 0 : census->census.k; }

size_t ct_census_size(const ct_census* census) {
  return census == nullptr ? 0 : census->entries.size();
}

ct_status ct_census_entry(const ct_census* census, size_t index, char* out, size_t out_size,
                          size_t* needed, int64_t* count) {
  return guarded([&] {
    need(census, "census");
    require(index < census->entries.size(), ErrorCode::kInvalidArgument, "entry index out of range");
    copy_out(census->entries[index].first.to_string(), out, out_size, needed);
    if (count != nullptr) *count = census->entries[index].second;
  });
}

ct_status ct_census_glue(const ct_census* census, size_t n, char* out, size_t out_size,
                         size_t* needed) {
  return guarded([&] {
    need(census, "census");
    copy_out(glue_census(census->census, n).to_string(), out, out_size, needed);
  });
}

ct_status ct_average_case_reconstruct(const ct_traces* traces, size_t n, double q,
                                      const ct_kmer_config* config, char* out, size_t out_size,
                                      size_t* needed) {
  return guarded([&] {
    need(traces, "traces");
    const auto result = average_case_reconstruct(traces->items, n, ChannelParams(q), to_cpp(config));
    copy_out(result.to_string(), out, out_size, needed);
  });
}

ct_status ct_regularity_check(const char* x, size_t k, int* regular) {
  return guarded([&] {
    need(regular, "regular");
    *regular = regularity_check(circular(x, "x"), k) ? 1 : 0;
  });
}

ct_status ct_nt_verify(size_t n, unsigned threads, int* holds, char* witness_a, char* witness_b,
                       size_t out_size) {
  return guarded([&] {
    need(holds, "holds");
    const auto check = verify_theorem_nt(n, threads);
    *holds = check.holds ? 1 : 0;
    if (check.witness) {
      copy_out(check.witness->first.to_string(), witness_a, out_size, nullptr);
      copy_out(check.witness->second.to_string(), witness_b, out_size, nullptr);
    }
  });
}

ct_status ct_nt_counterexample(int a, int b, int c, char* out_a, char* out_b, size_t out_size,
                               ct_counterexample_checks* checks) {
  return guarded([&] {
    need(checks, "checks");
    const auto result = counterexample(a, b, c);
    copy_out(result.a.to_string(), out_a, out_size, nullptr);
    copy_out(result.b.to_string(), out_b, out_size, nullptr);
    checks->not_cyclic_shifts = result.not_cyclic_shifts ? 1 : 0;
    checks->ratio_condition_holds = result.ratio_condition_holds ? 1 : 0;
    checks->polynomial_identities_hold = result.polynomial_identities_hold ? 1 : 0;
  });
}

ct_status ct_find_separating_root(const char* a, const char* b, int64_t* k, int* t) {
  return guarded([&] {
    need(k, "k");
    need(t, "t");
    const auto root = find_separating_root(circular(a, "a"), circular(b, "b"));
    if (!root) fail(ErrorCode::kNotFound, "no root of unity separates the pair");
    *k = root->k;
    *t = root->t;
  });
}

ct_status ct_check_ratio_condition(const char* a, const char* b, int64_t k, int* holds) {
  return guarded([&] {
    need(holds, "holds");
    *holds = check_ratio_condition(circular(a, "a"), circular(b, "b"), k) ? 1 : 0;
  });
}

ct_status ct_lowerbound(int n, int kk, double q, double eps, unsigned threads,
                        ct_lowerbound_row* row) {
  return guarded([&] {
    need(row, "row");
    const ThreeOnesFamily fam(n, kk, q);
    const auto distance = hellinger_three_ones(fam, threads);
    row->dsq_paper = distance.squared_difference;
    row->dsq_hellinger = distance.hellinger_squared;
    row->sample_bound = sample_lower_bound(distance.hellinger_squared, eps);
  });
}

ct_status ct_conditional_equidistribution(int n, int kk, double q, int* holds) {
  return guarded([&] {
    need(holds, "holds");
    *holds = conditional_equidistribution_check(ThreeOnesFamily(n, kk, q)) ? 1 : 0;
  });
}

}  // extern "C"
