/* C interface to the cyclotrace library.
 *
 * Every fallible call returns a ct_status; on failure ct_last_error() holds a
 * message for the calling thread until its next failing call. Bit strings are
 * NUL-terminated '0'/'1' text, index 0 first. String outputs are written into
 * caller buffers: when `out_size` is too small the call fails with
 * CT_INVALID_ARGUMENT and, if `needed` is non-null, stores the required size
 * including the terminator. Handles are opaque and owned by the caller. */
#ifndef CYCLOTRACE_H
#define CYCLOTRACE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CYCLOTRACE_BUILDING)
#define CT_API __declspec(dllexport)
#else
#define CT_API __declspec(dllimport)
#endif
#else
#define CT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ct_status {
  CT_OK = 0,
  CT_INVALID_ARGUMENT = 1,
  CT_INSTANCE_TOO_LARGE = 2,
  CT_BAD_LENGTH = 3,
  CT_PAD_NOT_UNIQUE = 4,
  CT_DEGENERATE_WEIGHT = 5,
  CT_LENGTH_MISMATCH = 6,
  CT_EMPTY_TRACE_STREAM = 7,
  CT_NO_CONDORCET_WINNER = 8,
  CT_NOT_FOUND = 9,
  CT_BAD_FACTORS = 10,
  CT_PATTERN_TOO_LONG = 11,
  CT_BAD_TARGET = 12,
  CT_ILL_CONDITIONED = 13,
  CT_NOT_REGULAR = 14,
  CT_INSUFFICIENT_TRACES = 15,
  CT_ZERO_LIKELIHOOD_BOTH = 16,
  CT_BAD_ARGS = 17,
  CT_IO = 18,
  CT_INTERNAL = 99
} ct_status;

typedef enum ct_verdict { CT_VERDICT_A = 0, CT_VERDICT_B = 1, CT_VERDICT_INDISTINGUISHABLE = 2 } ct_verdict;

typedef struct ct_traces ct_traces;
typedef struct ct_distribution ct_distribution;
typedef struct ct_census ct_census;

CT_API const char* ct_version(void);
CT_API const char* ct_last_error(void);
CT_API const char* ct_status_name(ct_status status);
CT_API uint64_t ct_default_seed(void);

/* ---- strings ---- */

CT_API ct_status ct_canonical(const char* bits, char* out, size_t out_size, size_t* needed);
CT_API ct_status ct_cyclically_equal(const char* a, const char* b, int* equal);
/* Uniform random string of length n drawn from the seed. */
CT_API ct_status ct_random_string(size_t n, uint64_t seed, char* out, size_t out_size,
                                  size_t* needed);
CT_API ct_status ct_de_bruijn(size_t order, char* out, size_t out_size, size_t* needed);

/* ---- trace batches ---- */

CT_API ct_status ct_traces_create(ct_traces** out);
CT_API void ct_traces_free(ct_traces* traces);
CT_API ct_status ct_traces_push(ct_traces* traces, const char* bits);
CT_API size_t ct_traces_count(const ct_traces* traces);
CT_API ct_status ct_traces_get(const ct_traces* traces, size_t index, char* out, size_t out_size,
                               size_t* needed);

/* Circular channel: rotate uniformly, then delete each bit with probability q. */
CT_API ct_status ct_traces_generate(const char* x, double q, uint64_t seed, size_t count,
                                    unsigned threads, ct_traces** out);
/* Rotation-free deletion channel on a linear string. */
CT_API ct_status ct_traces_generate_linear(const char* x, double q, uint64_t seed, size_t count,
                                           unsigned threads, ct_traces** out);
/* JSONL with {"bits": ..., "idx": ...} per line. A path of "-" means stdout/stdin. */
CT_API ct_status ct_traces_write_jsonl(const ct_traces* traces, const char* path);
CT_API ct_status ct_traces_read_jsonl(const char* path, ct_traces** out);

/* ---- trace laws ---- */

CT_API ct_status ct_distribution_exact(const char* x, double q, ct_distribution** out);
CT_API ct_status ct_distribution_empirical(const ct_traces* traces, ct_distribution** out);
CT_API void ct_distribution_free(ct_distribution* d);
CT_API size_t ct_distribution_size(const ct_distribution* d);
/* Entries sorted by length, then lexicographically. */
CT_API ct_status ct_distribution_entry(const ct_distribution* d, size_t index, char* out,
                                       size_t out_size, size_t* needed, double* probability);
CT_API ct_status ct_distribution_total_mass(const ct_distribution* d, double* mass);
/* CSV with header trace,probability. */
CT_API ct_status ct_distribution_write_csv(const ct_distribution* d, const char* path);
CT_API ct_status ct_distribution_distance(const ct_distribution* d1, const ct_distribution* d2,
                                          double* hellinger, double* total_variation);

/* ---- worst-case distinguisher ---- */

typedef struct ct_distinguish_config {
  double L;           /* 0: max(2, ceil(n^(1/3))) */
  size_t grid;        /* 0: 64 (t + 1) n arc points */
  double delta_min;   /* separations at or below are Indistinguishable */
  unsigned threads;
} ct_distinguish_config;

typedef struct ct_distinguish_result {
  ct_verdict verdict;
  int t;
  double z_re;
  double z_im;
  double delta;
  double estimate_re;
  double estimate_im;
  double q_a_re;
  double q_a_im;
  double q_b_re;
  double q_b_im;
  double L;
} ct_distinguish_result;

CT_API void ct_distinguish_config_default(ct_distinguish_config* config);
CT_API ct_status ct_distinguish(const char* a, const char* b, const ct_traces* traces, double q,
                                const ct_distinguish_config* config,
                                ct_distinguish_result* result);
CT_API ct_status ct_ml_distinguish(const char* a, const char* b, const ct_traces* traces,
                                   double q, ct_verdict* verdict);
/* candidates may be NULL (with count 0) for the full tournament at n <= 8. */
CT_API ct_status ct_worst_case_reconstruct(size_t n, const ct_traces* traces, double q,
                                           const ct_distinguish_config* config,
                                           const char* const* candidates, size_t candidate_count,
                                           char* out, size_t out_size, size_t* needed);
CT_API ct_status ct_chernoff_trace_count(const ct_traces* pilot, size_t n, double q, int t,
                                         double z_arg, double L, double delta, double failure,
                                         uint64_t* count);

/* ---- padding reduction ---- */

/* out_circular needs m + 1 bytes, out_pad m - n + 1. */
CT_API ct_status ct_pad_linear(const char* x_linear, size_t m, uint64_t seed, char* out_circular,
                               char* out_pad, size_t out_size);
CT_API ct_status ct_unpad(const char* circular, const char* pad, char* out, size_t out_size,
                          size_t* needed);
/* Reconstructs a linear string of length n from rotation-free traces. */
CT_API ct_status ct_reconstruct_linear(const ct_traces* linear_traces, size_t n, size_t m,
                                       double q, const ct_distinguish_config* config,
                                       uint64_t seed, char* out, size_t out_size,
                                       size_t* needed);

/* ---- average case ---- */

typedef struct ct_kmer_config {
  size_t k;                /* 0: smallest k with 2^(k-1) >= 2n */
  double alpha;            /* 0: 4 / (1 - r) */
  double r;                /* 0: (q + 1) / 2 */
  size_t grid_size;        /* 0: D + 1 */
  size_t traces_per_point; /* 0: batch / grid_size */
  double condition_cap;
  uint64_t boost_seed;
  unsigned threads;
} ct_kmer_config;

CT_API void ct_kmer_config_default(ct_kmer_config* config);
CT_API ct_status ct_census_exact(const char* x, size_t k, ct_census** out);
CT_API ct_status ct_census_recover(const ct_traces* traces, size_t n, double q,
                                   const ct_kmer_config* config, ct_census** out);
CT_API void ct_census_free(ct_census* census);
CT_API size_t ct_census_k(const ct_census* census);
CT_API size_t ct_census_size(const ct_census* census);
/* Entries in lexicographic pattern order. */
CT_API ct_status ct_census_entry(const ct_census* census, size_t index, char* out,
                                 size_t out_size, size_t* needed, int64_t* count);
CT_API ct_status ct_census_glue(const ct_census* census, size_t n, char* out, size_t out_size,
                                size_t* needed);
CT_API ct_status ct_average_case_reconstruct(const ct_traces* traces, size_t n, double q,
                                             const ct_kmer_config* config, char* out,
                                             size_t out_size, size_t* needed);
CT_API ct_status ct_regularity_check(const char* x, size_t k, int* regular);

/* ---- number theory ---- */

/* holds = 1, or holds = 0 with the witness written to a/b (n + 1 bytes each). */
CT_API ct_status ct_nt_verify(size_t n, unsigned threads, int* holds, char* witness_a,
                              char* witness_b, size_t out_size);

typedef struct ct_counterexample_checks {
  int not_cyclic_shifts;
  int ratio_condition_holds;
  int polynomial_identities_hold;
} ct_counterexample_checks;

/* out_a/out_b need a*b*c + 1 bytes. */
CT_API ct_status ct_nt_counterexample(int a, int b, int c, char* out_a, char* out_b,
                                      size_t out_size, ct_counterexample_checks* checks);
/* Fails with CT_NOT_FOUND when no root separates the pair. */
CT_API ct_status ct_find_separating_root(const char* a, const char* b, int64_t* k, int* t);
CT_API ct_status ct_check_ratio_condition(const char* a, const char* b, int64_t k, int* holds);

/* ---- lower bound ---- */

typedef struct ct_lowerbound_row {
  double dsq_paper;       /* sum (mu - nu)^2 over three-ones traces */
  double dsq_hellinger;   /* sum (sqrt mu - sqrt nu)^2 */
  uint64_t sample_bound;  /* floor(log(1/eps) / (9 dsq_hellinger)) */
} ct_lowerbound_row;

CT_API ct_status ct_lowerbound(int n, int kk, double q, double eps, unsigned threads,
                               ct_lowerbound_row* row);
CT_API ct_status ct_conditional_equidistribution(int n, int kk, double q, int* holds);

#ifdef __cplusplus
}
#endif

#endif
