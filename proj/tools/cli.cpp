// Command-line experiment runner. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclotrace/cyclotrace.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A non-Ok status from the library.
struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ct_status status) {
  if (status == CT_OK) return;
  std::string message = ct_status_name(status);
  const char* detail = ct_last_error();
  if (detail && *detail) message += std::string(": ") + detail;
  // Argument errors caught by the library are still the caller's fault.
  if (status == CT_INVALID_ARGUMENT || status == CT_BAD_ARGS || status == CT_BAD_LENGTH ||
      status == CT_LENGTH_MISMATCH || status == CT_INSTANCE_TOO_LARGE || status == CT_BAD_FACTORS ||
      status == CT_PATTERN_TOO_LONG)
    throw UsageError(message);
  throw LibraryError(message);
}

// Calls f(buffer, size, &needed), growing the buffer once if asked to.
std::string fetch(const std::function<ct_status(char*, std::size_t, std::size_t*)>& f) {
  std::string buf(64, '\0');
  std::size_t needed = 0;
  ct_status status = f(buf.data(), buf.size(), &needed);
  if (status == CT_INVALID_ARGUMENT && needed > buf.size()) {
    buf.assign(needed, '\0');
    status = f(buf.data(), buf.size(), &needed);
  }
  check(status);
  buf.resize(std::char_traits<char>::length(buf.c_str()));
  return buf;
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
std::string num(T v) {
  return std::to_string(v);
}

struct TracesHandle {
  ct_traces* p = nullptr;
  TracesHandle() = default;
  TracesHandle(const TracesHandle&) = delete;
  TracesHandle& operator=(const TracesHandle&) = delete;
  ~TracesHandle() { ct_traces_free(p); }
};

struct DistributionHandle {
  ct_distribution* p = nullptr;
  ~DistributionHandle() { ct_distribution_free(p); }
};

struct CensusHandle {
  ct_census* p = nullptr;
  ~CensusHandle() { ct_census_free(p); }
};

// All flags. Unset optionals fall back to the config file, then defaults.
struct Options {
  std::optional<std::string> config_path;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;

  std::optional<std::string> x;
  std::optional<std::string> a_str;
  std::optional<std::string> b_str;
  std::optional<std::string> input;
  std::optional<std::string> truth;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<double> q;
  std::optional<std::size_t> traces;
  std::optional<double> L;
  std::optional<std::size_t> grid;
  std::optional<double> delta_min;
  std::optional<std::size_t> k;
  std::optional<double> alpha;
  std::optional<double> r;
  std::optional<int> kk;
  std::optional<double> eps;
  std::optional<int> a_int;
  std::optional<int> b_int;
  std::optional<int> c_int;
  bool linear = false;
  bool exact = false;
};

template <class T>
void merge(std::optional<T>& field, const json& cfg, const char* key) {
  if (field || !cfg.contains(key)) return;
  try {
    field = cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config key \"") + key + "\" has the wrong type");
  }
}

void merge_config(Options& o, const std::string& sub) {
  if (!o.config_path) return;
  std::ifstream in(*o.config_path);
  if (!in) throw UsageError("cannot read config file " + *o.config_path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  merge(o.out, cfg, "out");
  merge(o.format, cfg, "format");
  merge(o.threads, cfg, "threads");
  merge(o.seed, cfg, "seed");
  merge(o.x, cfg, "x");
  merge(o.input, cfg, "input");
  merge(o.truth, cfg, "truth");
  merge(o.n, cfg, "n");
  merge(o.m, cfg, "m");
  merge(o.q, cfg, "q");
  merge(o.traces, cfg, "traces");
  merge(o.L, cfg, "L");
  merge(o.grid, cfg, "grid");
  merge(o.delta_min, cfg, "delta-min");
  merge(o.k, cfg, "k");
  merge(o.alpha, cfg, "alpha");
  merge(o.r, cfg, "r");
  merge(o.kk, cfg, "kk");
  merge(o.eps, cfg, "eps");
  // --a/--b are bit strings for distinguish and integers for nt counterexample.
  if (sub == "nt counterexample") {
    merge(o.a_int, cfg, "a");
    merge(o.b_int, cfg, "b");
    merge(o.c_int, cfg, "c");
  } else {
    merge(o.a_str, cfg, "a");
    merge(o.b_str, cfg, "b");
  }
  if (!o.linear && cfg.contains("linear") && cfg["linear"].is_boolean()) o.linear = cfg["linear"].get<bool>();
  if (!o.exact && cfg.contains("exact") && cfg["exact"].is_boolean()) o.exact = cfg["exact"].get<bool>();
}

template <class T>
const T& need(const std::optional<T>& field, const char* flag) {
  if (!field) throw UsageError(std::string("missing required flag ") + flag);
  return *field;
}

unsigned thread_count(const Options& o) {
  if (o.threads) return *o.threads;
  if (const char* env = std::getenv("CYCLOTRACE_THREADS")) {
    unsigned value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, value);
    if (res.ec != std::errc() || res.ptr != end) throw UsageError("CYCLOTRACE_THREADS must be a non-negative integer");
    return value;
  }
  return 1;
}

std::uint64_t seed_of(const Options& o) { return o.seed.value_or(ct_default_seed()); }

bool json_output(const Options& o) { return o.format.value_or("csv") == "json"; }

// Tabular output to --out or stdout.
class Sink {
 public:
  explicit Sink(const Options& o) {
    if (o.out && *o.out != "-") {
      file_.open(*o.out);
      if (!file_) throw UsageError("cannot open output file " + *o.out);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

const char* verdict_name(ct_verdict v) {
  switch (v) {
    case CT_VERDICT_A:
      return "A";
    case CT_VERDICT_B:
      return "B";
    default:
      return "Indistinguishable";
  }
}

ct_distinguish_config distinguish_config(const Options& o) {
  ct_distinguish_config cfg;
  ct_distinguish_config_default(&cfg);
  if (o.L) cfg.L = *o.L;
  if (o.grid) cfg.grid = *o.grid;
  if (o.delta_min) cfg.delta_min = *o.delta_min;
  cfg.threads = thread_count(o);
  return cfg;
}

ct_kmer_config kmer_config(const Options& o) {
  ct_kmer_config cfg;
  ct_kmer_config_default(&cfg);
  if (o.k) cfg.k = *o.k;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.r) cfg.r = *o.r;
  if (o.grid) cfg.grid_size = *o.grid;
  cfg.boost_seed = seed_of(o) ^ 0x9e3779b97f4a7c15ULL;
  cfg.threads = thread_count(o);
  return cfg;
}

// --x if given, otherwise a uniform string of length --n from the seed.
std::string target_string(const Options& o) {
  if (o.x) return *o.x;
  const std::size_t n = need(o.n, "--n (or --x)");
  return fetch([&](char* buf, std::size_t size, std::size_t* needed) {
    return ct_random_string(n, seed_of(o) + 1, buf, size, needed);
  });
}

// Traces from --input JSONL, or generated from x.
void load_traces(const Options& o, const std::string& x, bool linear, TracesHandle& out) {
  if (o.input) {
    check(ct_traces_read_jsonl(o.input->c_str(), &out.p));
    return;
  }
  const double q = need(o.q, "--q");
  const std::size_t count = need(o.traces, "--traces");
  const auto gen = linear ? ct_traces_generate_linear : ct_traces_generate;
  check(gen(x.c_str(), q, seed_of(o), count, thread_count(o), &out.p));
}

void write_census(const Options& o, const ct_census* census) {
  Sink sink(o);
  auto& os = sink.stream();
  const std::size_t size = ct_census_size(census);
  json rows = json::array();
  if (!json_output(o)) os << "pattern,count\n";
  for (std::size_t i = 0; i < size; ++i) {
    std::int64_t count = 0;
    const auto pattern = fetch([&](char* buf, std::size_t sz, std::size_t* needed) {
      return ct_census_entry(census, i, buf, sz, needed, &count);
    });
    if (json_output(o))
      rows.push_back({{"pattern", pattern}, {"count", count}});
    else
      os << pattern << ',' << count << '\n';
  }
  if (json_output(o)) os << json{{"k", ct_census_k(census)}, {"census", rows}}.dump() << '\n';
}

int cmd_channel_sample(const Options& o) {
  const std::string x = need(o.x, "--x");
  need(o.q, "--q");
  need(o.traces, "--traces");
  TracesHandle traces;
  load_traces(o, x, o.linear, traces);
  if (json_output(o)) {
    check(ct_traces_write_jsonl(traces.p, o.out ? o.out->c_str() : "-"));
    return kExitOk;
  }
  Sink sink(o);
  auto& os = sink.stream();
  os << "idx,bits\n";
  const std::size_t count = ct_traces_count(traces.p);
  for (std::size_t i = 0; i < count; ++i)
    os << i << ',' << fetch([&](char* buf, std::size_t sz, std::size_t* needed) {
      return ct_traces_get(traces.p, i, buf, sz, needed);
    }) << '\n';
  return kExitOk;
}

int cmd_channel_exact(const Options& o) {
  const std::string x = need(o.x, "--x");
  const double q = need(o.q, "--q");
  DistributionHandle dist;
  check(ct_distribution_exact(x.c_str(), q, &dist.p));
  Sink sink(o);
  auto& os = sink.stream();
  const std::size_t size = ct_distribution_size(dist.p);
  json rows = json::array();
  if (!json_output(o)) os << "trace,probability\n";
  for (std::size_t i = 0; i < size; ++i) {
    double p = 0;
    const auto t = fetch([&](char* buf, std::size_t sz, std::size_t* needed) {
      return ct_distribution_entry(dist.p, i, buf, sz, needed, &p);
    });
    if (json_output(o))
      rows.push_back({{"trace", t}, {"probability", p}});
    else
      os << t << ',' << num(p) << '\n';
  }
  if (json_output(o)) os << rows.dump() << '\n';
  return kExitOk;
}

int cmd_distinguish(const Options& o) {
  const std::string a = need(o.a_str, "--a");
  const std::string b = need(o.b_str, "--b");
  const double q = need(o.q, "--q");
  const std::string truth = o.truth.value_or("a");
  if (truth != "a" && truth != "b") throw UsageError("--truth must be a or b");
  TracesHandle traces;
  load_traces(o, truth == "a" ? a : b, false, traces);
  const auto cfg = distinguish_config(o);
  ct_distinguish_result res;
  check(ct_distinguish(a.c_str(), b.c_str(), traces.p, q, &cfg, &res));
  Sink sink(o);
  auto& os = sink.stream();
  if (json_output(o)) {
    os << json{{"t", res.t},
               {"z_re", res.z_re},
               {"z_im", res.z_im},
               {"delta", res.delta},
               {"estimate_re", res.estimate_re},
               {"estimate_im", res.estimate_im},
               {"verdict", verdict_name(res.verdict)}}
              .dump()
       << '\n';
  } else {
    os << "t,z_re,z_im,delta,estimate_re,estimate_im,verdict\n"
       << res.t << ',' << num(res.z_re) << ',' << num(res.z_im) << ',' << num(res.delta) << ','
       << num(res.estimate_re) << ',' << num(res.estimate_im) << ',' << verdict_name(res.verdict) << '\n';
  }
  return kExitOk;
}

void write_reconstruction(const Options& o, std::size_t n, double q, std::size_t count,
                          const std::string& truth, const std::string& got, bool correct) {
  Sink sink(o);
  auto& os = sink.stream();
  if (json_output(o)) {
    os << json{{"n", n}, {"q", q}, {"traces", count}, {"truth", truth}, {"reconstructed", got}, {"correct", correct}}
              .dump()
       << '\n';
  } else {
    os << "n,q,traces,truth,reconstructed,correct\n"
       << n << ',' << num(q) << ',' << count << ',' << truth << ',' << got << ',' << (correct ? 1 : 0) << '\n';
  }
}

int cmd_reconstruct_avg(const Options& o) {
  const std::string x = target_string(o);
  const double q = need(o.q, "--q");
  TracesHandle traces;
  load_traces(o, x, false, traces);
  const auto cfg = kmer_config(o);
  const auto got = fetch([&](char* buf, std::size_t sz, std::size_t* needed) {
    return ct_average_case_reconstruct(traces.p, x.size(), q, &cfg, buf, sz, needed);
  });
  int equal = 0;
  check(ct_cyclically_equal(x.c_str(), got.c_str(), &equal));
  write_reconstruction(o, x.size(), q, ct_traces_count(traces.p), o.input ? "" : x, got, equal && !o.input);
  return kExitOk;
}

int cmd_reconstruct_worst(const Options& o) {
  const std::string x = target_string(o);
  const double q = need(o.q, "--q");
  TracesHandle traces;
  load_traces(o, x, o.linear, traces);
  const auto cfg = distinguish_config(o);
  std::string got;
  if (o.linear) {
    const std::size_t m = o.m.value_or(2 * x.size());
    got = fetch([&](char* buf, std::size_t sz, std::size_t* needed) {
      return ct_reconstruct_linear(traces.p, x.size(), m, q, &cfg, seed_of(o) + 2, buf, sz, needed);
    });
  } else {
    got = fetch([&](char* buf, std::size_t sz, std::size_t* needed) {
      return ct_worst_case_reconstruct(x.size(), traces.p, q, &cfg, nullptr, 0, buf, sz, needed);
    });
  }
  bool correct = false;
  if (!o.input) {
    int equal = 0;
    check(ct_cyclically_equal(x.c_str(), got.c_str(), &equal));
    correct = o.linear ? got == x : equal != 0;
  }
  write_reconstruction(o, x.size(), q, ct_traces_count(traces.p), o.input ? "" : x, got, correct);
  return kExitOk;
}

int cmd_kmer_census(const Options& o) {
  CensusHandle census;
  if (o.exact) {
    const std::string x = need(o.x, "--x");
    check(ct_census_exact(x.c_str(), need(o.k, "--k"), &census.p));
  } else {
    const std::string x = target_string(o);
    const double q = need(o.q, "--q");
    TracesHandle traces;
    load_traces(o, x, false, traces);
    const auto cfg = kmer_config(o);
    check(ct_census_recover(traces.p, x.size(), q, &cfg, &census.p));
  }
  write_census(o, census.p);
  return kExitOk;
}

int cmd_nt_verify(const Options& o) {
  const std::size_t n = need(o.n, "--n");
  int holds = 0;
  std::string wa(n + 1, '\0');
  std::string wb(n + 1, '\0');
  check(ct_nt_verify(n, thread_count(o), &holds, wa.data(), wb.data(), n + 1));
  wa.resize(holds ? 0 : n);
  wb.resize(holds ? 0 : n);
  Sink sink(o);
  auto& os = sink.stream();
  if (json_output(o)) {
    json out{{"n", n}, {"holds", holds != 0}};
    if (!holds) out["witness"] = {wa, wb};
    os << out.dump() << '\n';
  } else if (holds) {
    os << "Holds\n";
  } else {
    os << "FailsWithWitness " << wa << ' ' << wb << '\n';
  }
  return kExitOk;
}

int cmd_nt_counterexample(const Options& o) {
  const int a = need(o.a_int, "--a");
  const int b = need(o.b_int, "--b");
  const int c = need(o.c_int, "--c");
  if (a <= 0 || b <= 0 || c <= 0) throw UsageError("--a, --b and --c must be positive");
  const std::size_t len = static_cast<std::size_t>(a) * static_cast<std::size_t>(b) * static_cast<std::size_t>(c);
  std::string sa(len + 1, '\0');
  std::string sb(len + 1, '\0');
  ct_counterexample_checks checks;
  check(ct_nt_counterexample(a, b, c, sa.data(), sb.data(), len + 1, &checks));
  sa.resize(len);
  sb.resize(len);
  Sink sink(o);
  sink.stream() << json{{"a", sa},
                        {"b", sb},
                        {"not_cyclic_shifts", checks.not_cyclic_shifts != 0},
                        {"ratio_condition_holds", checks.ratio_condition_holds != 0},
                        {"polynomial_identities_hold", checks.polynomial_identities_hold != 0}}
                       .dump()
                << '\n';
  return kExitOk;
}

int cmd_lowerbound(const Options& o) {
  const auto n = static_cast<int>(need(o.n, "--n"));
  const int kk = need(o.kk, "--kk");
  const double q = need(o.q, "--q");
  const double eps = need(o.eps, "--eps");
  ct_lowerbound_row row;
  check(ct_lowerbound(n, kk, q, eps, thread_count(o), &row));
  Sink sink(o);
  auto& os = sink.stream();
  if (json_output(o)) {
    os << json{{"n", n}, {"kk", kk}, {"q", q}, {"dsq_paper", row.dsq_paper},
               {"dsq_hellinger", row.dsq_hellinger}, {"sample_bound", row.sample_bound}}
              .dump()
       << '\n';
  } else {
    os << "n,kk,q,dsq_paper,dsq_hellinger,sample_bound\n"
       << n << ',' << kk << ',' << num(q) << ',' << num(row.dsq_paper) << ',' << num(row.dsq_hellinger) << ','
       << row.sample_bound << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclotrace: circular trace reconstruction experiments"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON file with keys matching flag names");
    sub->add_option("--out", o.out, "output path (default stdout); csv or json selects the format");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", o.threads, "worker threads (default 1; env CYCLOTRACE_THREADS)");
    sub->add_option("--seed", o.seed, "64-bit seed");
  };
  const auto traces_opts = [&](CLI::App* sub) {
    sub->add_option("--q", o.q, "deletion probability");
    sub->add_option("--traces", o.traces, "number of traces to generate");
    sub->add_option("--input", o.input, "read traces from JSONL instead of generating");
  };

  auto* channel = app.add_subcommand("channel", "sample the channel or print its exact law");
  channel->require_subcommand(1);
  auto* sample = channel->add_subcommand("sample", "generate traces");
  common(sample);
  sample->add_option("--x", o.x, "source string");
  sample->add_option("--q", o.q, "deletion probability");
  sample->add_option("--traces", o.traces, "number of traces");
  sample->add_flag("--linear", o.linear, "rotation-free channel");
  auto* exact = channel->add_subcommand("exact", "exact trace law");
  common(exact);
  exact->add_option("--x", o.x, "source string");
  exact->add_option("--q", o.q, "deletion probability");

  auto* distinguish = app.add_subcommand("distinguish", "decide between two circular strings");
  common(distinguish);
  traces_opts(distinguish);
  distinguish->add_option("--a", o.a_str, "first candidate");
  distinguish->add_option("--b", o.b_str, "second candidate");
  distinguish->add_option("--truth", o.truth, "string that generates the traces: a (default) or b");
  distinguish->add_option("--L", o.L, "arc parameter");
  distinguish->add_option("--grid", o.grid, "arc points");
  distinguish->add_option("--delta-min", o.delta_min, "smallest separation that decides");

  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct a circular string");
  reconstruct->require_subcommand(1);
  auto* avg = reconstruct->add_subcommand("avg", "average-case k-mer pipeline");
  common(avg);
  traces_opts(avg);
  avg->add_option("--x", o.x, "source string (default: uniform from the seed)");
  avg->add_option("--n", o.n, "length");
  avg->add_option("--k", o.k, "k-mer length");
  avg->add_option("--alpha", o.alpha, "degree factor");
  avg->add_option("--r", o.r, "boosting retention");
  avg->add_option("--grid", o.grid, "fit nodes");
  auto* worst = reconstruct->add_subcommand("worst", "worst-case tournament");
  common(worst);
  traces_opts(worst);
  worst->add_option("--x", o.x, "source string (default: uniform from the seed)");
  worst->add_option("--n", o.n, "length");
  worst->add_option("--L", o.L, "arc parameter");
  worst->add_option("--grid", o.grid, "arc points");
  worst->add_option("--delta-min", o.delta_min, "smallest separation that decides");
  worst->add_flag("--linear", o.linear, "linear string through the padding reduction");
  worst->add_option("--m", o.m, "padded length (default 2n)");

  auto* kmer = app.add_subcommand("kmer", "k-mer census");
  kmer->require_subcommand(1);
  auto* census = kmer->add_subcommand("census", "recovered (or exact) census as pattern,count");
  common(census);
  traces_opts(census);
  census->add_option("--x", o.x, "source string (default: uniform from the seed)");
  census->add_option("--n", o.n, "length");
  census->add_option("--k", o.k, "k-mer length");
  census->add_option("--alpha", o.alpha, "degree factor");
  census->add_option("--r", o.r, "boosting retention");
  census->add_option("--grid", o.grid, "fit nodes");
  census->add_flag("--exact", o.exact, "census of --x itself");

  auto* nt = app.add_subcommand("nt", "root-of-unity checks");
  nt->require_subcommand(1);
  auto* verify = nt->add_subcommand("verify", "brute-force ratio theorem check");
  common(verify);
  verify->add_option("--n", o.n, "length");
  auto* counter = nt->add_subcommand("counterexample", "composite-length counterexample");
  common(counter);
  counter->add_option("--a", o.a_int, "first factor");
  counter->add_option("--b", o.b_int, "second factor");
  counter->add_option("--c", o.c_int, "third factor");

  auto* lower = app.add_subcommand("lowerbound", "three-ones family distances");
  common(lower);
  lower->add_option("--n", o.n, "family parameter");
  lower->add_option("--kk", o.kk, "gap parameter");
  lower->add_option("--q", o.q, "deletion probability");
  lower->add_option("--eps", o.eps, "failure probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  struct Route {
    CLI::App* app;
    const char* name;
    int (*run)(const Options&);
  };
  const std::vector<Route> routes{
      {sample, "channel sample", cmd_channel_sample},
      {exact, "channel exact", cmd_channel_exact},
      {distinguish, "distinguish", cmd_distinguish},
      {avg, "reconstruct avg", cmd_reconstruct_avg},
      {worst, "reconstruct worst", cmd_reconstruct_worst},
      {census, "kmer census", cmd_kmer_census},
      {verify, "nt verify", cmd_nt_verify},
      {counter, "nt counterexample", cmd_nt_counterexample},
      {lower, "lowerbound", cmd_lowerbound},
  };
  try {
    for (const auto& route : routes) {
      if (!route.app->parsed()) continue;
      merge_config(o, route.name);
      // "--out csv" / "--out json" name a format for stdout.
      if (o.out && (*o.out == "csv" || *o.out == "json")) {
        if (!o.format) o.format = *o.out;
        o.out.reset();
      }
      if (o.format && *o.format != "csv" && *o.format != "json")
        throw UsageError("--format must be csv or json");
      return route.run(o);
    }
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LibraryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
