#pragma once

// Command-line front end. run_cli() parses arguments, dispatches to the
// library, and writes a JSON report (or a CSV table for `sweep`) to `out`.
// Exit status: 0 on success, 2 on usage or parameter errors, 1 otherwise.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lowcolor/colorability.hpp"
#include "lowcolor/duality.hpp"
#include "lowcolor/graph.hpp"
#include "lowcolor/io.hpp"
#include "lowcolor/lowdeg.hpp"
#include "lowcolor/models.hpp"
#include "lowcolor/recovery.hpp"
#include "lowcolor/reduction.hpp"
#include "lowcolor/refute.hpp"
#include "lowcolor/rng.hpp"
#include "lowcolor/stats.hpp"

namespace lowcolor {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Named parameters of one experiment, as text. Typed getters validate.
class ParamMap {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ParameterError("missing parameter '" + key + "'");
    return it->second;
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
  }
  long long integer(const std::string& key) const {
    const auto s = str(key);
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw ParameterError("parameter '" + key + "' must be an integer, got '" + s + "'");
  }
  long long integer(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  // Accepts decimals and "num/den".
  double real(const std::string& key) const {
    const auto s = str(key);
    try {
      if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational r(s);
        r.canonicalize();
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
        return r.get_d();
      }
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParameterError("parameter '" + key + "' must be a number, got '" + s + "'");
  }
  double real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

 private:
  std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
  std::string subcommand;
  ParamMap params;
  int trials = 1;
  Seed seed = 0;
  bool has_seed = false;
};

// One (parameter point, metric) result.
struct ResultRecord {
  std::map<std::string, std::string> params;
  std::string metric;
  double value = 0.0;
  int trials = 0;
  Seed seed = 0;
  double wall_ms = 0.0;
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

inline Json record_json(const ResultRecord& r) {
  Json j;
  Json p = Json::object();
  for (const auto& [k, v] : r.params) p[k] = v;
  j["params"] = p;
  j["metric"] = r.metric;
  j["value"] = json_number(r.value);
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["wall_ms"] = r.wall_ms;
  return j;
}

// Writes `# key=value` config lines, the header, and the rows. Parameter
// columns are the union of row parameter names, sorted.
inline void write_csv(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& config,
                      const std::vector<std::string>& param_names, const std::vector<ResultRecord>& rows) {
  for (const auto& [k, v] : config) os << "# " << k << '=' << v << '\n';
  for (const auto& name : param_names) os << "param_" << name << ',';
  os << "metric,value,trials,seed,wall_ms\n";
  for (const auto& r : rows) {
    for (const auto& name : param_names) {
      auto it = r.params.find(name);
      os << (it == r.params.end() ? "" : it->second) << ',';
    }
    os << r.metric << ',' << format_number(r.value) << ',' << r.trials << ',' << r.seed << ','
       << format_number(r.wall_ms) << '\n';
  }
}

// key=value lines; '#' starts a comment line; blank lines are ignored.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Splices `--config FILE` entries into the argument list. A key already given
// as a flag on the command line keeps the command-line value. Keys are bare
// option names ("n", "trials"); "true"/"false" values toggle flags.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;
  std::set<std::string> given;
  for (const auto& a : rest)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  for (const auto& [key, value] : read_config_file(*path)) {
    if (key == "command") {
      if (rest.empty() || rest.front().rfind("-", 0) == 0) rest.insert(rest.begin(), value);
      continue;
    }
    // Repeatable options accumulate across file and command line.
    const bool repeatable = key == "grid" || key == "set";
    if (!repeatable && given.count(key)) continue;
    if (value == "true") {
      rest.push_back("--" + key);
    } else if (value == "false") {
      continue;
    } else {
      rest.push_back("--" + key);
      rest.push_back(value);
    }
  }
  return rest;
}

inline std::vector<std::pair<std::string, std::string>> effective_config(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> cfg;
  cfg.emplace_back("command", sub.get_name());
  for (const auto* opt : sub.get_options()) {
    auto name = opt->get_lnames().empty() ? std::string() : opt->get_lnames().front();
    if (name.empty() || name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_type_size() == 0) {
        value = "true";
      } else {
        // Repeatable options get one line per value, as in a config file.
        for (std::size_t i = 0; i + 1 < res.size(); ++i) cfg.emplace_back(name, res[i]);
        value = res.back();
      }
    } else if (opt->get_type_size() == 0) {
      value = "false";
    } else {
      value = opt->get_default_str();
      if (value.empty()) continue;
    }
    cfg.emplace_back(name, value);
  }
  return cfg;
}

inline Json config_json(const std::vector<std::pair<std::string, std::string>>& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : cfg) j[k] = v;
  return j;
}

inline RecoveryOptions recovery_options(const ParamMap& p) {
  RecoveryOptions o;
  o.refine = p.str("refine", "true") != "false";
  return o;
}

inline int checked_int(const ParamMap& p, const std::string& key, long long lo, long long hi) {
  const auto v = p.integer(key);
  if (v < lo || v > hi)
    throw ParameterError("parameter '" + key + "' = " + std::to_string(v) + " outside [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}
inline int checked_int(const ParamMap& p, const std::string& key, long long lo, long long hi, long long fallback) {
  if (!p.has(key)) return static_cast<int>(fallback);
  return checked_int(p, key, lo, hi);
}

constexpr long long kBig = 1'000'000'000;

using Metrics = std::vector<std::pair<std::string, double>>;

// --- Experiments shared by single runs and sweep rows -----------------------

inline Metrics recover_experiment(const ParamMap& p, int trials, Seed seed) {
  const auto model = p.str("model");
  const int n = checked_int(p, "n", 2, kBig);
  const int q = checked_int(p, "q", 1, n);
  const auto opts = recovery_options(p);
  std::vector<int> ok(static_cast<std::size_t>(trials), 0);
  if (model == "mc") {
    parallel_for(ok.size(), [&](std::size_t t) {
      auto s = sample_mc(n, q, sub_seed(seed, t));
      ok[t] = verify_partition(s, recover_mc(s.graph, q, opts));
    });
  } else if (model == "mcp") {
    const int k = p.has("k") ? checked_int(p, "k", 1, n) : clique_size_from_delta(n, q, p.real("delta"));
    if (static_cast<long long>(q) * k > n) throw ParameterError("recover: need q*k <= n");
    parallel_for(ok.size(), [&](std::size_t t) {
      auto s = sample_mc_partial_k(n, q, k, sub_seed(seed, t));
      ok[t] = verify_partition(s, recover_planted_cliques(s.graph, q, k, opts));
    });
  } else if (model == "pc") {
    const int k = checked_int(p, "k", 1, n);
    parallel_for(ok.size(), [&](std::size_t t) {
      auto s = sample_pc(n, k, sub_seed(seed, t));
      ok[t] = verify_partition(s, recover_planted_cliques(s.graph, 1, k, opts));
    });
  } else {
    throw ParameterError("recover: model must be mc, mcp or pc");
  }
  double frac = 0;
  for (int x : ok) frac += x;
  return {{"exact_recovery_rate", frac / trials}};
}

inline Metrics reduce_experiment(const ParamMap& p, int trials, Seed seed) {
  const int N = checked_int(p, "N", 1, kBig);
  const int K = checked_int(p, "K", 1, N);
  const int q = checked_int(p, "q", 2, kBig);
  const auto opts = recovery_options(p);
  std::vector<int> hit_pc(static_cast<std::size_t>(trials), 0), hit_null(static_cast<std::size_t>(trials), 0);
  parallel_for(hit_pc.size(), [&](std::size_t t) {
    const Seed s = sub_seed(seed, t);
    auto planted = sample_pc(N, K, sub_seed(s, 0));
    hit_pc[t] = pc_distinguisher(planted.graph, q, K, sub_seed(s, 1), opts).verdict ==
                ReductionVerdict::Verdict::PlantedClique;
    auto null = sample_gnp_half(N, sub_seed(s, 2));
    hit_null[t] = pc_distinguisher(null, q, K, sub_seed(s, 3), opts).verdict == ReductionVerdict::Verdict::Null;
  });
  double a = 0, b = 0;
  for (std::size_t t = 0; t < hit_pc.size(); ++t) {
    a += hit_pc[t];
    b += hit_null[t];
  }
  return {{"accuracy_planted", a / trials}, {"accuracy_null", b / trials}};
}

inline GraphStatistic make_statistic(const ParamMap& p) {
  const auto name = p.str("stat");
  if (name == "edges") return [](const PM1Graph& g) { return static_cast<double>(signed_edge_count(g)); };
  if (name == "triangles") return [](const PM1Graph& g) { return static_cast<double>(signed_triangle_count(g)); };
  if (name == "c4") return [](const PM1Graph& g) { return static_cast<double>(signed_four_cycle_count(g)); };
  if (name == "trace") {
    const int tq = checked_int(p, "tq", 1, kBig);
    const int m = checked_int(p, "m", 1, kMaxRefuteM);
    return [tq, m](const PM1Graph& g) { return spectral_trace_stat(g, tq, m); };
  }
  throw ParameterError("stat must be edges, triangles, c4 or trace");
}

inline SeparationReport stat_report(const ParamMap& p, int trials, Seed seed) {
  const int n = checked_int(p, "n", 1, kBig);
  const auto planted = ModelSpec::parse(p.str("planted"));
  const auto null = ModelSpec::parse(p.str("null", "gnp"));
  return separation_report(
      make_statistic(p), [&](Seed s) { return sample_model(planted, n, s).graph; },
      [&](Seed s) { return sample_model(null, n, s).graph; }, trials, seed);
}

inline Metrics stat_metrics(const SeparationReport& r) {
  return {{"mean_planted", r.mean_p}, {"mean_null", r.mean_q}, {"var_planted", r.var_p},
          {"var_null", r.var_q},      {"separation_ratio", r.ratio}};
}

inline Metrics stat_experiment(const ParamMap& p, int trials, Seed seed) { return stat_metrics(stat_report(p, trials, seed)); }

inline Metrics refute_experiment(const ParamMap& p, int trials, Seed seed) {
  const int n = checked_int(p, "n", 2, kBig);
  const int q = checked_int(p, "q", 1, n - 1);
  const int m = checked_int(p, "m", 1, kMaxRefuteM, default_m(n));
  return {{"no_rate", refute_rate(n, q, m, trials, seed)}};
}

inline Metrics appendix_experiment(const ParamMap& p, int trials, Seed seed) {
  const int n = checked_int(p, "n", 1, kMaxColoringVertices);
  const int q = checked_int(p, "q", 1, kBig);
  return {{"no_cover_fraction", appendix_check(n, q, trials, seed)}};
}

inline Metrics adv_experiment(const ParamMap& p) {
  const int n = checked_int(p, "n", 1, kBig);
  const int q = checked_int(p, "q", 1, kBig);
  const int ell = checked_int(p, "ell", 1, kBig);
  const int D = checked_int(p, "D", 0, kBig);
  const auto rep = adv_bound(n, q, ell, D);
  return {{"total", rep.total.get_d()}, {"sqrt_total", std::sqrt(rep.total.get_d())}, {"tail", rep.tail.get_d()}};
}

// --- Subcommand output ------------------------------------------------------

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool timing = true;
};

inline void emit_report(Context& ctx, const std::vector<std::pair<std::string, std::string>>& cfg,
                        const std::vector<ResultRecord>& recs, Json extra = Json::object()) {
  Json j;
  j["command"] = cfg.front().second;
  j["config"] = config_json(cfg);
  Json arr = Json::array();
  for (const auto& r : recs) arr.push_back(record_json(r));
  j["records"] = arr;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  ctx.out << j.dump(2) << '\n';
}

inline std::vector<ResultRecord> to_records(const Metrics& ms, const ParamMap& p, int trials, Seed seed,
                                            double wall_ms) {
  std::vector<ResultRecord> out;
  for (const auto& [name, value] : ms) out.push_back({p.values(), name, value, trials, seed, wall_ms});
  return out;
}

inline std::vector<std::map<std::string, std::string>> expand_grid(const std::vector<std::string>& grids) {
  std::vector<std::map<std::string, std::string>> points{{}};
  for (const auto& g : grids) {
    const auto eq = g.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--grid expects key=v1,v2,..., got '" + g + "'");
    const auto key = g.substr(0, eq);
    std::vector<std::string> vals;
    std::string rest = g.substr(eq + 1);
    std::size_t start = 0;
    while (start <= rest.size() && !rest.empty()) {
      auto comma = rest.find(',', start);
      auto v = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!v.empty()) vals.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    std::vector<std::map<std::string, std::string>> next;
    for (const auto& pt : points)
      for (const auto& v : vals) {
        auto q = pt;
        q[key] = v;
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  return points;
}

inline Metrics run_task(const std::string& task, const ParamMap& p, int trials, Seed seed) {
  if (task == "recover") return recover_experiment(p, trials, seed);
  if (task == "reduce") return reduce_experiment(p, trials, seed);
  if (task == "stat") return stat_experiment(p, trials, seed);
  if (task == "refute") return refute_experiment(p, trials, seed);
  if (task == "appendix") return appendix_experiment(p, trials, seed);
  if (task == "adv") return adv_experiment(p);
  throw ParameterError("sweep: unknown task '" + task + "' (recover, reduce, stat, refute, appendix, adv)");
}

}  // namespace detail

struct SweepOutcome {
  std::vector<std::string> param_names;
  std::vector<ResultRecord> rows;
  std::vector<std::string> errors;  // one entry per failed point
};

// Row r is seeded with sub_seed(seed, r); a failing point yields one row with
// metric "error" and value nan, and the sweep continues.
inline SweepOutcome sweep(const std::string& task, const ParamMap& fixed, const std::vector<std::string>& grids,
                          int trials, Seed seed, bool timing = true) {
  SweepOutcome so;
  const auto points = detail::expand_grid(grids);
  std::set<std::string> names;
  for (const auto& [k, v] : fixed.values()) names.insert(k);
  for (const auto& g : grids) names.insert(g.substr(0, g.find('=')));
  so.param_names.assign(names.begin(), names.end());
  for (std::size_t r = 0; r < points.size(); ++r) {
    ParamMap p = fixed;
    for (const auto& [k, v] : points[r]) p.set(k, v);
    const Seed row_seed = sub_seed(seed, r);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto ms = detail::run_task(task, p, trials, row_seed);
      const double wall = timing ? detail::ms_since(t0) : 0.0;
      for (auto& rec : detail::to_records(ms, p, trials, row_seed, wall)) so.rows.push_back(std::move(rec));
    } catch (const std::exception& e) {
      so.rows.push_back({p.values(), "error", std::numeric_limits<double>::quiet_NaN(), trials, row_seed,
                         timing ? detail::ms_since(t0) : 0.0});
      so.errors.push_back("row " + std::to_string(r) + ": " + e.what());
    }
  }
  return so;
}

inline int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planted colouring, clique recovery and low-degree refutation experiments", "lowcolor"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  bool no_timing = false;
  ExperimentConfig cfg;
  std::string seed_text;
  std::map<std::string, std::string> svals;
  std::map<std::string, std::string> ivals;
  std::vector<std::string> grids, sets;
  bool flag = false;

  auto add_seed = [&](CLI::App* s) {
    s->add_option("--seed", seed_text, "master seed (required)")->required();
  };
  auto add_trials = [&](CLI::App* s, int def) {
    cfg.trials = def;
    s->add_option("--trials", cfg.trials, "number of trials")->capture_default_str();
  };
  auto add_timing = [&](CLI::App* s) {
    s->add_flag("--no-timing", no_timing, "report wall_ms as 0 for byte-identical reruns");
  };
  auto opt = [&](CLI::App* s, const std::string& name, const std::string& help, bool required) {
    auto* o = s->add_option("--" + name, svals[name], help);
    if (required) o->required();
    return o;
  };

  auto* sample = app.add_subcommand("sample", "draw one graph and its hidden structure");
  opt(sample, "model", "gnp | mc:q | mcp:q:k | pc:K | quiet:q | ec:q", true);
  opt(sample, "n", "vertices", true);
  opt(sample, "out", "graph file (default: stdout)", false);
  opt(sample, "truth", "truth file", false);
  add_seed(sample);

  auto* recover = app.add_subcommand("recover", "exact clique-recovery rate, or recover one graph file");
  opt(recover, "model", "mc | mcp | pc", false);
  opt(recover, "n", "vertices", false);
  opt(recover, "q", "clique count", true);
  opt(recover, "k", "clique size (mcp, pc, graph files)", false);
  opt(recover, "delta", "unplanted fraction for mcp, decimal or num/den", false);
  opt(recover, "graph", "recover this graph file instead of sampling", false);
  opt(recover, "truth", "truth file for --graph; adds exact_match", false);
  recover->add_flag("--no-refine", flag, "thresholds only");
  add_trials(recover, 20);
  recover->add_option("--seed", seed_text, "master seed (required when sampling)");
  add_timing(recover);

  auto* reduce = app.add_subcommand("reduce", "planted clique distinguisher via the colouring lift");
  opt(reduce, "N", "original vertices", true);
  opt(reduce, "K", "planted clique size", true);
  opt(reduce, "q", "cliques after lifting", true);
  reduce->add_flag("--no-refine", flag, "thresholds only");
  add_trials(reduce, 20);
  add_seed(reduce);
  add_timing(reduce);

  auto* stat = app.add_subcommand("stat", "separation of a statistic between two models");
  opt(stat, "stat", "edges | triangles | c4 | trace", true);
  stat->add_option("--planted,--dist", svals["planted"], "model spec")->required();
  opt(stat, "null", "model spec (default gnp)", false);
  opt(stat, "n", "vertices", true);
  opt(stat, "tq", "q of the trace statistic", false);
  opt(stat, "m", "power 2m of the trace statistic", false);
  opt(stat, "csv", "per-trial statistic values", false);
  add_trials(stat, 100);
  add_seed(stat);
  add_timing(stat);

  auto* refute = app.add_subcommand("refute", "spectral NO/MAYBE refutation of q-colourability");
  opt(refute, "n", "vertices of G(n,1/2)", false);
  opt(refute, "q", "colours", true);
  opt(refute, "m", "trace power 2m (default ceil(ceil(log2 n)/2))", false);
  opt(refute, "graph", "refute this graph file instead of sampling", false);
  opt(refute, "csv", "per-trial statistic values", false);
  add_trials(refute, 100);
  refute->add_option("--seed", seed_text, "master seed (required when sampling)");
  add_timing(refute);

  auto* adv = app.add_subcommand("adv", "exact advantage bound for MC(n,q) against MC(n,q+ell)");
  opt(adv, "n", "vertices", true);
  opt(adv, "q", "planted colours", true);
  opt(adv, "ell", "extra null colours", true);
  opt(adv, "D", "degree", true);
  adv->add_flag("--exact", flag, "also solve the degree-D advantage by linear algebra");

  auto* dual = app.add_subcommand("duality", "min-max identity on a micro instance");
  opt(dual, "nv", "vertices (<= 5)", true);
  opt(dual, "q", "colours", true);
  opt(dual, "D", "degree", true);
  opt(dual, "tol", "Frank-Wolfe gap tolerance", false);
  opt(dual, "max-iter", "iteration cap per solver", false);

  auto* appendix = app.add_subcommand("appendix", "fraction of MC(n,q+1) graphs without a q-clique cover");
  opt(appendix, "n", "vertices (<= 64)", true);
  opt(appendix, "q", "cover size", true);
  add_trials(appendix, 20);
  add_seed(appendix);
  add_timing(appendix);

  auto* sw = app.add_subcommand("sweep", "CSV table over a parameter grid");
  opt(sw, "task", "recover | reduce | stat | refute | appendix | adv", true);
  sw->add_option("--grid", grids, "key=v1,v2,... (repeatable; cartesian product)");
  sw->add_option("--set", sets, "key=value fixed parameter (repeatable)");
  opt(sw, "out", "CSV file (default: stdout)", false);
  add_trials(sw, 20);
  add_seed(sw);
  add_timing(sw);

  std::vector<std::string> args;
  try {
    args = detail::expand_config(raw_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  for (const auto& [k, v] : svals)
    if (auto* o = sub->get_option_no_throw("--" + k); o && o->count() > 0) cfg.params.set(k, v);
  if (flag && (cfg.subcommand == "recover" || cfg.subcommand == "reduce")) cfg.params.set("refine", "false");
  const auto config = detail::effective_config(*sub);
  detail::Context ctx{out, err, !no_timing};

  try {
    if (!seed_text.empty()) {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(seed_text, &used, 0);
        if (used != seed_text.size()) throw std::invalid_argument("trailing");
      } catch (const std::logic_error&) {
        throw ParameterError("--seed must be an unsigned integer");
      }
      cfg.has_seed = true;
    }
    if (cfg.trials < 1) throw ParameterError("--trials must be >= 1");
    const auto& p = cfg.params;
    const auto t0 = std::chrono::steady_clock::now();
    auto wall = [&] { return ctx.timing ? detail::ms_since(t0) : 0.0; };
    auto need_seed = [&] {
      if (!cfg.has_seed) throw ParameterError("--seed is required for this subcommand");
    };

    if (cfg.subcommand == "sample") {
      const auto model = ModelSpec::parse(p.str("model"));
      const int n = detail::checked_int(p, "n", 1, detail::kBig);
      auto s = sample_model(model, n, cfg.seed);
      if (p.has("out")) {
        std::ofstream f(p.str("out"));
        if (!f) throw ParameterError("cannot write '" + p.str("out") + "'");
        write_graph(f, s.graph);
      } else {
        write_graph(out, s.graph);
      }
      if (p.has("truth")) {
        std::ofstream f(p.str("truth"));
        if (!f) throw ParameterError("cannot write '" + p.str("truth") + "'");
        write_truth(f, s);
      }
      if (p.has("out")) {
        Json extra;
        extra["edges"] = s.graph.edge_count();
        detail::emit_report(ctx, config, {}, extra);
      }
      return 0;
    }

    if (cfg.subcommand == "recover") {
      if (p.has("graph")) {
        std::ifstream f(p.str("graph"));
        if (!f) throw ParameterError("cannot read '" + p.str("graph") + "'");
        const auto g = read_graph(f);
        const int q = detail::checked_int(p, "q", 1, g.n());
        const auto opts = detail::recovery_options(p);
        auto part = p.has("k") ? recover_planted_cliques(g, q, detail::checked_int(p, "k", 1, g.n()), opts)
                               : recover_mc(g, q, opts);
        Json extra;
        extra["ok"] = part.ok;
        extra["groups"] = part.groups;
        extra["unassigned"] = part.unassigned;
        if (p.has("truth")) {
          std::ifstream tf(p.str("truth"));
          if (!tf) throw ParameterError("cannot read '" + p.str("truth") + "'");
          extra["exact_match"] = verify_partition(PlantedSample{g, read_truth(tf, g.n())}, part);
        }
        detail::emit_report(ctx, config, {}, extra);
        return 0;
      }
      need_seed();
      auto ms = detail::recover_experiment(p, cfg.trials, cfg.seed);
      detail::emit_report(ctx, config, detail::to_records(ms, p, cfg.trials, cfg.seed, wall()));
      return 0;
    }

    if (cfg.subcommand == "reduce") {
      auto ms = detail::reduce_experiment(p, cfg.trials, cfg.seed);
      detail::emit_report(ctx, config, detail::to_records(ms, p, cfg.trials, cfg.seed, wall()));
      return 0;
    }

    if (cfg.subcommand == "stat") {
      const auto r = detail::stat_report(p, cfg.trials, cfg.seed);
      if (p.has("csv")) {
        std::ofstream f(p.str("csv"));
        if (!f) throw ParameterError("cannot write '" + p.str("csv") + "'");
        f << "trial,planted,null\n";
        for (std::size_t t = 0; t < r.values_p.size(); ++t)
          f << t << ',' << format_number(r.values_p[t]) << ',' << format_number(r.values_q[t]) << '\n';
      }
      detail::emit_report(ctx, config, detail::to_records(detail::stat_metrics(r), p, cfg.trials, cfg.seed, wall()));
      return 0;
    }

    if (cfg.subcommand == "refute") {
      if (p.has("graph")) {
        std::ifstream f(p.str("graph"));
        if (!f) throw ParameterError("cannot read '" + p.str("graph") + "'");
        const auto g = read_graph(f);
        const int q = detail::checked_int(p, "q", 1, g.n() - 1);
        const int m = detail::checked_int(p, "m", 1, kMaxRefuteM, default_m(g.n()));
        const auto o = spectral_refuter(g, q, m);
        Json extra;
        extra["verdict"] = to_string(o.verdict);
        extra["value"] = json_number(o.value);
        extra["q"] = o.q;
        extra["m"] = o.m;
        detail::emit_report(ctx, config, {}, extra);
        return 0;
      }
      need_seed();
      const int n = detail::checked_int(p, "n", 2, detail::kBig);
      const int q = detail::checked_int(p, "q", 1, n - 1);
      const int m = detail::checked_int(p, "m", 1, kMaxRefuteM, default_m(n));
      const auto rep = refute_rate_report(n, q, m, cfg.trials, cfg.seed);
      if (p.has("csv")) {
        std::ofstream f(p.str("csv"));
        if (!f) throw ParameterError("cannot write '" + p.str("csv") + "'");
        f << "trial,value,verdict\n";
        for (std::size_t t = 0; t < rep.values.size(); ++t)
          f << t << ',' << format_number(rep.values[t]) << ','
            << (rep.values[t] < 1.0 - kRefuteTieBand ? "NO" : "MAYBE") << '\n';
      }
      ParamMap shown = p;
      shown.set("m", std::to_string(m));
      Json extra;
      extra["m"] = m;
      extra["no_count"] = rep.no_count;
      detail::emit_report(ctx, config, detail::to_records({{"no_rate", rep.rate}}, shown, cfg.trials, cfg.seed, wall()),
                          extra);
      return 0;
    }

    if (cfg.subcommand == "adv") {
      const int n = detail::checked_int(p, "n", 1, detail::kBig);
      const int q = detail::checked_int(p, "q", 1, detail::kBig);
      const int ell = detail::checked_int(p, "ell", 1, detail::kBig);
      const int D = detail::checked_int(p, "D", 0, detail::kBig);
      const auto rep = adv_bound(n, q, ell, D);
      Json extra;
      extra["total"] = to_fraction_string(rep.total);
      extra["total_float"] = rep.total.get_d();
      extra["sqrt_total"] = std::sqrt(rep.total.get_d());
      extra["tail"] = to_fraction_string(rep.tail);
      extra["tail_float"] = rep.tail.get_d();
      extra["subsets"] = rep.subsets;
      Json per = Json::array();
      for (const auto& [v, slice] : rep.per_vertex_count)
        per.push_back({{"vertices", v},
                       {"count", slice.count},
                       {"sum_w2", to_fraction_string(slice.sum_w2)},
                       {"sum_hat_w2", to_fraction_string(slice.sum_hat_w2)}});
      extra["per_vertex_count"] = per;
      if (flag) {
        const auto ex = adv_exact_report(Distribution::mc(q), Distribution::mc(q + ell), n, D);
        extra["adv_exact"] = ex.adv;
        extra["gram_rank"] = ex.rank;
        extra["monomials"] = ex.monomials;
      }
      detail::emit_report(ctx, config, {}, extra);
      return 0;
    }

    if (cfg.subcommand == "duality") {
      const int nv = detail::checked_int(p, "nv", 1, kMaxMicroVertices);
      const int q = detail::checked_int(p, "q", 1, detail::kBig);
      const int D = detail::checked_int(p, "D", 0, detail::kBig);
      SolverOptions so;
      so.tol = p.real("tol", so.tol);
      so.max_iterations = detail::checked_int(p, "max-iter", 1, detail::kBig, so.max_iterations);
      const auto inst = build_coloring_instance(nv, q, D);
      const auto rep = solve_duality(inst, so);
      Json extra;
      extra["property_size"] = inst.R.size();
      extra["universe_size"] = inst.universe_size;
      extra["monomials"] = inst.monomials.size();
      extra["primal"] = rep.primal_value;
      extra["primal_averaged"] = rep.primal.averaged_value;
      extra["primal_best_iterate"] = rep.primal.best_iterate_value;
      extra["primal_iterations"] = rep.primal.iterations;
      extra["dual_adv"] = rep.dual_adv;
      extra["dual_objective"] = rep.dual.objective;
      extra["dual_iterations"] = rep.dual.iterations;
      extra["fw_gap"] = rep.dual.fw_gap;
      extra["fw_monotonicity_violations"] = rep.dual.monotonicity_violations;
      extra["gap"] = rep.gap;
      std::vector<double> coeffs(rep.primal.coefficients.data(),
                                 rep.primal.coefficients.data() + rep.primal.coefficients.size());
      extra["certificate"] = {{"coefficients", coeffs}, {"min_over_property", rep.primal_value}};
      detail::emit_report(ctx, config, {}, extra);
      return 0;
    }

    if (cfg.subcommand == "appendix") {
      auto ms = detail::appendix_experiment(p, cfg.trials, cfg.seed);
      detail::emit_report(ctx, config, detail::to_records(ms, p, cfg.trials, cfg.seed, wall()));
      return 0;
    }

    if (cfg.subcommand == "sweep") {
      ParamMap fixed;
      for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
        fixed.set(s.substr(0, eq), s.substr(eq + 1));
      }
      const auto so = sweep(p.str("task"), fixed, grids, cfg.trials, cfg.seed, ctx.timing);
      for (const auto& e : so.errors) err << "sweep " << e << '\n';
      if (p.has("out")) {
        std::ofstream f(p.str("out"));
        if (!f) throw ParameterError("cannot write '" + p.str("out") + "'");
        write_csv(f, config, so.param_names, so.rows);
      } else {
        write_csv(out, config, so.param_names, so.rows);
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, out, err);
}

}  // namespace lowcolor
