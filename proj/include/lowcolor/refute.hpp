#pragma once

// NO/MAYBE refutation of q-colourability from the trace-power statistic
// f = (n/q - 1)^{-2m} Tr(A^{2m}). A q-colourable graph has a colour class of
// size >= n/q, which is a clique of the complement, so f >= 1 and NO is never
// returned on it.

#include <algorithm>
#include <cmath>
#include <vector>

#include "lowcolor/graph.hpp"
#include "lowcolor/models.hpp"
#include "lowcolor/parallel.hpp"
#include "lowcolor/rng.hpp"
#include "lowcolor/stats.hpp"

namespace lowcolor {

// Values this close to 1 are reported as MAYBE.
inline constexpr double kRefuteTieBand = 1e-6;
inline constexpr int kMaxRefuteM = 16;

struct RefutationOutcome {
  enum class Verdict { No, Maybe };
  Verdict verdict = Verdict::Maybe;
  double value = 0.0;
  int q = 0;
  int m = 0;

  bool no() const { return verdict == Verdict::No; }
};

inline const char* to_string(RefutationOutcome::Verdict v) {
  return v == RefutationOutcome::Verdict::No ? "NO" : "MAYBE";
}

// ceil(ceil(log2 n) / 2), at least 1 and at most 16.
inline int default_m(int n) {
  int bits = 0;
  while (bits < 31 && (1 << bits) < n) ++bits;
  return std::clamp((bits + 1) / 2, 1, kMaxRefuteM);
}

inline RefutationOutcome spectral_refuter(const PM1Graph& g, int q, int m) {
  RefutationOutcome out;
  out.q = q;
  out.m = m;
  out.value = spectral_trace_stat(g, q, m);
  out.verdict = out.value < 1.0 - kRefuteTieBand ? RefutationOutcome::Verdict::No
                                                 : RefutationOutcome::Verdict::Maybe;
  return out;
}

struct RefuteRateReport {
  double rate = 0.0;
  int no_count = 0;
  int trials = 0;
  std::vector<double> values;  // f per trial
};

// Trial t refutes a G(n,1/2) draw seeded with sub_seed(seed, t).
inline RefuteRateReport refute_rate_report(int n, int q, int m, int trials, Seed seed) {
  if (trials < 1) throw ParameterError("refute_rate: need trials >= 1");
  if (q < 1 || q >= n) throw ParameterError("refute_rate: need 1 <= q < n");
  if (m < 1) throw ParameterError("refute_rate: need m >= 1");
  RefuteRateReport rep;
  rep.trials = trials;
  rep.values.resize(static_cast<std::size_t>(trials));
  std::vector<int> no(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    auto out = spectral_refuter(sample_gnp_half(n, sub_seed(seed, t)), q, m);
    rep.values[t] = out.value;
    no[t] = out.no() ? 1 : 0;
  });
  for (int x : no) rep.no_count += x;
  rep.rate = static_cast<double>(rep.no_count) / trials;
  return rep;
}

inline double refute_rate(int n, int q, int m, int trials, Seed seed) {
  return refute_rate_report(n, q, m, trials, seed).rate;
}

}  // namespace lowcolor
