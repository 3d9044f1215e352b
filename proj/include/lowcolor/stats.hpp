#pragma once

// Low-degree test statistics: signed subgraph counts, the spectral trace
// statistic, and empirical separation between two distributions.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "lowcolor/graph.hpp"
#include "lowcolor/models.hpp"
#include "lowcolor/parallel.hpp"
#include "lowcolor/rng.hpp"

namespace lowcolor {

// Sum of Y_ij over all pairs.
inline std::int64_t signed_edge_count(const PM1Graph& g) {
  std::int64_t s = 0;
  for (auto x : g.signs()) s += x;
  return s;
}

namespace detail {
// Dense symmetric sign matrix with zero diagonal, and its square.
struct SignSquare {
  int n;
  std::vector<std::int32_t> s;
  std::vector<std::int32_t> s2;

  explicit SignSquare(const PM1Graph& g) : n(g.n()) {
    const auto un = static_cast<std::size_t>(n);
    s.assign(un * un, 0);
    EdgeId e = 0;
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = i + 1; j < n; ++j, ++e) s[i * un + j] = s[j * un + i] = g.sign(e);
    s2.assign(un * un, 0);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t k = 0; k < un; ++k) {
        const auto sik = s[i * un + k];
        if (sik == 0) continue;
        for (std::size_t j = 0; j < un; ++j) s2[i * un + j] += sik * s[k * un + j];
      }
  }
};
}  // namespace detail

// Sum over all vertex triples of the product of the three edge signs,
// computed as Tr(S^3)/6.
inline std::int64_t signed_triangle_count(const PM1Graph& g) {
  if (g.n() < 3) return 0;
  detail::SignSquare m(g);
  std::int64_t tr3 = 0;
  for (std::size_t i = 0; i < m.s.size(); ++i) tr3 += static_cast<std::int64_t>(m.s2[i]) * m.s[i];
  return tr3 / 6;
}

// Sum over the 3 C(n,4) four-cycles of the product of the cycle's edge signs.
// Tr(S^4) counts each cycle 8 times plus 2n(n-1)^2 - n(n-1) backtracking walks
// of weight one.
inline std::int64_t signed_four_cycle_count(const PM1Graph& g) {
  const std::int64_t n = g.n();
  if (n < 4) return 0;
  detail::SignSquare m(g);
  std::int64_t tr4 = 0;
  for (auto x : m.s2) tr4 += static_cast<std::int64_t>(x) * x;
  return (tr4 - 2 * n * (n - 1) * (n - 1) + n * (n - 1)) / 8;
}

struct TraceStatError : ParameterError {
  using ParameterError::ParameterError;
};

// (n/q - 1)^{-2m} Tr(A^{2m}) where A is the +-1 adjacency matrix of the
// complement graph with zero diagonal, evaluated from the eigenvalues of A.
inline double spectral_trace_stat(const PM1Graph& g, int q, int m) {
  const int n = g.n();
  if (q < 1 || q >= n) throw TraceStatError("spectral_trace_stat: need 1 <= q < n");
  if (m < 1) throw TraceStatError("spectral_trace_stat: need m >= 1");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  EdgeId e = 0;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j, ++e) a(i, j) = a(j, i) = -static_cast<double>(g.sign(e));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const double scale = static_cast<double>(n) / q - 1.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    total += std::pow(es.eigenvalues()[i] / scale, 2 * m);
  return total;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

inline Moments sample_moments(const std::vector<double>& xs) {
  Moments mo;
  if (xs.empty()) return mo;
  for (double x : xs) mo.mean += x;
  mo.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return mo;
  for (double x : xs) mo.var += (x - mo.mean) * (x - mo.mean);
  mo.var /= static_cast<double>(xs.size() - 1);
  return mo;
}

struct SeparationReport {
  double mean_p = 0.0;
  double mean_q = 0.0;
  double var_p = 0.0;
  double var_q = 0.0;
  // |mean_p - mean_q| / sqrt(max(var_p, var_q)); infinite if the means differ
  // with zero variance on both sides.
  double ratio = 0.0;
  int trials = 0;
  std::vector<double> values_p;
  std::vector<double> values_q;
};

using GraphStatistic = std::function<double(const PM1Graph&)>;
using GraphSampler = std::function<PM1Graph(Seed)>;

inline double separation_ratio(double mean_p, double mean_q, double var_p, double var_q) {
  const double gap = std::abs(mean_p - mean_q);
  const double sd = std::sqrt(std::max(var_p, var_q));
  if (gap == 0.0) return 0.0;
  if (sd == 0.0) return std::numeric_limits<double>::infinity();
  return gap / sd;
}

// Trial t draws both samplers with sub_seed(seed, t).
inline SeparationReport separation_report(const GraphStatistic& stat, const GraphSampler& sample_p,
                                          const GraphSampler& sample_q, int trials, Seed seed) {
  if (trials < 2) throw ParameterError("separation_report: need trials >= 2");
  SeparationReport r;
  r.trials = trials;
  r.values_p.resize(static_cast<std::size_t>(trials));
  r.values_q.resize(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    const Seed s = sub_seed(seed, t);
    r.values_p[t] = stat(sample_p(s));
    r.values_q[t] = stat(sample_q(s));
  });
  const auto mp = sample_moments(r.values_p);
  const auto mq = sample_moments(r.values_q);
  r.mean_p = mp.mean;
  r.var_p = mp.var;
  r.mean_q = mq.mean;
  r.var_q = mq.var;
  r.ratio = separation_ratio(r.mean_p, r.mean_q, r.var_p, r.var_q);
  return r;
}

}  // namespace lowcolor
