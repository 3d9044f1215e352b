#pragma once

// Exact-rational low-degree advantage machinery.
//
// Notation follows the code, not any single formula sheet:
//   moment(alpha)     E[Y^alpha] under a planted distribution.
//   column(alpha)     the law of the non-monochromatic part of alpha when the
//                     vertices of alpha receive i.i.d. uniform colours; entry
//                     beta is M(beta, alpha) = Pr(alpha \ X = beta).
//   diag(beta)        M(beta, beta), the chance that no edge of beta is
//                     monochromatic.
//   hat_w(alpha)      c_alpha - E_Q[Y^alpha] - sum over nonempty proper
//                     beta of hat_w(beta) M(beta,alpha) / M(beta,beta).
// Everything here is exact; floating point appears only in square roots and
// in the pseudo-inverse used by adv_exact.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <Eigen/Dense>

#include "lowcolor/graph.hpp"
#include "lowcolor/models.hpp"

namespace lowcolor {

using Rational = mpq_class;

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "num/den" with den > 0, also for integers.
inline std::string to_fraction_string(Rational r) {
  r.canonicalize();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational rational_pow(const Rational& base, int exp) {
  Rational r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// ---------------------------------------------------------------------------
// Set partitions

// Calls fn(rgs, blocks) for every set partition of {0..m-1}, given as a
// restricted growth string (rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1])).
template <class Fn>
void for_each_set_partition(int m, Fn&& fn) {
  if (m == 0) {
    std::vector<int> none;
    fn(none, 0);
    return;
  }
  std::vector<int> a(static_cast<std::size_t>(m), 0);
  std::vector<int> mx(static_cast<std::size_t>(m), 0);  // max of a[0..i]
  while (true) {
    fn(a, mx[m - 1] + 1);
    int i = m - 1;
    while (i > 0 && a[i] > mx[i - 1]) --i;
    if (i == 0) return;
    ++a[i];
    mx[i] = std::max(mx[i - 1], a[i]);
    for (int j = i + 1; j < m; ++j) {
      a[j] = 0;
      mx[j] = mx[i];
    }
  }
}

inline std::uint64_t bell_number(int m) {
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < m; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

// Pr(i.i.d. uniform colours on `verts` vertices induce one fixed partition
// with `blocks` blocks) = colors^(blocks falling) / colors^verts.
inline std::vector<Rational> partition_weights(int colors, int verts) {
  std::vector<Rational> w(static_cast<std::size_t>(verts) + 1, 0);
  Rational falling = 1;
  const Rational denom = rational_pow(Rational(colors), verts);
  for (int b = 0; b <= verts; ++b) {
    w[b] = falling / denom;
    falling *= (colors - b);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Patterns

inline Pattern pattern_from_edges(int num_vertices,
                                  const std::vector<std::pair<int, int>>& edges) {
  // Same first-appearance relabelling rule as canonical_key().
  std::vector<std::pair<int, int>> sorted = edges;
  for (auto& [u, v] : sorted)
    if (u > v) std::swap(u, v);
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> label(static_cast<std::size_t>(num_vertices), -1);
  Pattern p;
  auto id = [&](int v) {
    if (label[v] < 0) label[v] = p.num_vertices++;
    return static_cast<std::uint8_t>(label[v]);
  };
  for (auto [u, v] : sorted) {
    auto a = id(u), b = id(v);
    p.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(p.edges.begin(), p.edges.end());
  return p;
}

// Sub-pattern on the edges selected by `mask` (bit i = edge i of p).
inline Pattern subpattern(const Pattern& p, std::uint64_t mask) {
  std::vector<std::pair<int, int>> es;
  for (std::size_t i = 0; i < p.edges.size(); ++i)
    if ((mask >> i) & 1u) es.emplace_back(p.edges[i].first, p.edges[i].second);
  return pattern_from_edges(p.num_vertices, es);
}

inline std::vector<Pattern> pattern_components(const Pattern& p) {
  detail::UnionFind uf(p.num_vertices);
  for (auto [u, v] : p.edges) uf.unite(u, v);
  std::map<int, std::uint64_t> by_root;
  for (std::size_t i = 0; i < p.edges.size(); ++i)
    by_root[uf.find(p.edges[i].first)] |= std::uint64_t{1} << i;
  std::vector<Pattern> out;
  for (auto& [root, mask] : by_root) out.push_back(subpattern(p, mask));
  return out;
}

inline std::uint64_t full_mask(std::size_t edges) {
  return edges >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << edges) - 1;
}

// Bit i set iff edge i of p joins two vertices of the same block.
inline std::uint64_t monochromatic_mask(const Pattern& p, const std::vector<int>& rgs) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < p.edges.size(); ++i)
    if (rgs[p.edges[i].first] == rgs[p.edges[i].second]) m |= std::uint64_t{1} << i;
  return m;
}

inline constexpr int kMaxPatternEdges = 63;

// ---------------------------------------------------------------------------
// Moments

// E[Y^alpha] under MC(.,q): each connected component must be monochromatic,
// which has probability q^-(|V(component)|-1).
inline Rational mc_moment(const Pattern& p, int q) {
  if (q < 1) throw ParameterError("mc_moment: need q >= 1");
  Rational r = 1;
  for (const auto& c : pattern_components(p)) r /= rational_pow(Rational(q), c.num_vertices - 1);
  return r;
}

inline Rational mc_moment(const EdgeSubset& alpha, int q) { return mc_moment(canonical_key(alpha), q); }

inline constexpr int kMaxQuietComponentVertices = 7;

// E[Y^alpha] for a connected alpha under the quiet planting: sum over pairs
// of partitions (pi_a, pi_b) of V(alpha), each weighted independently, of
// (-1)^{#a-monochromatic edges} when every edge is a-monochromatic or
// b-monochromatic, zero otherwise.
inline Rational quiet_lambda_connected(const Pattern& p, int q) {
  const int v = p.num_vertices;
  if (v > kMaxQuietComponentVertices)
    throw InfeasibleError("quiet_lambda: component on " + std::to_string(v) +
                          " vertices needs Bell(" + std::to_string(v) + ")^2 = " +
                          std::to_string(bell_number(v) * bell_number(v)) +
                          " partition pairs; limit is " +
                          std::to_string(kMaxQuietComponentVertices) + " vertices");
  const auto weights = partition_weights(q, v);
  std::vector<std::pair<std::uint64_t, Rational>> parts;  // (mono mask, weight)
  for_each_set_partition(v, [&](const std::vector<int>& rgs, int blocks) {
    if (weights[blocks] != 0) parts.emplace_back(monochromatic_mask(p, rgs), weights[blocks]);
  });
  const std::uint64_t all = full_mask(p.edges.size());
  Rational total = 0;
  for (const auto& [amono, wa] : parts) {
    Rational inner = 0;
    for (const auto& [bmono, wb] : parts)
      if ((amono | bmono) == all) inner += wb;
    if (inner == 0) continue;
    if (std::popcount(amono) % 2) total -= wa * inner;
    else total += wa * inner;
  }
  return total;
}

inline Rational quiet_lambda(const Pattern& p, int q) {
  if (q < 1) throw ParameterError("quiet_lambda: need q >= 1");
  Rational r = 1;
  for (const auto& c : pattern_components(p)) r *= quiet_lambda_connected(c, q);
  return r;
}

inline Rational quiet_lambda(const EdgeSubset& alpha, int q) { return quiet_lambda(canonical_key(alpha), q); }

// A distribution over graphs whose monomial moments are known exactly.
struct Distribution {
  enum class Kind { Uniform, Mc, Quiet };
  Kind kind = Kind::Uniform;
  int q = 1;

  static Distribution uniform() { return {Kind::Uniform, 1}; }
  static Distribution mc(int q) { return {Kind::Mc, q}; }
  static Distribution quiet(int q) { return {Kind::Quiet, q}; }

  // "uniform" (or "gnp"), "mc:<q>", "quiet:<q>".
  static Distribution parse(const std::string& s) {
    if (s == "uniform" || s == "gnp") return uniform();
    auto colon = s.find(':');
    if (colon == std::string::npos) throw ParameterError("distribution '" + s + "': expected uniform, mc:<q> or quiet:<q>");
    const auto name = s.substr(0, colon);
    int q = 0;
    try {
      std::size_t used = 0;
      q = std::stoi(s.substr(colon + 1), &used);
      if (used != s.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParameterError("distribution '" + s + "': bad q");
    }
    if (q < 1) throw ParameterError("distribution '" + s + "': need q >= 1");
    if (name == "mc") return mc(q);
    if (name == "quiet") return quiet(q);
    throw ParameterError("distribution '" + s + "': unknown kind '" + name + "'");
  }

  std::string str() const {
    switch (kind) {
      case Kind::Uniform: return "uniform";
      case Kind::Mc: return "mc:" + std::to_string(q);
      case Kind::Quiet: return "quiet:" + std::to_string(q);
    }
    return "?";
  }

  Rational moment(const Pattern& p) const {
    switch (kind) {
      case Kind::Uniform: return p.edges.empty() ? 1 : 0;
      case Kind::Mc: return mc_moment(p, q);
      case Kind::Quiet: return quiet_lambda(p, q);
    }
    return 0;
  }
};

// Memoised moments keyed by pattern. Not thread-safe; use one per thread.
class MomentTable {
 public:
  explicit MomentTable(Distribution d) : dist_(d) {}
  const Rational& operator()(const Pattern& p) {
    auto it = memo_.find(p);
    if (it == memo_.end()) it = memo_.emplace(p, dist_.moment(p)).first;
    return it->second;
  }
  const Rational& operator()(const EdgeSubset& a) { return (*this)(canonical_key(a)); }
  const Distribution& distribution() const { return dist_; }

 private:
  Distribution dist_;
  std::unordered_map<Pattern, Rational, PatternHash> memo_;
};

// ---------------------------------------------------------------------------
// The M matrix

// Signal X = indicator of monochromatic edges under i.i.d. uniform colours
// from `colors` labels, i.e. the clique edges of MC(., colors).
struct CliqueSignal {
  int colors;

  // (beta mask, M(beta, alpha)) for every beta with nonzero probability.
  std::vector<std::pair<std::uint64_t, Rational>> column(const Pattern& alpha) const {
    if (alpha.edges.size() > kMaxPatternEdges) throw InfeasibleError("M column: too many edges");
    const auto weights = partition_weights(colors, alpha.num_vertices);
    const std::uint64_t all = full_mask(alpha.edges.size());
    std::map<std::uint64_t, Rational> dist;
    for_each_set_partition(alpha.num_vertices, [&](const std::vector<int>& rgs, int blocks) {
      if (weights[blocks] == 0) return;
      dist[all & ~monochromatic_mask(alpha, rgs)] += weights[blocks];
    });
    return {dist.begin(), dist.end()};
  }

  // M(beta, beta) = Pr(no edge of beta is monochromatic).
  Rational diag(const Pattern& beta) const {
    const auto weights = partition_weights(colors, beta.num_vertices);
    Rational r = 0;
    for_each_set_partition(beta.num_vertices, [&](const std::vector<int>& rgs, int blocks) {
      if (monochromatic_mask(beta, rgs) == 0) r += weights[blocks];
    });
    return r;
  }
};

// Signal X = all -1, so Q is i.i.d. Rademacher and M is the identity.
struct NoSignal {
  std::vector<std::pair<std::uint64_t, Rational>> column(const Pattern& alpha) const {
    return {{full_mask(alpha.edges.size()), Rational(1)}};
  }
  Rational diag(const Pattern&) const { return 1; }
};

namespace detail {
// Position mask of `beta`'s edges inside `alpha` (both sorted edge lists).
inline std::uint64_t position_mask(const EdgeSubset& beta, const EdgeSubset& alpha) {
  if (beta.n() != alpha.n() || !beta.is_subset_of(alpha))
    throw std::invalid_argument("M_entry: beta must be a subset of alpha");
  std::uint64_t m = 0;
  auto ae = alpha.edges();
  std::size_t j = 0;
  for (auto e : beta.edges()) {
    while (ae[j] != e) ++j;
    m |= std::uint64_t{1} << j;
  }
  return m;
}

// alpha as a pattern whose edge i is alpha's i-th smallest edge index.
inline Pattern ordered_pattern(const EdgeSubset& alpha) {
  std::vector<int> label(static_cast<std::size_t>(alpha.n()), -1);
  Pattern p;
  for (auto e : alpha.edges()) {
    auto [u, v] = edge_endpoints(e, alpha.n());
    if (label[u] < 0) label[u] = p.num_vertices++;
    if (label[v] < 0) label[v] = p.num_vertices++;
    auto a = static_cast<std::uint8_t>(label[u]), b = static_cast<std::uint8_t>(label[v]);
    p.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return p;  // deliberately not re-sorted: edge order must match alpha
}
}  // namespace detail

// M(beta, alpha) with i.i.d. uniform colours from `colors` labels.
inline Rational M_entry(const EdgeSubset& beta, const EdgeSubset& alpha, int colors) {
  if (colors < 1) throw ParameterError("M_entry: need colors >= 1");
  if (alpha.size() > kMaxPatternEdges) throw InfeasibleError("M_entry: too many edges");
  const auto target = detail::position_mask(beta, alpha);
  const auto p = detail::ordered_pattern(alpha);
  const auto weights = partition_weights(colors, p.num_vertices);
  const std::uint64_t all = full_mask(p.edges.size());
  Rational r = 0;
  for_each_set_partition(p.num_vertices, [&](const std::vector<int>& rgs, int blocks) {
    if ((all & ~monochromatic_mask(p, rgs)) == target) r += weights[blocks];
  });
  return r;
}

// ---------------------------------------------------------------------------
// The hat-w recursion

// Evaluates hat_w for P with moments `p_moment` against Q = X v Z with signal
// `Signal`. Memoised by pattern; not thread-safe.
template <class Signal>
class HatWEngine {
 public:
  HatWEngine(Distribution p, Signal signal) : p_moment_(p), signal_(std::move(signal)) {}

  const Rational& hat_w(const Pattern& alpha) {
    if (auto it = hat_.find(alpha); it != hat_.end()) return it->second;
    Rational value;
    if (alpha.edges.empty()) {
      value = 1;
    } else {
      if (diag(alpha) == 0)
        throw DegenerateParameters("hat_w: M(alpha,alpha) = 0; need more colours than the "
                                   "chromatic number of every alpha");
      const std::uint64_t all = full_mask(alpha.edges.size());
      value = p_moment_(alpha);
      for (const auto& [mask, prob] : signal_.column(alpha)) {
        if (mask == 0) {
          value -= prob;  // M(empty, alpha) = E_Q[Y^alpha]
        } else if (mask != all) {
          const Pattern beta = subpattern(alpha, mask);
          value -= hat_w(beta) * prob / diag(beta);
        }
      }
    }
    return hat_.emplace(alpha, std::move(value)).first->second;
  }
  const Rational& hat_w(const EdgeSubset& a) { return hat_w(canonical_key(a)); }

  const Rational& diag(const Pattern& beta) {
    if (auto it = diag_.find(beta); it != diag_.end()) return it->second;
    return diag_.emplace(beta, signal_.diag(beta)).first->second;
  }
  const Rational& diag(const EdgeSubset& b) { return diag(canonical_key(b)); }

  // w = hat_w / M(alpha, alpha).
  Rational w(const Pattern& alpha) { return hat_w(alpha) / diag(alpha); }

  const Rational& p_moment(const Pattern& alpha) { return p_moment_(alpha); }
  const Signal& signal() const { return signal_; }

 private:
  MomentTable p_moment_;
  Signal signal_;
  std::unordered_map<Pattern, Rational, PatternHash> hat_;
  std::unordered_map<Pattern, Rational, PatternHash> diag_;
};

// hat_w(alpha) for P = MC(., q) versus Q = MC(., q + ell).
inline Rational hat_w(const EdgeSubset& alpha, int q, int ell) {
  if (q < 1 || ell < 0) throw ParameterError("hat_w: need q >= 1 and ell >= 0");
  HatWEngine<CliqueSignal> engine(Distribution::mc(q), CliqueSignal{q + ell});
  return engine.hat_w(alpha);
}

// ---------------------------------------------------------------------------
// Advantage bounds

inline constexpr std::uint64_t kMaxEnumeratedSubsets = 20'000'000;

inline void check_enumeration_cost(int n, int max_edges, const char* who) {
  const auto cost = subset_count(n, max_edges);
  if (cost > kMaxEnumeratedSubsets)
    throw InfeasibleError(std::string(who) + ": " + std::to_string(cost) +
                          " edge subsets with |alpha| <= " + std::to_string(max_edges) + " on n=" +
                          std::to_string(n) + " exceed the limit of " +
                          std::to_string(kMaxEnumeratedSubsets));
}

struct AdvBoundReport {
  struct Slice {
    std::uint64_t count = 0;
    Rational sum_w2 = 0;
    Rational sum_hat_w2 = 0;
  };
  Rational total = 0;  // sum over |alpha| <= D of w_alpha^2
  Rational tail = 0;   // sum over 1 <= |alpha| <= D of hat_w_alpha^2
  std::map<int, Slice> per_vertex_count;  // keyed by |V(alpha)|
  std::uint64_t subsets = 0;
};

// Sum of w_alpha^2 over all alpha with |alpha| <= D on n vertices, for
// P = MC(n,q) against Q = MC(n,q+ell).
inline AdvBoundReport adv_bound(int n, int q, int ell, int D) {
  if (n < 1 || q < 1 || ell < 1 || D < 0)
    throw ParameterError("adv_bound: need n >= 1, q >= 1, ell >= 1, D >= 0");
  if (q + ell <= D) throw ParameterError("adv_bound: need q + ell > D");
  check_enumeration_cost(n, D, "adv_bound");
  HatWEngine<CliqueSignal> engine(Distribution::mc(q), CliqueSignal{q + ell});
  struct Terms {
    Rational w2, hat2;
  };
  std::unordered_map<Pattern, Terms, PatternHash> terms;
  AdvBoundReport rep;
  for_each_subset(n, D, [&](const EdgeSubset& a) {
    const Pattern key = canonical_key(a);
    auto it = terms.find(key);
    if (it == terms.end()) {
      const Rational& hw = engine.hat_w(key);
      const Rational w = hw / engine.diag(key);
      it = terms.emplace(key, Terms{w * w, hw * hw}).first;
    }
    auto& slice = rep.per_vertex_count[key.num_vertices];
    ++slice.count;
    slice.sum_w2 += it->second.w2;
    rep.total += it->second.w2;
    if (!a.empty()) {
      slice.sum_hat_w2 += it->second.hat2;
      rep.tail += it->second.hat2;
    }
    ++rep.subsets;
  });
  return rep;
}

// Exact sum over |alpha| <= D of E_P[Y^alpha]^2.
inline Rational iid_adv_squared(const Distribution& p, int n, int D) {
  if (n < 1 || D < 0) throw ParameterError("iid_adv: need n >= 1 and D >= 0");
  check_enumeration_cost(n, D, "iid_adv");
  MomentTable moments(p);
  Rational total = 0;
  for_each_subset(n, D, [&](const EdgeSubset& a) {
    const Rational& c = moments(a);
    total += c * c;
  });
  return total;
}

// Advantage against i.i.d. Rademacher noise: sqrt of iid_adv_squared.
inline double iid_adv(const Distribution& p, int n, int D) {
  return std::sqrt(iid_adv_squared(p, n, D).get_d());
}

inline constexpr std::size_t kMaxGramSize = 4000;
inline constexpr double kPseudoInverseCutoff = 1e-10;

struct AdvExactReport {
  double adv = 0.0;
  std::size_t monomials = 0;
  Eigen::Index rank = 0;
};

// sup over degree-D f of E_P f / sqrt(E_Q f^2) = sqrt(c' G^+ c) with
// G(alpha,beta) = E_Q[Y^(alpha sym-diff beta)] and c(alpha) = E_P[Y^alpha];
// moments are exact and G^+ drops eigenvalues below 1e-10 * the largest.
inline AdvExactReport adv_exact_report(const Distribution& p, const Distribution& q, int n, int D) {
  if (n < 1 || D < 0) throw ParameterError("adv_exact: need n >= 1 and D >= 0");
  const auto count = subset_count(n, D);
  if (count > kMaxGramSize)
    throw InfeasibleError("adv_exact: " + std::to_string(count) +
                          " monomials exceed the Gram-matrix limit of " + std::to_string(kMaxGramSize));
  std::vector<EdgeSubset> monos;
  for_each_subset(n, D, [&](const EdgeSubset& a) { monos.push_back(a); });
  const auto m = static_cast<Eigen::Index>(monos.size());
  MomentTable pm(p), qm(q);
  Eigen::VectorXd c(m);
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    c(i) = pm(monos[i]).get_d();
    for (Eigen::Index j = i; j < m; ++j) g(i, j) = g(j, i) = qm(monos[i].symmetric_difference(monos[j])).get_d();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const auto& lam = es.eigenvalues();
  const double cutoff = kPseudoInverseCutoff * lam.maxCoeff();
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * c;
  AdvExactReport rep;
  rep.monomials = monos.size();
  double s = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (lam(i) > cutoff) {
      s += proj(i) * proj(i) / lam(i);
      ++rep.rank;
    }
  rep.adv = std::sqrt(s);
  return rep;
}

inline double adv_exact(const Distribution& p, const Distribution& q, int n, int D) {
  return adv_exact_report(p, q, n, D).adv;
}

}  // namespace lowcolor
