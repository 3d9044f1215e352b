#pragma once

// Exact recovery of planted cliques by thresholding +1-neighbour counts.
//
// Stage 1 keeps vertex i as a clique vertex iff deg(i) >= n/2 + k/4.
// Stage 2 links clique vertices i,j iff they have >= n/4 + 5k/8 common
// neighbours and reports the connected components of the link relation.
// Both cuts sit halfway between the planted and unplanted means.
//
// At desk scale (k a small multiple of sqrt(n log n)) the pairwise cut in
// stage 2 misfires on a few percent of pairs, which merges components. With
// RecoveryOptions::refine the same thresholding idea is then applied with a
// sharper reference set: grow each group from a seed by its top common
// neighbours, keep the vertices adjacent to >= 3/4 of the current group, and
// finally move every vertex to the group it is adjacent to >= 3/4 of.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "lowcolor/graph.hpp"
#include "lowcolor/models.hpp"

namespace lowcolor {

struct RecoveredPartition {
  std::vector<std::vector<Vertex>> groups;  // each sorted ascending
  std::vector<Vertex> unassigned;           // sorted ascending
  bool ok = false;
};

struct RecoveryOptions {
  bool refine = true;
  int max_refine_rounds = 20;
};

namespace detail {

class BitRows {
 public:
  explicit BitRows(const PM1Graph& g)
      : n_(g.n()), words_((static_cast<std::size_t>(g.n()) + 63) / 64),
        bits_(static_cast<std::size_t>(g.n()) * words_, 0) {
    EdgeId e = 0;
    for (Vertex i = 0; i < n_; ++i)
      for (Vertex j = i + 1; j < n_; ++j, ++e)
        if (g.sign(e) == 1) {
          set(bits_.data() + i * words_, j);
          set(bits_.data() + j * words_, i);
        }
  }
  int n() const { return n_; }
  std::size_t words() const { return words_; }
  const std::uint64_t* row(Vertex v) const { return bits_.data() + v * words_; }

  int degree(Vertex v) const { return count_and(row(v), row(v)); }
  int common(Vertex u, Vertex v) const { return count_and(row(u), row(v)); }
  int count_and(const std::uint64_t* a, const std::uint64_t* b) const {
    int c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += std::popcount(a[w] & b[w]);
    return c;
  }
  std::vector<std::uint64_t> mask(const std::vector<Vertex>& vs) const {
    std::vector<std::uint64_t> m(words_, 0);
    for (auto v : vs) set(m.data(), v);
    return m;
  }
  static void set(std::uint64_t* w, Vertex v) { w[v >> 6] |= std::uint64_t{1} << (v & 63); }

 private:
  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

inline std::vector<std::vector<Vertex>> link_components(const BitRows& adj,
                                                        const std::vector<Vertex>& cand,
                                                        double cut) {
  UnionFind uf(static_cast<int>(cand.size()));
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = a + 1; b < cand.size(); ++b)
      if (adj.common(cand[a], cand[b]) >= cut) uf.unite(static_cast<int>(a), static_cast<int>(b));
  std::vector<std::vector<Vertex>> groups;
  std::vector<int> slot(cand.size(), -1);
  for (std::size_t a = 0; a < cand.size(); ++a) {
    int r = uf.find(static_cast<int>(a));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(cand[a]);
  }
  return groups;
}

// Vertices of `pool` adjacent to at least 3/4 of the other members of `group`.
inline std::vector<Vertex> dense_attachers(const BitRows& adj, const std::vector<Vertex>& pool,
                                           const std::vector<Vertex>& group) {
  auto m = adj.mask(group);
  std::vector<char> in(static_cast<std::size_t>(adj.n()), 0);
  for (auto v : group) in[v] = 1;
  std::vector<Vertex> out;
  for (auto v : pool) {
    const int others = static_cast<int>(group.size()) - in[v];
    if (others <= 0) continue;
    if (4 * adj.count_and(adj.row(v), m.data()) >= 3 * others) out.push_back(v);
  }
  return out;
}

inline std::vector<std::vector<Vertex>> seeded_groups(const BitRows& adj,
                                                      const std::vector<Vertex>& cand, double k,
                                                      int rounds) {
  const int n = adj.n();
  std::vector<Vertex> order = cand;
  std::vector<int> deg(static_cast<std::size_t>(n));
  for (auto v : cand) deg[v] = adj.degree(v);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return deg[a] > deg[b]; });

  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<Vertex>> groups;
  const int want = std::max(1, static_cast<int>(std::lround(k)) - 1);
  for (auto s : order) {
    if (taken[s]) continue;
    std::vector<Vertex> pool;
    for (auto v : cand)
      if (!taken[v] && v != s) pool.push_back(v);
    std::vector<int> cn(static_cast<std::size_t>(n), 0);
    for (auto v : pool) cn[v] = adj.common(s, v);
    std::stable_sort(pool.begin(), pool.end(), [&](Vertex a, Vertex b) { return cn[a] > cn[b]; });
    std::vector<Vertex> group{s};
    group.insert(group.end(), pool.begin(),
                 pool.begin() + std::min<std::ptrdiff_t>(want, static_cast<std::ptrdiff_t>(pool.size())));
    pool.push_back(s);
    std::sort(pool.begin(), pool.end());
    std::sort(group.begin(), group.end());
    for (int r = 0; r < rounds && !group.empty(); ++r) {
      auto next = dense_attachers(adj, pool, group);
      if (next == group) break;
      group = std::move(next);
    }
    // A few leftover candidates can be mutually dense; planted groups have size near k.
    if (static_cast<double>(group.size()) >= std::max(2.0, k / 2) &&
        std::binary_search(group.begin(), group.end(), s)) {
      for (auto v : group) taken[v] = 1;
      groups.push_back(std::move(group));
    } else {
      taken[s] = 1;  // s starts no group; it may still join one in the final pass
    }
  }
  return groups;
}

// Moves every vertex to the group it is densest in (>= 3/4 of the others),
// or leaves it unassigned. Repeats until stable.
inline std::vector<std::vector<Vertex>> reassign(const BitRows& adj,
                                                 std::vector<std::vector<Vertex>> groups,
                                                 int rounds) {
  const int n = adj.n();
  for (int r = 0; r < rounds; ++r) {
    std::vector<std::vector<std::uint64_t>> masks;
    std::vector<std::vector<char>> member;
    for (const auto& g : groups) {
      masks.push_back(adj.mask(g));
      std::vector<char> in(static_cast<std::size_t>(n), 0);
      for (auto v : g) in[v] = 1;
      member.push_back(std::move(in));
    }
    std::vector<std::vector<Vertex>> next(groups.size());
    for (Vertex v = 0; v < n; ++v) {
      int best = -1;
      double best_frac = 0.0;
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const int others = static_cast<int>(groups[gi].size()) - member[gi][v];
        if (others <= 0) continue;
        const int hits = adj.count_and(adj.row(v), masks[gi].data());
        const double frac = static_cast<double>(hits) / others;
        if (4 * hits >= 3 * others && frac > best_frac) {
          best = static_cast<int>(gi);
          best_frac = frac;
        }
      }
      if (best >= 0) next[best].push_back(v);
    }
    std::erase_if(next, [](const auto& g) { return g.empty(); });
    if (next == groups) break;
    groups = std::move(next);
  }
  return groups;
}

inline bool is_clique(const BitRows& adj, const std::vector<Vertex>& group) {
  auto m = adj.mask(group);
  for (auto v : group)
    if (adj.count_and(adj.row(v), m.data()) != static_cast<int>(group.size()) - 1) return false;
  return true;
}

inline RecoveredPartition make_partition(int n, std::vector<std::vector<Vertex>> groups) {
  RecoveredPartition p;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    for (auto v : g) seen[v] = 1;
  }
  std::sort(groups.begin(), groups.end());
  p.groups = std::move(groups);
  for (Vertex v = 0; v < n; ++v)
    if (!seen[v]) p.unassigned.push_back(v);
  return p;
}

enum class CoverMode { Partial, Full };

inline bool partition_ok(const BitRows& adj, const RecoveredPartition& p, int q, double k,
                         CoverMode mode) {
  if (mode == CoverMode::Partial) {
    if (static_cast<int>(p.groups.size()) != q) return false;
    for (const auto& g : p.groups)
      if (static_cast<double>(g.size()) != k) return false;
  } else {
    if (!p.unassigned.empty() || static_cast<int>(p.groups.size()) > q) return false;
  }
  for (const auto& g : p.groups)
    if (!is_clique(adj, g)) return false;
  return true;
}

inline RecoveredPartition recover(const PM1Graph& g, int q, double k, CoverMode mode,
                                  const RecoveryOptions& opts) {
  const int n = g.n();
  BitRows adj(g);
  const double degree_cut = n / 2.0 + k / 4.0;
  const double common_cut = n / 4.0 + 5.0 * k / 8.0;

  std::vector<Vertex> cand;
  for (Vertex v = 0; v < n; ++v)
    if (adj.degree(v) >= degree_cut) cand.push_back(v);

  auto part = make_partition(n, link_components(adj, cand, common_cut));
  part.ok = partition_ok(adj, part, q, k, mode);
  if (part.ok || !opts.refine) return part;

  auto groups = seeded_groups(adj, cand, k, opts.max_refine_rounds);
  groups = reassign(adj, std::move(groups), opts.max_refine_rounds);
  auto refined = make_partition(n, std::move(groups));
  refined.ok = partition_ok(adj, refined, q, k, mode);
  return refined;
}

}  // namespace detail

// MC(n,q,delta) recovery with known clique size k.
inline RecoveredPartition recover_planted_cliques(const PM1Graph& g, int q, int k,
                                                  const RecoveryOptions& opts = {}) {
  if (q < 1 || k < 1 || static_cast<long long>(q) * k > g.n())
    throw ParameterError("recover: need q >= 1, k >= 1 and q*k <= n");
  return detail::recover(g, q, k, detail::CoverMode::Partial, opts);
}

inline RecoveredPartition recover_mc_partial(const PM1Graph& g, int q, double delta,
                                             const RecoveryOptions& opts = {}) {
  return recover_planted_cliques(g, q, clique_size_from_delta(g.n(), q, delta), opts);
}

// MC(n,q) recovery with nominal clique size n/q. Class sizes in MC(n,q) are
// multinomial, so ok only asks for at most q cliques covering every vertex.
inline RecoveredPartition recover_mc(const PM1Graph& g, int q, const RecoveryOptions& opts = {}) {
  if (q < 1) throw ParameterError("recover_mc: need q >= 1");
  return detail::recover(g, q, static_cast<double>(g.n()) / q, detail::CoverMode::Full, opts);
}

// True iff the groups equal the planted label classes as a set of sets and the
// unassigned vertices are exactly the unplanted ones.
inline bool verify_partition(const PlantedSample& sample, const RecoveredPartition& part) {
  const auto* truth = sample.cliques();
  if (!truth) throw std::invalid_argument("verify_partition: sample has no clique labeling");
  auto want = truth->classes();
  std::sort(want.begin(), want.end());
  auto got = part.groups;
  for (auto& g : got) std::sort(g.begin(), g.end());
  std::sort(got.begin(), got.end());
  auto un = part.unassigned;
  std::sort(un.begin(), un.end());
  return want == got && un == truth->unlabeled();
}

}  // namespace lowcolor
