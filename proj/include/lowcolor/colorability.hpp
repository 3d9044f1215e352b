#pragma once

// Exact q-colourability by backtracking, for graphs with at most 64 vertices.
// Worst case exponential; comfortable up to n of about 40 on dense random
// inputs.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "lowcolor/graph.hpp"
#include "lowcolor/models.hpp"
#include "lowcolor/parallel.hpp"
#include "lowcolor/rng.hpp"

namespace lowcolor {

inline constexpr int kMaxColoringVertices = 64;

struct ColorAssignment {
  std::vector<int> colors;  // per vertex, in [0,q)
};

inline bool is_proper_coloring(const PM1Graph& g, const std::vector<int>& colors, int q) {
  if (static_cast<int>(colors.size()) != g.n()) return false;
  for (auto c : colors)
    if (c < 0 || c >= q) return false;
  EdgeId e = 0;
  for (Vertex i = 0; i < g.n(); ++i)
    for (Vertex j = i + 1; j < g.n(); ++j, ++e)
      if (g.sign(e) == 1 && colors[i] == colors[j]) return false;
  return true;
}

namespace detail {

// Vertices in descending-degree order; colour i may exceed the largest colour
// used so far by at most one; a colour is rejected early if it leaves some
// uncoloured neighbour with no colour available.
class ColoringSearch {
 public:
  ColoringSearch(const PM1Graph& g, int q) : n_(g.n()), q_(std::min(q, std::max(1, g.n()))) {
    adj_.assign(static_cast<std::size_t>(n_), 0);
    EdgeId e = 0;
    for (Vertex i = 0; i < n_; ++i)
      for (Vertex j = i + 1; j < n_; ++j, ++e)
        if (g.sign(e) == 1) {
          adj_[i] |= std::uint64_t{1} << j;
          adj_[j] |= std::uint64_t{1} << i;
        }
    order_.resize(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) order_[v] = v;
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return std::popcount(adj_[a]) > std::popcount(adj_[b]);
    });
    color_.assign(static_cast<std::size_t>(n_), -1);
    forbid_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(q_), 0);
    avail_.assign(static_cast<std::size_t>(n_), q_);
  }

  std::optional<std::vector<int>> solve() {
    if (n_ == 0) return std::vector<int>{};
    if (search(0, -1)) return color_;
    return std::nullopt;
  }

 private:
  int& forbid(int v, int c) { return forbid_[static_cast<std::size_t>(v) * q_ + c]; }

  bool assign(int v, int c) {
    color_[v] = c;
    bool alive = true;
    for (auto m = adj_[v]; m; m &= m - 1) {
      const int u = std::countr_zero(m);
      if (color_[u] >= 0) continue;
      if (forbid(u, c)++ == 0 && --avail_[u] == 0) alive = false;
    }
    return alive;
  }
  void unassign(int v, int c) {
    for (auto m = adj_[v]; m; m &= m - 1) {
      const int u = std::countr_zero(m);
      if (color_[u] >= 0) continue;
      if (--forbid(u, c) == 0) ++avail_[u];
    }
    color_[v] = -1;
  }

  bool search(int pos, int max_used) {
    if (pos == n_) return true;
    const int v = order_[pos];
    const int limit = std::min(q_, max_used + 2);
    for (int c = 0; c < limit; ++c) {
      if (forbid(v, c) > 0) continue;
      const bool alive = assign(v, c);
      if (alive && search(pos + 1, std::max(max_used, c))) return true;
      unassign(v, c);
    }
    return false;
  }

  int n_;
  int q_;
  std::vector<std::uint64_t> adj_;
  std::vector<int> order_;
  std::vector<int> color_;
  std::vector<int> forbid_;
  std::vector<int> avail_;
};

}  // namespace detail

// A proper colouring with colours in [0,q) if one exists.
inline std::optional<ColorAssignment> is_q_colorable(const PM1Graph& g, int q) {
  if (q < 1) throw ParameterError("is_q_colorable: need q >= 1");
  if (g.n() > kMaxColoringVertices)
    throw ParameterError("is_q_colorable: at most 64 vertices supported");
  auto colors = detail::ColoringSearch(g, q).solve();
  if (!colors) return std::nullopt;
  return ColorAssignment{std::move(*colors)};
}

// True iff the vertices split into at most q cliques.
inline bool has_clique_cover(const PM1Graph& g, int q) {
  return is_q_colorable(complement(g), q).has_value();
}

// Fraction of MC(n, q+1) samples admitting no cover by q cliques.
inline double appendix_check(int n, int q, int trials, Seed seed) {
  if (trials < 1) throw ParameterError("appendix_check: need trials >= 1");
  if (q < 1) throw ParameterError("appendix_check: need q >= 1");
  auto no_cover = parallel_map<int>(static_cast<std::size_t>(trials), [&](std::size_t t) {
    return has_clique_cover(sample_mc(n, q + 1, sub_seed(seed, t)).graph, q) ? 0 : 1;
  });
  int count = 0;
  for (int x : no_cover) count += x;
  return static_cast<double>(count) / trials;
}

}  // namespace lowcolor
