#pragma once

// Graph encoding over {-1,+1}^{C(n,2)}, edge subsets (monomials) and their
// bounded enumeration.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lowcolor {

using Vertex = int;
using EdgeId = std::int64_t;

struct InvalidPair : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline EdgeId num_pairs(int n) { return static_cast<EdgeId>(n) * (n - 1) / 2; }

// Lexicographic rank of (i,j), i<j, among all pairs of [n].
inline EdgeId edge_index(Vertex i, Vertex j, int n) {
  if (i < 0 || i >= j || j >= n)
    throw InvalidPair("edge_index: need 0 <= i < j < n, got (" + std::to_string(i) + "," +
                      std::to_string(j) + ") with n=" + std::to_string(n));
  return static_cast<EdgeId>(i) * (2 * static_cast<EdgeId>(n) - i - 1) / 2 + (j - i - 1);
}

struct Endpoints {
  Vertex u;
  Vertex v;
  friend bool operator==(const Endpoints&, const Endpoints&) = default;
};

inline Endpoints edge_endpoints(EdgeId e, int n) {
  if (e < 0 || e >= num_pairs(n)) throw InvalidPair("edge_endpoints: edge index out of range");
  Vertex i = 0;
  EdgeId row = n - 1;  // pairs with first vertex i
  while (e >= row) {
    e -= row;
    ++i;
    --row;
  }
  return {i, static_cast<Vertex>(i + 1 + e)};
}

// Precomputed endpoint table for repeated lookups on a fixed n.
class PairTable {
 public:
  explicit PairTable(int n) : n_(n) {
    ends_.reserve(static_cast<std::size_t>(num_pairs(n)));
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = i + 1; j < n; ++j) ends_.push_back({i, j});
  }
  int n() const { return n_; }
  std::size_t size() const { return ends_.size(); }
  const Endpoints& operator[](EdgeId e) const { return ends_[static_cast<std::size_t>(e)]; }

 private:
  int n_;
  std::vector<Endpoints> ends_;
};

// An n-vertex graph as a sign vector; +1 means the edge is present.
class PM1Graph {
 public:
  PM1Graph() = default;

  // All pairs set to `fill` (+1 = complete graph, -1 = empty graph).
  explicit PM1Graph(int n, std::int8_t fill = -1) : n_(n) {
    if (n < 0) throw std::invalid_argument("PM1Graph: negative vertex count");
    if (fill != 1 && fill != -1) throw std::invalid_argument("PM1Graph: fill must be +1 or -1");
    signs_.assign(static_cast<std::size_t>(num_pairs(n)), fill);
  }

  PM1Graph(int n, std::vector<std::int8_t> signs) : n_(n), signs_(std::move(signs)) {
    if (n < 0 || static_cast<EdgeId>(signs_.size()) != num_pairs(n))
      throw std::invalid_argument("PM1Graph: sign vector length must be n(n-1)/2");
    for (auto s : signs_)
      if (s != 1 && s != -1) throw std::invalid_argument("PM1Graph: entries must be +1 or -1");
  }

  static PM1Graph complete(int n) { return PM1Graph(n, 1); }
  static PM1Graph empty(int n) { return PM1Graph(n, -1); }

  int n() const { return n_; }
  std::span<const std::int8_t> signs() const { return signs_; }

  std::int8_t sign(EdgeId e) const { return signs_[static_cast<std::size_t>(e)]; }
  std::int8_t sign(Vertex i, Vertex j) const {
    if (i == j) throw InvalidPair("PM1Graph::sign: loop");
    if (i > j) std::swap(i, j);
    return signs_[static_cast<std::size_t>(edge_index(i, j, n_))];
  }
  bool has_edge(Vertex i, Vertex j) const { return sign(i, j) == 1; }

  void set(EdgeId e, std::int8_t s) { signs_[static_cast<std::size_t>(e)] = s; }
  void set(Vertex i, Vertex j, std::int8_t s) {
    if (i > j) std::swap(i, j);
    signs_[static_cast<std::size_t>(edge_index(i, j, n_))] = s;
  }

  std::int64_t edge_count() const {
    return std::count(signs_.begin(), signs_.end(), std::int8_t{1});
  }

  // Graph on vertices perm-mapped: vertex v of *this becomes perm[v].
  PM1Graph relabeled(std::span<const Vertex> perm) const {
    PM1Graph out(n_);
    EdgeId e = 0;
    for (Vertex i = 0; i < n_; ++i)
      for (Vertex j = i + 1; j < n_; ++j, ++e) out.set(perm[i], perm[j], signs_[e]);
    return out;
  }

  // Induced subgraph on vertices 0..m-1.
  PM1Graph prefix(int m) const {
    PM1Graph out(m);
    EdgeId e = 0;
    for (Vertex i = 0; i < m; ++i)
      for (Vertex j = i + 1; j < m; ++j, ++e) out.set(e, sign(i, j));
    return out;
  }

  friend bool operator==(const PM1Graph&, const PM1Graph&) = default;

 private:
  int n_ = 0;
  std::vector<std::int8_t> signs_;
};

inline PM1Graph complement(const PM1Graph& g) {
  std::vector<std::int8_t> s(g.signs().begin(), g.signs().end());
  for (auto& x : s) x = static_cast<std::int8_t>(-x);
  return PM1Graph(g.n(), std::move(s));
}

// Graph with bit i of `mask` giving the sign of edge i (1 => +1).
inline PM1Graph graph_from_mask(int n, std::uint64_t mask) {
  std::vector<std::int8_t> s(static_cast<std::size_t>(num_pairs(n)));
  for (std::size_t e = 0; e < s.size(); ++e) s[e] = (mask >> e) & 1u ? 1 : -1;
  return PM1Graph(n, std::move(s));
}

// A set of edge indices, kept sorted and duplicate-free.
class EdgeSubset {
 public:
  EdgeSubset() = default;
  EdgeSubset(int n, std::vector<EdgeId> edges) : n_(n), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw std::invalid_argument("EdgeSubset: duplicate edge");
    if (!edges_.empty() && (edges_.front() < 0 || edges_.back() >= num_pairs(n)))
      throw std::invalid_argument("EdgeSubset: edge index out of range");
  }

  static EdgeSubset from_pairs(int n, std::initializer_list<Endpoints> pairs) {
    std::vector<EdgeId> es;
    for (auto [u, v] : pairs) es.push_back(edge_index(std::min(u, v), std::max(u, v), n));
    return EdgeSubset(n, std::move(es));
  }

  int n() const { return n_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  std::span<const EdgeId> edges() const { return edges_; }

  // V(alpha): vertices incident to at least one edge, ascending.
  std::vector<Vertex> vertices() const {
    std::vector<Vertex> vs;
    for (auto e : edges_) {
      auto [u, v] = edge_endpoints(e, n_);
      vs.push_back(u);
      vs.push_back(v);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }

  EdgeSubset symmetric_difference(const EdgeSubset& other) const {
    std::vector<EdgeId> out;
    std::set_symmetric_difference(edges_.begin(), edges_.end(), other.edges_.begin(),
                                  other.edges_.end(), std::back_inserter(out));
    return EdgeSubset(n_, std::move(out));
  }

  bool is_subset_of(const EdgeSubset& other) const {
    return std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
  }

  friend bool operator==(const EdgeSubset&, const EdgeSubset&) = default;
  friend auto operator<=>(const EdgeSubset& a, const EdgeSubset& b) {
    return a.edges_ <=> b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<EdgeId> edges_;
};

// Y^alpha = prod of signs over alpha.
inline int monomial_value(const PM1Graph& g, const EdgeSubset& alpha) {
  if (g.n() != alpha.n()) throw std::invalid_argument("monomial_value: vertex counts differ");
  int s = 1;
  for (auto e : alpha.edges()) s *= g.sign(e);
  return s;
}

namespace detail {
struct UnionFind {
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
  std::vector<int> parent;
};
}  // namespace detail

// Maximal vertex-connected groups of edges, ordered by smallest edge index.
inline std::vector<EdgeSubset> connected_components(const EdgeSubset& alpha) {
  const int n = alpha.n();
  detail::UnionFind uf(n);
  for (auto e : alpha.edges()) {
    auto [u, v] = edge_endpoints(e, n);
    uf.unite(u, v);
  }
  std::vector<int> root_slot(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<EdgeId>> groups;
  for (auto e : alpha.edges()) {
    int r = uf.find(edge_endpoints(e, n).u);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[root_slot[r]].push_back(e);
  }
  std::vector<EdgeSubset> out;
  out.reserve(groups.size());
  for (auto& grp : groups) out.emplace_back(n, std::move(grp));
  return out;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of subsets enumerate_subsets(n, max_edges) will yield.
inline std::uint64_t subset_count(int n, int max_edges) {
  const auto N = static_cast<std::uint64_t>(num_pairs(n));
  std::uint64_t total = 0;
  for (int s = 0; s <= max_edges && static_cast<std::uint64_t>(s) <= N; ++s)
    total += binomial(N, static_cast<std::uint64_t>(s));
  return total;
}

// Streams every alpha with |alpha| <= max_edges exactly once: the empty set
// first, then by increasing size, lexicographic within a size. The count grows
// like C(n(n-1)/2, max_edges); see subset_count().
class SubsetStream {
 public:
  SubsetStream(int n, int max_edges)
      : n_(n), total_(num_pairs(n)), max_edges_(std::max(0, max_edges)) {}

  // Writes the next subset to `out`; false once exhausted.
  bool next(EdgeSubset& out) {
    if (done_) return false;
    if (!started_) {
      started_ = true;
      out = EdgeSubset(n_, {});
      if (!advance_size()) done_ = true;
      return true;
    }
    out = EdgeSubset(n_, comb_);
    if (!advance_comb() && !advance_size()) done_ = true;
    return true;
  }

 private:
  bool advance_size() {
    const int s = static_cast<int>(comb_.size()) + 1;
    if (s > max_edges_ || s > total_) return false;
    comb_.resize(static_cast<std::size_t>(s));
    std::iota(comb_.begin(), comb_.end(), EdgeId{0});
    return true;
  }
  bool advance_comb() {
    const auto s = static_cast<EdgeId>(comb_.size());
    for (EdgeId i = s - 1; i >= 0; --i) {
      if (comb_[i] < total_ - s + i) {
        ++comb_[i];
        for (EdgeId j = i + 1; j < s; ++j) comb_[j] = comb_[j - 1] + 1;
        return true;
      }
    }
    return false;
  }

  int n_;
  EdgeId total_;
  int max_edges_;
  bool started_ = false;
  bool done_ = false;
  std::vector<EdgeId> comb_;
};

inline SubsetStream enumerate_subsets(int n, int max_edges) { return SubsetStream(n, max_edges); }

template <class Fn>
void for_each_subset(int n, int max_edges, Fn&& fn) {
  auto stream = enumerate_subsets(n, max_edges);
  EdgeSubset a;
  while (stream.next(a)) fn(a);
}

// Small pattern graph on vertices 0..num_vertices-1; used as memo key.
struct Pattern {
  int num_vertices = 0;
  std::vector<std::pair<std::uint8_t, std::uint8_t>> edges;  // sorted, u < v
  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

// Relabel V(alpha) to 0..|V|-1 in order of first appearance along the sorted
// edge list, then sort the relabeled edges. Equal keys imply isomorphic
// subgraphs; the converse does not hold.
inline Pattern canonical_key(const EdgeSubset& alpha) {
  std::vector<int> label(static_cast<std::size_t>(alpha.n()), -1);
  Pattern p;
  auto id = [&](Vertex v) {
    if (label[v] < 0) label[v] = p.num_vertices++;
    return static_cast<std::uint8_t>(label[v]);
  };
  for (auto e : alpha.edges()) {
    auto [u, v] = edge_endpoints(e, alpha.n());
    auto a = id(u), b = id(v);
    p.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(p.edges.begin(), p.edges.end());
  return p;
}

struct PatternHash {
  std::size_t operator()(const Pattern& p) const noexcept {
    std::size_t h = static_cast<std::size_t>(p.num_vertices) * 0x9E3779B97F4A7C15ull;
    for (auto [u, v] : p.edges)
      h = (h ^ (static_cast<std::size_t>(u) << 8 | v)) * 0x100000001B3ull;
    return h;
  }
};

}  // namespace lowcolor
