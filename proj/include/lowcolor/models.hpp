#pragma once

// Samplers for the planted and null graph distributions. Every sampler is a
// pure function of (parameters, seed) and returns the hidden structure with
// the graph.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lowcolor/graph.hpp"
#include "lowcolor/rng.hpp"

namespace lowcolor {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kNoLabel = -1;

// Per-vertex clique label in [0,q), or kNoLabel for a vertex outside every
// planted clique.
struct CliqueLabeling {
  int q = 0;
  std::vector<int> labels;

  // Vertex sets of the nonempty label classes, ordered by label.
  std::vector<std::vector<Vertex>> classes() const {
    std::vector<std::vector<Vertex>> cls(static_cast<std::size_t>(q));
    for (Vertex v = 0; v < static_cast<Vertex>(labels.size()); ++v)
      if (labels[v] != kNoLabel) cls[labels[v]].push_back(v);
    std::erase_if(cls, [](const auto& c) { return c.empty(); });
    return cls;
  }
  std::vector<Vertex> unlabeled() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < static_cast<Vertex>(labels.size()); ++v)
      if (labels[v] == kNoLabel) out.push_back(v);
    return out;
  }
};

struct QuietLabel {
  int a;
  int b;
  friend bool operator==(const QuietLabel&, const QuietLabel&) = default;
};

struct QuietLabels {
  int q = 0;
  std::vector<QuietLabel> pairs;
};

struct PlantedSample {
  PM1Graph graph;
  std::variant<CliqueLabeling, QuietLabels> truth;

  const CliqueLabeling* cliques() const { return std::get_if<CliqueLabeling>(&truth); }
  const QuietLabels* quiet() const { return std::get_if<QuietLabels>(&truth); }
};

inline PM1Graph sample_gnp_half(int n, Seed seed) {
  if (n < 1) throw ParameterError("sample_gnp_half: need n >= 1");
  Rng rng(seed);
  PM1Graph g(n);
  for (EdgeId e = 0; e < num_pairs(n); ++e) g.set(e, rng.sign());
  return g;
}

namespace detail {
// Same-label pairs +1, other pairs fair coins, or +1 with probability
// cross_p when cross_p is given.
inline PM1Graph graph_from_cliques(const std::vector<int>& labels, Rng& rng,
                                   double cross_p = -1.0) {
  const int n = static_cast<int>(labels.size());
  PM1Graph g(n);
  EdgeId e = 0;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j, ++e) {
      if (labels[i] != kNoLabel && labels[i] == labels[j]) {
        g.set(e, 1);
      } else if (cross_p < 0) {
        g.set(e, rng.sign());
      } else {
        g.set(e, rng.bernoulli(cross_p) ? 1 : -1);
      }
    }
  return g;
}
}  // namespace detail

// MC(n,q): i.i.d. uniform labels, so class sizes are multinomial.
inline PlantedSample sample_mc(int n, int q, Seed seed) {
  if (n < 1) throw ParameterError("sample_mc: need n >= 1");
  if (q < 1) throw ParameterError("sample_mc: need q >= 1");
  Rng rng(seed);
  CliqueLabeling truth{q, std::vector<int>(static_cast<std::size_t>(n))};
  for (auto& l : truth.labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
  auto g = detail::graph_from_cliques(truth.labels, rng);
  return {std::move(g), std::move(truth)};
}

// Clique size k = (1-delta) n / q; throws unless it is a positive integer.
inline int clique_size_from_delta(int n, int q, double delta) {
  if (q < 1) throw ParameterError("need q >= 1");
  if (!(delta >= 0.0 && delta < 1.0)) throw ParameterError("need 0 <= delta < 1");
  const double k = (1.0 - delta) * n / q;
  const double r = std::round(k);
  if (r < 1 || std::abs(k - r) > 1e-9 * std::max(1.0, k))
    throw ParameterError("(1-delta)n/q = " + std::to_string(k) + " is not a positive integer");
  return static_cast<int>(r);
}

// MC(n,q,delta) parameterised by the clique size k: a uniform qk-subset split
// uniformly into q blocks of exactly k vertices.
inline PlantedSample sample_mc_partial_k(int n, int q, int k, Seed seed) {
  if (q < 1 || k < 1) throw ParameterError("sample_mc_partial: need q >= 1 and k >= 1");
  if (static_cast<long long>(q) * k > n) throw ParameterError("sample_mc_partial: q*k exceeds n");
  Rng rng(seed);
  auto perm = rng.permutation(n);
  CliqueLabeling truth{q, std::vector<int>(static_cast<std::size_t>(n), kNoLabel)};
  for (int idx = 0; idx < q * k; ++idx) truth.labels[perm[idx]] = idx / k;
  auto g = detail::graph_from_cliques(truth.labels, rng);
  return {std::move(g), std::move(truth)};
}

inline PlantedSample sample_mc_partial(int n, int q, double delta, Seed seed) {
  return sample_mc_partial_k(n, q, clique_size_from_delta(n, q, delta), seed);
}

// PC(N,K): a uniform K-subset made into a clique.
inline PlantedSample sample_pc(int N, int K, Seed seed) {
  if (K < 1 || K > N) throw ParameterError("sample_pc: need 1 <= K <= N");
  return sample_mc_partial_k(N, 1, K, seed);
}

// Quiet planting: labels (a,b) uniform on [q]x[q]; equal a => no edge,
// different a and equal b => edge, otherwise a fair coin.
inline PlantedSample sample_quiet(int n, int q, Seed seed) {
  if (n < 1) throw ParameterError("sample_quiet: need n >= 1");
  if (q < 1) throw ParameterError("sample_quiet: need q >= 1");
  Rng rng(seed);
  QuietLabels truth{q, {}};
  truth.pairs.reserve(static_cast<std::size_t>(n));
  const auto uq = static_cast<std::uint64_t>(q);
  for (int v = 0; v < n; ++v) {
    const int a = static_cast<int>(rng.below(uq));
    const int b = static_cast<int>(rng.below(uq));
    truth.pairs.push_back({a, b});
  }
  PM1Graph g(n);
  EdgeId e = 0;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j, ++e) {
      const auto& x = truth.pairs[i];
      const auto& y = truth.pairs[j];
      if (x.a == y.a) g.set(e, -1);
      else if (x.b == y.b) g.set(e, 1);
      else g.set(e, rng.sign());
    }
  return {std::move(g), std::move(truth)};
}

// Cross-label edge probability that makes the MC(n,q) edge marginal exactly 1/2.
inline double edge_corrected_cross_probability(int q) {
  if (q < 2) throw ParameterError("edge-corrected planting: need q >= 2");
  return (0.5 - 1.0 / q) / (1.0 - 1.0 / q);
}

inline PlantedSample sample_edge_corrected(int n, int q, Seed seed) {
  const double p = edge_corrected_cross_probability(q);
  if (n < 1) throw ParameterError("sample_edge_corrected: need n >= 1");
  Rng rng(seed);
  CliqueLabeling truth{q, std::vector<int>(static_cast<std::size_t>(n))};
  for (auto& l : truth.labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
  auto g = detail::graph_from_cliques(truth.labels, rng, p);
  return {std::move(g), std::move(truth)};
}

// Checks the deterministic part of the planted structure against the graph.
inline bool truth_consistent(const PlantedSample& s) {
  const int n = s.graph.n();
  if (const auto* c = s.cliques()) {
    if (static_cast<int>(c->labels.size()) != n) return false;
    for (Vertex i = 0; i < n; ++i) {
      if (c->labels[i] != kNoLabel && (c->labels[i] < 0 || c->labels[i] >= c->q)) return false;
      for (Vertex j = i + 1; j < n; ++j)
        if (c->labels[i] != kNoLabel && c->labels[i] == c->labels[j] && !s.graph.has_edge(i, j))
          return false;
    }
    return true;
  }
  const auto& qt = *s.quiet();
  if (static_cast<int>(qt.pairs.size()) != n) return false;
  for (Vertex i = 0; i < n; ++i) {
    const auto& x = qt.pairs[i];
    if (x.a < 0 || x.a >= qt.q || x.b < 0 || x.b >= qt.q) return false;
    for (Vertex j = i + 1; j < n; ++j) {
      const auto& y = qt.pairs[j];
      if (x.a == y.a && s.graph.has_edge(i, j)) return false;
      if (x.a != y.a && x.b == y.b && !s.graph.has_edge(i, j)) return false;
    }
  }
  return true;
}

// A distribution by name, e.g. "gnp", "mc:10", "mcp:4:20" (q and clique size
// k), "pc:50", "quiet:4", "ec:4". The vertex count is supplied separately.
struct ModelSpec {
  enum class Kind { Gnp, Mc, McPartial, Pc, Quiet, EdgeCorrected };
  Kind kind = Kind::Gnp;
  int q = 1;
  int k = 0;

  static ModelSpec parse(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      auto pos = text.find(':', start);
      parts.push_back(text.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    auto num = [&](std::size_t i) {
      if (i >= parts.size()) throw ParameterError("model spec '" + text + "' is missing a parameter");
      try {
        std::size_t used = 0;
        int v = std::stoi(parts[i], &used);
        if (used != parts[i].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::logic_error&) {
        throw ParameterError("model spec '" + text + "': bad integer '" + parts[i] + "'");
      }
    };
    ModelSpec m;
    const auto& name = parts[0];
    std::size_t expected = 2;
    if (name == "gnp") { m.kind = Kind::Gnp; expected = 1; }
    else if (name == "mc") { m.kind = Kind::Mc; m.q = num(1); }
    else if (name == "mcp") { m.kind = Kind::McPartial; m.q = num(1); m.k = num(2); expected = 3; }
    else if (name == "pc") { m.kind = Kind::Pc; m.k = num(1); }
    else if (name == "quiet") { m.kind = Kind::Quiet; m.q = num(1); }
    else if (name == "ec") { m.kind = Kind::EdgeCorrected; m.q = num(1); }
    else throw ParameterError("unknown model '" + name + "' (expected gnp, mc, mcp, pc, quiet, ec)");
    if (parts.size() != expected) throw ParameterError("model spec '" + text + "': wrong parameter count");
    return m;
  }

  std::string str() const {
    switch (kind) {
      case Kind::Gnp: return "gnp";
      case Kind::Mc: return "mc:" + std::to_string(q);
      case Kind::McPartial: return "mcp:" + std::to_string(q) + ":" + std::to_string(k);
      case Kind::Pc: return "pc:" + std::to_string(k);
      case Kind::Quiet: return "quiet:" + std::to_string(q);
      case Kind::EdgeCorrected: return "ec:" + std::to_string(q);
    }
    return "?";
  }
};

inline PlantedSample sample_model(const ModelSpec& m, int n, Seed seed) {
  switch (m.kind) {
    case ModelSpec::Kind::Gnp: {
      // Report as an unplanted labeling so every sample carries a truth.
      CliqueLabeling none{1, std::vector<int>(static_cast<std::size_t>(n), kNoLabel)};
      return {sample_gnp_half(n, seed), std::move(none)};
    }
    case ModelSpec::Kind::Mc: return sample_mc(n, m.q, seed);
    case ModelSpec::Kind::McPartial: return sample_mc_partial_k(n, m.q, m.k, seed);
    case ModelSpec::Kind::Pc: return sample_pc(n, m.k, seed);
    case ModelSpec::Kind::Quiet: return sample_quiet(n, m.q, seed);
    case ModelSpec::Kind::EdgeCorrected: return sample_edge_corrected(n, m.q, seed);
  }
  throw ParameterError("unknown model");
}

}  // namespace lowcolor
