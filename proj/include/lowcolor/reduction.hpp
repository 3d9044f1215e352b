#pragma once

// Planted clique to planted partial colouring: append q-1 disjoint k-cliques
// to an N-vertex graph, run clique recovery on the lifted graph, and answer
// "planted" iff a recovered clique lies inside the original vertices.

#include <cstdint>
#include <vector>

#include "lowcolor/graph.hpp"
#include "lowcolor/models.hpp"
#include "lowcolor/recovery.hpp"
#include "lowcolor/rng.hpp"

namespace lowcolor {

struct LiftedInstance {
  PM1Graph graph;
  int original_n = 0;
  int q = 0;
  int k = 0;
  // Block index in [0, q-1) of appended vertex original_n + i.
  std::vector<int> block_of_added;
};

// Appended vertex N + b*k + r belongs to block b. Pairs not inside a block and
// not both original are fair coins; the original graph is copied verbatim.
inline LiftedInstance lift_pc_instance(const PM1Graph& gn, int q, int k, Seed seed) {
  if (q < 2 || k < 1) throw ParameterError("lift_pc_instance: need q >= 2 and k >= 1");
  const int N = gn.n();
  const int n = N + (q - 1) * k;
  Rng rng(seed);
  LiftedInstance out{PM1Graph(n), N, q, k, {}};
  out.block_of_added.resize(static_cast<std::size_t>((q - 1) * k));
  for (int i = 0; i < (q - 1) * k; ++i) out.block_of_added[i] = i / k;
  auto block = [&](Vertex v) { return v < N ? -1 : out.block_of_added[v - N]; };
  EdgeId e = 0;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j, ++e) {
      if (j < N) out.graph.set(e, gn.sign(i, j));
      else if (i >= N && block(i) == block(j)) out.graph.set(e, 1);
      else out.graph.set(e, rng.sign());
    }
  return out;
}

struct ReductionVerdict {
  enum class Verdict { PlantedClique, Null };
  Verdict verdict = Verdict::Null;
  bool found_clique_in_original = false;
  bool recovery_ok = false;
  int n_lifted = 0;
  // delta of the lifted instance: delta * n_lifted = N - k.
  double delta = 0.0;
};

inline ReductionVerdict pc_distinguisher(const PM1Graph& gn, int q, int k, Seed seed,
                                         const RecoveryOptions& opts = {}) {
  if (gn.n() < k) throw ParameterError("pc_distinguisher: need N >= k");
  auto lifted = lift_pc_instance(gn, q, k, seed);
  ReductionVerdict v;
  v.n_lifted = lifted.graph.n();
  v.delta = static_cast<double>(gn.n() - k) / v.n_lifted;
  auto part = recover_planted_cliques(lifted.graph, q, k, opts);
  v.recovery_ok = part.ok;
  if (part.ok) {
    for (const auto& grp : part.groups)
      if (!grp.empty() && grp.back() < gn.n()) v.found_clique_in_original = true;
  }
  v.verdict = v.found_clique_in_original ? ReductionVerdict::Verdict::PlantedClique
                                         : ReductionVerdict::Verdict::Null;
  return v;
}

}  // namespace lowcolor
